// Copyright 2026 The ampwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ampwit/fock_core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ampwit/errors.h"
#include "ampwit/parallel.h"

namespace ampwit {

PhotonNumberDistribution::PhotonNumberDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
}

double PhotonNumberDistribution::p2plus() const {
    double tail = 0;
    for (size_t n = 2; n < probs_.size(); n++) {
        tail += probs_[n];
    }
    return tail;
}

ValidationResult validate(const PhotonNumberDistribution &dist) {
    auto probs = dist.probs();
    if (probs.empty()) {
        return {false, "empty distribution"};
    }
    for (size_t n = 0; n < probs.size(); n++) {
        if (!std::isfinite(probs[n])) {
            std::ostringstream out;
            out << "p[" << n << "] is not finite";
            return {false, out.str()};
        }
        if (probs[n] < 0) {
            std::ostringstream out;
            out << "p[" << n << "] = " << probs[n] << " is negative";
            return {false, out.str()};
        }
    }
    double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(sum - 1) > kNormalizationTolerance) {
        std::ostringstream out;
        out.precision(12);
        out << "sum = " << sum << " (expected 1 within " << kNormalizationTolerance << ")";
        return {false, out.str()};
    }
    return {};
}

void require_valid(const PhotonNumberDistribution &dist) {
    auto result = validate(dist);
    if (!result) {
        throw ValidationError("invalid photon-number distribution: " + result.message);
    }
}

MomentSummary make_moment_summary(double m, double s2) {
    MomentSummary out{m, s2, std::nullopt};
    if (m > 0) {
        out.g2_pre = 1 + (s2 - m) / (m * m);
    }
    return out;
}

MomentSummary moments(const PhotonNumberDistribution &dist) {
    require_valid(dist);
    auto probs = dist.probs();
    double m = 0;
    for (size_t n = 0; n < probs.size(); n++) {
        m += static_cast<double>(n) * probs[n];
    }
    // Central second moment directly, avoiding E[n^2] - m^2 cancellation.
    double s2 = 0;
    for (size_t n = 0; n < probs.size(); n++) {
        double d = static_cast<double>(n) - m;
        s2 += d * d * probs[n];
    }
    return make_moment_summary(m, s2);
}

double IntensityDistribution::integral() const {
    double total = 0;
    for (size_t i = 1; i < grid.size(); i++) {
        total += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    return total;
}

double IntensityDistribution::mean() const {
    double total = 0;
    for (size_t i = 1; i < grid.size(); i++) {
        total += 0.5 * (grid[i] * density[i] + grid[i - 1] * density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    return total;
}

PulseRecordSet PulseRecordSet::conditioned() const {
    if (!herald.has_value()) {
        throw ValidationError("record set has no herald column to condition on");
    }
    PulseRecordSet out;
    out.meta = meta;
    out.meta["conditioned"] = "herald=1";
    for (size_t i = 0; i < counts.size(); i++) {
        if ((*herald)[i]) {
            out.counts.push_back(counts[i]);
        }
    }
    return out;
}

PulseRecordSet PulseRecordSet::scaled(double factor) const {
    PulseRecordSet out = *this;
    for (double &c : out.counts) {
        c *= factor;
    }
    return out;
}

ValidationResult validate(const PulseRecordSet &records) {
    if (records.herald.has_value() && records.herald->size() != records.counts.size()) {
        return {false, "herald column length differs from counts"};
    }
    for (size_t i = 0; i < records.counts.size(); i++) {
        double c = records.counts[i];
        if (!std::isfinite(c) || c < 0) {
            std::ostringstream out;
            out << "counts[" << i << "] = " << c << " is not a finite non-negative value";
            return {false, out.str()};
        }
    }
    return {};
}

double sample_g2(double mean, double unbiased_variance) {
    return 1 + (unbiased_variance - mean) / (mean * mean);
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) {
        return 0;
    }
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double acc = 0;
    for (double v : values) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

Interval percentile_interval(std::vector<double> replicates, double level) {
    std::erase_if(replicates, [](double v) { return !std::isfinite(v); });
    if (replicates.empty()) {
        return {std::nan(""), std::nan("")};
    }
    std::sort(replicates.begin(), replicates.end());
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(replicates.size() - 1);
        auto lo = static_cast<size_t>(std::floor(pos));
        size_t hi = std::min(lo + 1, replicates.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return replicates[lo] * (1 - frac) + replicates[hi] * frac;
    };
    return {quantile(0.5 * (1 - level)), quantile(0.5 * (1 + level))};
}

namespace {

struct SampleMoments {
    double mean;
    double variance;
};

// Shifted sums around `pivot` keep the variance accurate for large counts.
template <typename IndexFn>
SampleMoments shifted_moments(size_t n, double pivot, IndexFn value_at) {
    double sum = 0;
    double sum_sq = 0;
    for (size_t i = 0; i < n; i++) {
        double d = value_at(i) - pivot;
        sum += d;
        sum_sq += d * d;
    }
    double nd = static_cast<double>(n);
    double shift = sum / nd;
    return {pivot + shift, (sum_sq - nd * shift * shift) / (nd - 1)};
}

}  // namespace

MomentEstimate estimate_moments(const PulseRecordSet &records, const BootstrapOptions &options) {
    auto check = validate(records);
    if (!check) {
        throw ValidationError("invalid pulse records: " + check.message);
    }
    const auto &counts = records.counts;
    size_t n = counts.size();
    if (n < 2) {
        throw DomainError("moment estimation needs at least 2 records");
    }
    if (std::all_of(counts.begin(), counts.end(), [](double c) { return c == 0; })) {
        throw DomainError("moment estimation failed: all counts are zero");
    }
    double pivot = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(n);
    auto full = shifted_moments(n, pivot, [&](size_t i) { return counts[i]; });

    MomentEstimate out;
    out.n = n;
    out.mean = full.mean;
    out.variance = std::max(0.0, full.variance);
    out.g2 = sample_g2(out.mean, out.variance);

    size_t resamples = options.resamples;
    std::vector<double> means(resamples), variances(resamples), g2s(resamples);
    parallel_for(resamples, [&](size_t b) {
        std::mt19937_64 rng(derive_seed(options.seed, b));
        std::uniform_int_distribution<size_t> pick(0, n - 1);
        std::vector<size_t> idx(n);
        for (auto &k : idx) {
            k = pick(rng);
        }
        auto rep = shifted_moments(n, pivot, [&](size_t i) { return counts[idx[i]]; });
        means[b] = rep.mean;
        variances[b] = std::max(0.0, rep.variance);
        g2s[b] = rep.mean > 0 ? sample_g2(rep.mean, variances[b]) : std::nan("");
    });
    if (resamples >= 2) {
        out.mean_ci = percentile_interval(means, options.level);
        out.variance_ci = percentile_interval(variances, options.level);
        out.mean_se = sample_stddev(means);
        std::erase_if(g2s, [](double v) { return !std::isfinite(v); });
        out.g2_ci = g2s.empty() ? Interval{out.g2, out.g2} : percentile_interval(g2s, options.level);
        out.g2_se = g2s.size() >= 2 ? sample_stddev(g2s) : 0.0;
    } else {
        out.mean_ci = {out.mean, out.mean};
        out.variance_ci = {out.variance, out.variance};
        out.g2_ci = {out.g2, out.g2};
    }
    return out;
}

std::string_view to_string(VerdictCategory category) {
    switch (category) {
        case VerdictCategory::NonGaussian:
            return "NonGaussian";
        case VerdictCategory::NonClassicalOnly:
            return "NonClassicalOnly";
        case VerdictCategory::Classical:
            return "Classical";
        case VerdictCategory::BelowPhaseIndependentFloor:
            return "BelowPhaseIndependentFloor";
        case VerdictCategory::NonPhysical:
            return "NonPhysical";
    }
    return "Unknown";
}

const BoundaryMargin *WitnessVerdict::margin(std::string_view boundary) const {
    for (const auto &m : margins) {
        if (m.boundary == boundary) {
            return &m;
        }
    }
    return nullptr;
}

}  // namespace ampwit
