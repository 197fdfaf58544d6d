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

#include "ampwit/opa.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "ampwit/errors.h"
#include "ampwit/state_models.h"
#include "ampwit/hermite.h"
#include "ampwit/parallel.h"

namespace ampwit {

GainSetting::GainSetting(double gain) : gain_(gain) {
    if (!(gain > 0 && gain <= kMaxGain)) {
        std::ostringstream out;
        out << "gain must lie in (0, " << kMaxGain << "], got " << gain;
        throw DomainError(out.str());
    }
}

double GainSetting::vacuum_mean() const {
    if (gain_ <= 15) {
        double s = std::sinh(gain_);
        return s * s;
    }
    // sinh^2 G = e^(2G) / 4 * (1 - e^(-2G))^2
    return std::exp(2 * gain_ - 2 * std::log(2.0) + 2 * std::log1p(-std::exp(-2 * gain_)));
}

double GainSetting::quadrature_vacuum_mean() const {
    return std::exp(2 * gain_ - 2 * std::log(2.0));
}

double amplified_mean(double m, const GainSetting &gain) {
    if (!(m >= 0) || !std::isfinite(m)) {
        throw DomainError("amplified_mean: input mean must be finite and >= 0");
    }
    return (2 * m + 1) * gain.vacuum_mean() + m;
}

AsymptoticMoments asymptotic_moments(double m, double s2) {
    AsymptoticMoments out;
    out.mu_rel = 2 * m + 1;
    out.sigma2_rel = 2 * (1 + m + m * m + 3 * s2);
    out.g2_post = 1 + out.sigma2_rel / (out.mu_rel * out.mu_rel);
    return out;
}

AsymptoticMoments asymptotic_moments(const MomentSummary &ms) {
    if (!(ms.m >= 0) || !(ms.s2 >= 0)) {
        throw ValidationError("asymptotic_moments: moment summary needs m >= 0 and s2 >= 0");
    }
    return asymptotic_moments(ms.m, ms.s2);
}

MomentSummary preamp_moments(double mu_rel, double g2) {
    double m = (mu_rel - 1) / 2;
    double s2 = ((g2 - 1) * mu_rel * mu_rel / 2 - 1 - m - m * m) / 3;
    return make_moment_summary(m, s2);
}

namespace {

size_t highest_occupied(const PhotonNumberDistribution &dist) {
    auto probs = dist.probs();
    for (size_t n = probs.size(); n-- > 0;) {
        if (probs[n] > 0) {
            return n;
        }
    }
    return 0;
}

// Components above kMaxFockNumber are dropped when their total mass is below
// kTruncationTail; otherwise the state is out of range.
size_t fock_support(const PhotonNumberDistribution &dist, const char *what) {
    auto probs = dist.probs();
    double beyond = 0;
    for (size_t n = kMaxFockNumber + 1; n < probs.size(); n++) {
        beyond += probs[n];
    }
    if (beyond >= kTruncationTail) {
        std::ostringstream out;
        out << what << " supports Fock components up to n = " << kMaxFockNumber << "; mass " << beyond
            << " lies beyond";
        throw DomainError(out.str());
    }
    return std::min(highest_occupied(dist), kMaxFockNumber);
}

void require_intensity_preconditions(const PhotonNumberDistribution &dist, const GainSetting &gain) {
    require_valid(dist);
    if (!gain.asymptotic_ok()) {
        std::ostringstream out;
        out << "intensity distribution uses the high-gain approximation and needs G >= " << kAsymptoticGain
            << ", got " << gain.value();
        throw DomainError(out.str());
    }
    fock_support(dist, "intensity distribution");
}

}  // namespace

std::vector<double> intensity_grid(const PhotonNumberDistribution &dist, const GainSetting &gain,
                                   const IntensityGridSpec &spec) {
    if (spec.points < 2 || !(spec.t_min > 0)) {
        throw ValidationError("intensity grid needs >= 2 points and t_min > 0");
    }
    double t_max = spec.t_max;
    if (t_max == 0) {
        double reach = std::sqrt(2 * static_cast<double>(fock_support(dist, "intensity grid")) + 1) + 7;
        t_max = 2 * reach * reach;
    }
    if (!(t_max > spec.t_min)) {
        throw ValidationError("intensity grid needs t_max > t_min");
    }
    double scale = gain.quadrature_vacuum_mean();
    double log_lo = std::log(spec.t_min);
    double log_hi = std::log(t_max);
    std::vector<double> grid(spec.points);
    for (size_t i = 0; i < spec.points; i++) {
        double f = static_cast<double>(i) / static_cast<double>(spec.points - 1);
        grid[i] = scale * std::exp(log_lo + f * (log_hi - log_lo));
    }
    return grid;
}

double grid_coverage(const PhotonNumberDistribution &dist, const GainSetting &gain, double n_lo, double n_hi) {
    auto probs = dist.probs().first(fock_support(dist, "intensity distribution") + 1);
    double shrink = std::exp(-gain.value());
    double x_lo = shrink * std::sqrt(2 * n_lo);
    double x_hi = shrink * std::sqrt(2 * n_hi);
    // Composite Simpson in x; |psi_n|^2 is smooth so this is accurate far
    // beyond the coverage threshold.
    const size_t intervals = 4000;
    double h = (x_hi - x_lo) / intervals;
    std::vector<double> psi(probs.size());
    auto mixture_density = [&](double x) {
        oscillator_wavefunctions(x, psi);
        double acc = 0;
        for (size_t n = 0; n < probs.size(); n++) {
            acc += probs[n] * psi[n] * psi[n];
        }
        return 2 * acc;
    };
    double total = mixture_density(x_lo) + mixture_density(x_hi);
    for (size_t i = 1; i < intervals; i++) {
        total += (i % 2 == 1 ? 4 : 2) * mixture_density(x_lo + static_cast<double>(i) * h);
    }
    return total * h / 3;
}

IntensityDistribution intensity_distribution(const PhotonNumberDistribution &dist, const GainSetting &gain,
                                             std::span<const double> grid) {
    require_intensity_preconditions(dist, gain);
    if (grid.size() < 2) {
        throw ValidationError("intensity grid needs at least 2 points");
    }
    for (size_t i = 0; i < grid.size(); i++) {
        if (!std::isfinite(grid[i]) || grid[i] <= 0) {
            throw ValidationError("intensity grid values must be finite and > 0 (N = 0 is excluded)");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) {
            throw ValidationError("intensity grid must be strictly increasing");
        }
    }
    double coverage = grid_coverage(dist, gain, grid.front(), grid.back());
    if (coverage < kRequiredGridCoverage) {
        std::ostringstream out;
        out << "intensity grid [" << grid.front() << ", " << grid.back() << "] captures only " << coverage
            << " of the probability mass (need >= " << kRequiredGridCoverage << "); extend the grid";
        throw DomainError(out.str());
    }

    auto probs = dist.probs().first(fock_support(dist, "intensity distribution") + 1);
    IntensityDistribution out;
    out.gain = gain.value();
    out.grid.assign(grid.begin(), grid.end());
    out.density.resize(grid.size());
    double g = gain.value();
    std::vector<double> psi(probs.size());
    for (size_t i = 0; i < grid.size(); i++) {
        double n_photons = grid[i];
        double x = std::exp(-g) * std::sqrt(2 * n_photons);
        double jacobian = std::exp(-g - 0.5 * std::log(2 * n_photons));
        oscillator_wavefunctions(x, psi);
        double acc = 0;
        for (size_t n = 0; n < probs.size(); n++) {
            acc += probs[n] * psi[n] * psi[n];
        }
        out.density[i] = 2 * acc * jacobian;
    }
    return out;
}

IntensityDistribution intensity_distribution(const PhotonNumberDistribution &dist, const GainSetting &gain,
                                             const IntensityGridSpec &spec) {
    require_intensity_preconditions(dist, gain);
    auto grid = intensity_grid(dist, gain, spec);
    return intensity_distribution(dist, gain, grid);
}

PulseRecordSet sample_pulses(const PhotonNumberDistribution &dist, const GainSetting &gain, size_t n_pulses,
                             double detection_scale, uint64_t seed) {
    require_valid(dist);
    if (n_pulses < 1) {
        throw ValidationError("sample_pulses needs n_pulses >= 1");
    }
    if (!(detection_scale > 0 && detection_scale <= 1)) {
        throw DomainError("detection_scale must lie in (0, 1]");
    }
    auto probs = dist.probs().first(fock_support(dist, "sample_pulses") + 1);
    std::vector<double> cdf(probs.size());
    double running = 0;
    for (size_t n = 0; n < probs.size(); n++) {
        running += probs[n];
        cdf[n] = running;
    }
    std::map<size_t, QuadratureSampler> samplers;
    for (size_t n = 0; n < probs.size(); n++) {
        if (probs[n] > 0) {
            samplers.emplace(n, QuadratureSampler(n));
        }
    }
    // N = scale * e^(2G) x^2 / 2
    double factor = detection_scale * 2 * gain.quadrature_vacuum_mean();

    PulseRecordSet out;
    out.counts.resize(n_pulses);
    constexpr size_t kBlock = 16384;
    size_t blocks = (n_pulses + kBlock - 1) / kBlock;
    parallel_for(blocks, [&](size_t block) {
        std::mt19937_64 rng(derive_seed(seed, block));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        size_t end = std::min(n_pulses, (block + 1) * kBlock);
        for (size_t i = block * kBlock; i < end; i++) {
            double u = uniform(rng) * running;
            auto n = static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            n = std::min(n, cdf.size() - 1);
            while (probs[n] == 0 && n > 0) {
                n--;
            }
            out.counts[i] = factor * samplers.at(n).square_from_uniform(uniform(rng));
        }
    });

    std::ostringstream g;
    g.precision(17);
    g << gain.value();
    out.meta["gain"] = g.str();
    out.meta["seed"] = std::to_string(seed);
    out.meta["n_pulses"] = std::to_string(n_pulses);
    std::ostringstream s;
    s.precision(17);
    s << detection_scale;
    out.meta["detection_scale"] = s.str();
    return out;
}

}  // namespace ampwit
