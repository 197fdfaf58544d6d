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

#include "ampwit/state_models.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "ampwit/errors.h"
#include "json.hpp"

namespace ampwit {

namespace {

void require_mean(double mean, const char *what) {
    if (!std::isfinite(mean) || mean < 0) {
        std::ostringstream out;
        out << what << " mean must be finite and >= 0, got " << mean;
        throw DomainError(out.str());
    }
}

double log_binomial_pmf(size_t n, size_t k, double log_eta, double log_one_minus_eta) {
    double nd = static_cast<double>(n);
    double kd = static_cast<double>(k);
    return std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) + kd * log_eta +
           (nd - kd) * log_one_minus_eta;
}

PhotonNumberDistribution padded_vacuum(size_t n_max) {
    std::vector<double> probs(n_max + 1, 0.0);
    probs[0] = 1;
    return PhotonNumberDistribution(std::move(probs));
}

}  // namespace

PhotonNumberDistribution make_vacuum() {
    return PhotonNumberDistribution({1.0});
}

PhotonNumberDistribution make_fock(size_t n) {
    if (n > kMaxFockNumber) {
        std::ostringstream out;
        out << "Fock number " << n << " exceeds the supported maximum " << kMaxFockNumber;
        throw DomainError(out.str());
    }
    std::vector<double> probs(n + 1, 0.0);
    probs[n] = 1.0;
    return PhotonNumberDistribution(std::move(probs));
}

PhotonNumberDistribution make_thermal(double mean, std::optional<size_t> n_max) {
    require_mean(mean, "thermal");
    if (mean == 0) {
        return padded_vacuum(n_max.value_or(0));
    }
    double log_q = std::log(mean) - std::log1p(mean);
    double log_norm = -std::log1p(mean);
    std::vector<double> probs;
    for (size_t n = 0;; n++) {
        double nd = static_cast<double>(n);
        probs.push_back(std::exp(nd * log_q + log_norm));
        if (n_max.has_value()) {
            if (n == *n_max) {
                break;
            }
            continue;
        }
        // Beyond n the law is n + 1 plus a fresh geometric count, so the
        // dropped mass is q^(n+1) and its share of <n^2> has a closed form.
        double tail = std::exp((nd + 1) * log_q);
        double tail_second = tail * ((nd + 1 + mean) * (nd + 1 + mean) + mean * (1 + mean));
        if (tail < kTruncationTail && tail_second < kTruncationTail && probs.back() < kTruncationTail) {
            break;
        }
    }
    return PhotonNumberDistribution(std::move(probs));
}

PhotonNumberDistribution make_coherent(double mean, std::optional<size_t> n_max) {
    require_mean(mean, "coherent");
    if (mean == 0) {
        return padded_vacuum(n_max.value_or(0));
    }
    double log_mean = std::log(mean);
    std::vector<double> probs;
    for (size_t n = 0;; n++) {
        double nd = static_cast<double>(n);
        probs.push_back(std::exp(-mean + nd * log_mean - std::lgamma(nd + 1)));
        if (n_max.has_value()) {
            if (n == *n_max) {
                break;
            }
            continue;
        }
        // Past the mode the tail is bounded by a geometric series with ratio
        // mean / (n + 1).
        if (nd + 1 > mean) {
            double bound = probs.back() * mean / (nd + 1 - mean);
            if (bound < 0.1 * kTruncationTail && probs.back() < kTruncationTail) {
                break;
            }
        }
    }
    return PhotonNumberDistribution(std::move(probs));
}

PhotonNumberDistribution mix(std::span<const double> weights, std::span<const PhotonNumberDistribution> dists) {
    if (weights.size() != dists.size()) {
        throw ValidationError("mix: weight count does not match distribution count");
    }
    if (weights.empty()) {
        throw ValidationError("mix: no components");
    }
    size_t width = 0;
    for (size_t i = 0; i < weights.size(); i++) {
        if (!std::isfinite(weights[i]) || weights[i] < 0) {
            throw ValidationError("mix: weights must be finite and >= 0");
        }
        require_valid(dists[i]);
        width = std::max(width, dists[i].size());
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1) > kNormalizationTolerance) {
        std::ostringstream out;
        out << "mix: weights sum to " << total << ", expected 1";
        throw ValidationError(out.str());
    }
    std::vector<double> probs(width, 0.0);
    for (size_t i = 0; i < weights.size(); i++) {
        auto component = dists[i].probs();
        for (size_t n = 0; n < component.size(); n++) {
            probs[n] += weights[i] * component[n];
        }
    }
    return PhotonNumberDistribution(std::move(probs));
}

PhotonNumberDistribution apply_loss(const PhotonNumberDistribution &dist, double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        std::ostringstream out;
        out << "loss transmittance must lie in [0, 1], got " << eta;
        throw DomainError(out.str());
    }
    require_valid(dist);
    auto probs = dist.probs();
    if (eta == 1) {
        return dist;
    }
    std::vector<double> out(probs.size(), 0.0);
    if (eta == 0) {
        out[0] = std::accumulate(probs.begin(), probs.end(), 0.0);
        return PhotonNumberDistribution(std::move(out));
    }
    double log_eta = std::log(eta);
    double log_rest = std::log1p(-eta);
    for (size_t n = 0; n < probs.size(); n++) {
        if (probs[n] == 0) {
            continue;
        }
        for (size_t k = 0; k <= n; k++) {
            out[k] += probs[n] * std::exp(log_binomial_pmf(n, k, log_eta, log_rest));
        }
    }
    return PhotonNumberDistribution(std::move(out));
}

PhotonNumberDistribution apply_mode_mismatch(const PhotonNumberDistribution &dist, double overlap) {
    if (!(overlap > 0 && overlap <= 1)) {
        throw DomainError("mode overlap must lie in (0, 1]");
    }
    return apply_loss(dist, overlap);
}

void validate(const HeraldedSourceConfig &cfg) {
    auto fail = [](const std::string &msg) { throw ValidationError("heralded source: " + msg); };
    if (!(cfg.mean_pairs >= 0 && cfg.mean_pairs < 10)) {
        fail("mean_pairs must lie in [0, 10)");
    }
    if (!(cfg.eta_signal > 0 && cfg.eta_signal <= 1)) {
        fail("eta_signal must lie in (0, 1]");
    }
    if (!(cfg.eta_idler > 0 && cfg.eta_idler <= 1)) {
        fail("eta_idler must lie in (0, 1]");
    }
    if (!(cfg.dark_count >= 0 && cfg.dark_count < 1)) {
        fail("dark_count must lie in [0, 1)");
    }
}

HeraldedSourceConfig parse_heralded_source_config(const std::string &json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("heralded source config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("heralded source config must be a JSON object");
    }
    HeraldedSourceConfig cfg;
    for (const auto &[key, value] : doc.items()) {
        if (!value.is_number()) {
            throw ValidationError("heralded source config: '" + key + "' must be a number");
        }
        double v = value.get<double>();
        if (key == "mean_pairs") {
            cfg.mean_pairs = v;
        } else if (key == "eta_signal") {
            cfg.eta_signal = v;
        } else if (key == "eta_idler") {
            cfg.eta_idler = v;
        } else if (key == "dark_count") {
            cfg.dark_count = v;
        } else {
            throw ValidationError("heralded source config: unknown key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

std::string to_json(const HeraldedSourceConfig &cfg) {
    nlohmann::json doc = {
        {"mean_pairs", cfg.mean_pairs},
        {"eta_signal", cfg.eta_signal},
        {"eta_idler", cfg.eta_idler},
        {"dark_count", cfg.dark_count},
    };
    return doc.dump();
}

HeraldedState heralded_spdc(const HeraldedSourceConfig &cfg) {
    validate(cfg);
    auto pairs = make_thermal(cfg.mean_pairs);
    auto pair_probs = pairs.probs();
    std::vector<double> joint(pair_probs.size());
    double herald = 0;
    for (size_t n = 0; n < pair_probs.size(); n++) {
        double no_click = (1 - cfg.dark_count) * std::pow(1 - cfg.eta_idler, static_cast<double>(n));
        joint[n] = pair_probs[n] * (1 - no_click);
        herald += joint[n];
    }
    if (!(herald > 0)) {
        throw DomainError("herald probability is zero; conditional signal state undefined");
    }
    for (double &w : joint) {
        w /= herald;
    }
    return {apply_loss(PhotonNumberDistribution(std::move(joint)), cfg.eta_signal), herald};
}

}  // namespace ampwit
