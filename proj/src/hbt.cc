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

#include "ampwit/hbt.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ampwit/errors.h"
#include "ampwit/parallel.h"

namespace ampwit {

void validate(const HbtConfig &cfg) {
    if (!(cfg.T > 0 && cfg.T < 1)) {
        throw ValidationError("HBT: beam-splitter transmittance T must lie in (0, 1)");
    }
    if (!(cfg.pA > 0 && cfg.pA <= 1 && cfg.pB > 0 && cfg.pB <= 1)) {
        throw ValidationError("HBT: detector efficiencies must lie in (0, 1]");
    }
    if (!(cfg.accidental_overlap >= 0 && cfg.accidental_overlap < 1)) {
        throw ValidationError("HBT: accidental overlap must lie in [0, 1)");
    }
}

namespace {

struct Clicks {
    bool a = false;
    bool b = false;
};

template <typename Rng>
void route_photons(size_t photons, const HbtConfig &cfg, Rng &rng, Clicks &clicks) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (size_t k = 0; k < photons; k++) {
        if (uniform(rng) < cfg.T) {
            clicks.a |= uniform(rng) < cfg.pA;
        } else {
            clicks.b |= uniform(rng) < cfg.pB;
        }
    }
}

int click_count(const Clicks &c) {
    return static_cast<int>(c.a) + static_cast<int>(c.b);
}

struct Tally {
    size_t none = 0;
    size_t single = 0;
    size_t coincidences = 0;
    int64_t side_single = 0;
    size_t side_coincidences = 0;
};

}  // namespace

ClickStatistics simulate_clicks(const PhotonNumberDistribution &dist, const HbtConfig &cfg, size_t n_pulses,
                                uint64_t seed) {
    require_valid(dist);
    validate(cfg);
    auto probs = dist.probs();
    std::vector<double> cdf(probs.size());
    double running = 0;
    for (size_t n = 0; n < probs.size(); n++) {
        running += probs[n];
        cdf[n] = running;
    }

    constexpr size_t kBlock = 65536;
    size_t blocks = (n_pulses + kBlock - 1) / kBlock;
    std::vector<Tally> tallies(blocks);
    parallel_for(blocks, [&](size_t block) {
        std::mt19937_64 rng(derive_seed(seed, block));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        auto draw_photons = [&] {
            double u = uniform(rng) * running;
            auto n = static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            return std::min(n, cdf.size() - 1);
        };
        Tally &t = tallies[block];
        size_t end = std::min(n_pulses, (block + 1) * kBlock);
        for (size_t i = block * kBlock; i < end; i++) {
            Clicks clicks;
            route_photons(draw_photons(), cfg, rng, clicks);
            if (cfg.accidental_overlap > 0 && uniform(rng) < cfg.accidental_overlap) {
                route_photons(draw_photons(), cfg, rng, clicks);
            }
            if (clicks.a && clicks.b) {
                t.coincidences++;
            } else if (clicks.a || clicks.b) {
                t.single++;
            } else {
                t.none++;
            }
            if (cfg.accidental_overlap > 0 && uniform(rng) < cfg.accidental_overlap) {
                Clicks own;
                route_photons(draw_photons(), cfg, rng, own);
                Clicks both = own;
                route_photons(draw_photons(), cfg, rng, both);
                t.side_single += (click_count(both) == 1) - (click_count(own) == 1);
                t.side_coincidences += click_count(both) == 2 && click_count(own) < 2;
            }
        }
    });

    ClickStatistics out;
    out.n_pulses = n_pulses;
    for (const auto &t : tallies) {
        out.none += t.none;
        out.single += t.single;
        out.coincidences += t.coincidences;
        out.side_single += t.side_single;
        out.side_coincidences += t.side_coincidences;
    }
    if (n_pulses > 0) {
        out.Q1 = static_cast<double>(out.single) / static_cast<double>(n_pulses);
        out.Q2 = static_cast<double>(out.coincidences) / static_cast<double>(n_pulses);
    }
    return out;
}

ClickStatistics subtract_accidentals(const ClickStatistics &stats) {
    ClickStatistics out = stats;
    if (stats.n_pulses == 0) {
        return out;
    }
    double n = static_cast<double>(stats.n_pulses);
    out.Q1 = stats.Q1 - static_cast<double>(stats.side_single) / n;
    out.Q2 = stats.Q2 - static_cast<double>(stats.side_coincidences) / n;
    return out;
}

ClickStatistics expected_clicks(const PhotonNumberDistribution &dist, const HbtConfig &cfg) {
    require_valid(dist);
    validate(cfg);
    double a = cfg.T * cfg.pA;
    double b = cfg.R() * cfg.pB;
    ClickStatistics out;
    auto probs = dist.probs();
    for (size_t n = 0; n < probs.size(); n++) {
        double nd = static_cast<double>(n);
        double miss_a = std::pow(1 - a, nd);
        double miss_b = std::pow(1 - b, nd);
        double miss_both = std::pow(1 - a - b, nd);
        out.Q1 += probs[n] * (miss_a + miss_b - 2 * miss_both);
        out.Q2 += probs[n] * (1 - miss_a - miss_b + miss_both);
    }
    return out;
}

InferredProbabilities infer_probabilities(const ClickStatistics &stats, const HbtConfig &cfg) {
    double T = cfg.T;
    double R = cfg.R();
    if (T * R == 0 || cfg.pA * cfg.pB == 0) {
        throw DomainError("HBT inference needs T R > 0 and pA pB > 0");
    }
    if (!(stats.Q1 >= -1 && stats.Q1 <= 1 && stats.Q2 >= -1 && stats.Q2 <= 1)) {
        throw ValidationError("HBT inference: click probabilities out of range");
    }
    double qA = cfg.qA();
    double qB = cfg.qB();
    double c2 = 1 / (2 * cfg.pA * cfg.pB * T * R);
    double leak = 2 * T * R * (qB * cfg.pA + qA * cfg.pB) + T * T * (1 - qA * qA) + R * R * (1 - qB * qB);
    double denom = T * cfg.pA + R * cfg.pB;

    InferredProbabilities out;
    out.p2plus = c2 * stats.Q2;
    out.p1 = (stats.Q1 - out.p2plus * leak) / denom;
    out.p0 = 1 - out.p1 - out.p2plus;

    if (stats.n_pulses > 0) {
        double n = static_cast<double>(stats.n_pulses);
        double q1 = std::clamp(stats.Q1, 0.0, 1.0);
        double q2 = std::clamp(stats.Q2, 0.0, 1.0);
        double var1 = q1 * (1 - q1) / n;
        double var2 = q2 * (1 - q2) / n;
        double cov = -q1 * q2 / n;
        auto linear_sigma = [&](double alpha, double beta) {
            return std::sqrt(std::max(0.0, alpha * alpha * var1 + beta * beta * var2 + 2 * alpha * beta * cov));
        };
        // Each estimate is linear in (Q1, Q2).
        out.sigma_p2plus = linear_sigma(0, c2);
        out.sigma_p1 = linear_sigma(1 / denom, -leak * c2 / denom);
        out.sigma_p0 = linear_sigma(-1 / denom, leak * c2 / denom - c2);
    }

    struct Named {
        const char *name;
        double value;
        double sigma;
    };
    for (const auto &[name, value, sigma] : {Named{"p0", out.p0, out.sigma_p0}, Named{"p1", out.p1, out.sigma_p1},
                                             Named{"p2plus", out.p2plus, out.sigma_p2plus}}) {
        double excess = std::max(-value, value - 1);
        if (excess > 0) {
            out.physical = false;
            if (sigma > 0 && excess > 5 * sigma) {
                std::ostringstream msg;
                msg << "HBT inference: " << name << " = " << value << " lies more than 5 sigma (" << sigma
                    << ") outside [0, 1]";
                throw DomainError(msg.str());
            }
        }
    }
    if (out.p2plus > 0.2) {
        out.warnings.emplace_back("p2plus > 0.2: the weak-signal inversion neglects n >= 3 terms and is biased here");
    }
    return out;
}

CorrectedProbabilities correct_loss(double p0, double p1, double p2plus, double t_prime) {
    (void)p0;
    if (!(t_prime > 0 && t_prime <= 1)) {
        throw DomainError("correct_loss: transmittance must lie in (0, 1]");
    }
    CorrectedProbabilities out;
    out.p2plus = p2plus / (t_prime * t_prime);
    out.p1 = p1 / t_prime - out.p2plus * 2 * (1 - t_prime);
    out.p0 = 1 - out.p1 - out.p2plus;
    return out;
}

double heralding_efficiency(double coincidences_per_pulse, double heralds_per_pulse,
                            std::span<const double> corrections) {
    if (corrections.empty()) {
        throw ValidationError("heralding_efficiency: no correction factors given");
    }
    if (!(heralds_per_pulse > 0)) {
        throw DomainError("heralding_efficiency: herald rate must be > 0");
    }
    double product = 1;
    for (double c : corrections) {
        if (!(c > 0 && c <= 1)) {
            throw ValidationError("heralding_efficiency: correction factors must lie in (0, 1]");
        }
        product *= c;
    }
    return coincidences_per_pulse / (heralds_per_pulse * product);
}

}  // namespace ampwit
