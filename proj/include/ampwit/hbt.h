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

#ifndef AMPWIT_HBT_H
#define AMPWIT_HBT_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ampwit/fock_core.h"

namespace ampwit {

/// Beam splitter with transmittance T feeding threshold detectors A
/// (transmitted port, efficiency pA) and B (reflected port, efficiency pB).
struct HbtConfig {
    double T = 0.5;
    double pA = 1;
    double pB = 1;
    /// Probability that photons from a neighbouring pulse share the detection
    /// window. 0 disables accidentals.
    double accidental_overlap = 0;

    double R() const {
        return 1 - T;
    }
    double qA() const {
        return 1 - pA;
    }
    double qB() const {
        return 1 - pB;
    }
};

/// Throws ValidationError unless T in (0, 1), pA and pB in (0, 1], overlap in [0, 1).
void validate(const HbtConfig &cfg);

struct ClickStatistics {
    /// Probability that exactly one of the two detectors clicks.
    double Q1 = 0;
    /// Probability that both detectors click.
    double Q2 = 0;
    size_t n_pulses = 0;
    size_t none = 0;
    size_t single = 0;
    size_t coincidences = 0;
    /// Side-window reference: net change in single clicks and extra
    /// coincidences that neighbouring-pulse photons add to an independent
    /// pulse. Zero when accidentals are disabled.
    int64_t side_single = 0;
    size_t side_coincidences = 0;
};

/// Monte-Carlo HBT run: per pulse draw n, route each photon to A with
/// probability T, detect it with pA / pB, and tally threshold clicks.
ClickStatistics simulate_clicks(const PhotonNumberDistribution &dist, const HbtConfig &cfg, size_t n_pulses,
                                uint64_t seed);

/// Subtracts the side-window rates from Q1 and Q2.
ClickStatistics subtract_accidentals(const ClickStatistics &stats);

/// Q1 and Q2 the HBT setup yields for dist in expectation (exact, any n).
ClickStatistics expected_clicks(const PhotonNumberDistribution &dist, const HbtConfig &cfg);

struct InferredProbabilities {
    double p0 = 1;
    double p1 = 0;
    double p2plus = 0;
    /// Multinomial standard errors propagated to each estimate (0 without a
    /// pulse count).
    double sigma_p0 = 0;
    double sigma_p1 = 0;
    double sigma_p2plus = 0;
    /// All three within [0, 1].
    bool physical = true;
    std::vector<std::string> warnings;
};

/// Weak-signal inversion of the click probabilities:
///   p2+ = Q2 / (2 pA pB T R)
///   p1  = (Q1 - p2+ [2TR(qB pA + qA pB) + T^2 (1 - qA^2) + R^2 (1 - qB^2)]) / (T pA + R pB)
///   p0  = 1 - p1 - p2+
/// Outputs are not clamped. Throws DomainError if an estimate leaves [0, 1]
/// by more than 5 standard errors, or if T R or pA pB vanishes.
InferredProbabilities infer_probabilities(const ClickStatistics &stats, const HbtConfig &cfg);

struct CorrectedProbabilities {
    double p0;
    double p1;
    double p2plus;
};

/// Undoes a known transmittance t_prime suffered before the beam splitter,
/// treating p2+ as pure two-photon content.
CorrectedProbabilities correct_loss(double p0, double p1, double p2plus, double t_prime);

/// eta = coincidences / (heralds * prod(corrections)).
double heralding_efficiency(double coincidences_per_pulse, double heralds_per_pulse,
                            std::span<const double> corrections);

}  // namespace ampwit

#endif
