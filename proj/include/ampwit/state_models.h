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

#ifndef AMPWIT_STATE_MODELS_H
#define AMPWIT_STATE_MODELS_H

#include <optional>
#include <span>
#include <string>

#include "ampwit/fock_core.h"

namespace ampwit {

/// Largest Fock number accepted by make_fock (and by the oscillator
/// wavefunction recurrence used downstream).
inline constexpr size_t kMaxFockNumber = 50;

PhotonNumberDistribution make_vacuum();

/// Delta distribution at n. Throws DomainError for n > kMaxFockNumber.
PhotonNumberDistribution make_fock(size_t n);

/// Bose-Einstein law p_n = nbar^n / (1 + nbar)^(n+1). Without an explicit
/// n_max the distribution is cut where both the dropped tail and its
/// contribution to <n^2> are below kTruncationTail.
PhotonNumberDistribution make_thermal(double mean, std::optional<size_t> n_max = std::nullopt);

/// Poisson law with the given mean, auto-truncated like make_thermal.
PhotonNumberDistribution make_coherent(double mean, std::optional<size_t> n_max = std::nullopt);

/// Convex combination sum_i w_i * d_i, padded to the largest n_max.
PhotonNumberDistribution mix(std::span<const double> weights, std::span<const PhotonNumberDistribution> dists);

/// Binomial loss channel with transmittance eta in [0, 1]:
/// p'_k = sum_{n >= k} p_n C(n, k) eta^k (1 - eta)^(n - k).
PhotonNumberDistribution apply_loss(const PhotonNumberDistribution &dist, double eta);

/// Imperfect overlap between the input mode and the amplifier mode, modeled as
/// a beam splitter mixing in vacuum with transmittance `overlap`.
PhotonNumberDistribution apply_mode_mismatch(const PhotonNumberDistribution &dist, double overlap);

/// Heralded single-photon source built from a single-mode twin-beam (thermal
/// pair statistics) with a threshold herald detector.
struct HeraldedSourceConfig {
    /// Mean photon pairs per pulse at the source output ("brightness", ppp).
    double mean_pairs = 0.1;
    /// Signal-arm effective transmittance (heralding efficiency at low
    /// brightness).
    double eta_signal = 0.51;
    /// Herald detection efficiency: fiber coupling 0.8 times SPD 0.34. This
    /// value reshapes P(n | click) through the (1 - eta_idler)^n factor, but
    /// only weakly for mean_pairs << 1.
    double eta_idler = 0.8 * 0.34;
    /// Per-pulse dark-click probability of the herald detector.
    double dark_count = 0;
};

/// Throws ValidationError when a field is outside its range.
void validate(const HeraldedSourceConfig &cfg);

/// Parses {"mean_pairs": .., "eta_signal": .., "eta_idler": .., "dark_count": ..};
/// missing keys keep their defaults.
HeraldedSourceConfig parse_heralded_source_config(const std::string &json_text);
std::string to_json(const HeraldedSourceConfig &cfg);

struct HeraldedState {
    /// Signal photon-number law conditioned on a herald click.
    PhotonNumberDistribution dist;
    double herald_probability = 0;
};

/// Throws DomainError when the herald never clicks (mean_pairs == 0 without
/// dark counts).
HeraldedState heralded_spdc(const HeraldedSourceConfig &cfg);

}  // namespace ampwit

#endif
