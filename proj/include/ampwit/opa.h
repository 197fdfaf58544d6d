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

#ifndef AMPWIT_OPA_H
#define AMPWIT_OPA_H

#include <cstdint>
#include <span>
#include <vector>

#include "ampwit/fock_core.h"

namespace ampwit {

/// Gain at and above which the asymptotic (G -> infinity) moment map and
/// witnesses are used.
inline constexpr double kAsymptoticGain = 3.0;
inline constexpr double kMaxGain = 30.0;
/// Gain used by the experiment and the CLI default.
inline constexpr double kDefaultGain = 6.5;

/// Parametric gain G of the phase-sensitive amplifier a -> a0 cosh G + a0^dag sinh G.
class GainSetting {
   public:
    /// Throws DomainError unless 0 < G <= kMaxGain.
    explicit GainSetting(double gain = kDefaultGain);

    double value() const {
        return gain_;
    }
    bool asymptotic_ok() const {
        return gain_ >= kAsymptoticGain;
    }
    /// sinh^2 G, the exact amplified-vacuum mean. Evaluated in the log domain
    /// above G = 15.
    double vacuum_mean() const;
    /// e^(2G) / 4, the amplified-vacuum mean of the single-quadrature high-gain
    /// model used for intensity distributions and pulse sampling.
    double quadrature_vacuum_mean() const;

   private:
    double gain_;
};

/// Exact post-amplification mean (2m + 1) sinh^2 G + m for any Fock-diagonal
/// input with mean m.
double amplified_mean(double m, const GainSetting &gain);

struct AsymptoticMoments {
    /// Mean relative to amplified vacuum.
    double mu_rel = 1;
    /// Variance relative to (amplified-vacuum mean)^2.
    double sigma2_rel = 2;
    double g2_post = 3;
};

/// High-gain map from pre-amplification (m, s^2) to post-amplification
/// moments: mu_rel = 2m + 1, sigma2_rel = 2(1 + m + m^2 + 3 s^2),
/// g2 = 1 + sigma2_rel / mu_rel^2.
AsymptoticMoments asymptotic_moments(const MomentSummary &ms);
AsymptoticMoments asymptotic_moments(double m, double s2);

/// Inverse of the map above: (mu_rel, g2) -> (m, s^2).
MomentSummary preamp_moments(double mu_rel, double g2);

/// Log-spaced grid in t = N / quadrature_vacuum_mean().
struct IntensityGridSpec {
    size_t points = 30000;
    double t_min = 1e-14;
    /// 0 selects 2 (sqrt(2 n_max + 1) + 7)^2, past the outer turning point of
    /// the highest occupied Fock component.
    double t_max = 0;
};

/// Minimum probability mass the grid must capture.
inline constexpr double kRequiredGridCoverage = 0.9999;

std::vector<double> intensity_grid(const PhotonNumberDistribution &dist, const GainSetting &gain,
                                   const IntensityGridSpec &spec = {});

/// Continuous high-gain approximation of the amplified photon-number density,
///
///     P(N) = sum_n p_n * 2 |psi_n(x_N)|^2 dx/dN,  x_N = e^-G sqrt(2N).
///
/// The grid must be strictly increasing and positive. Throws DomainError if G
/// is below kAsymptoticGain or the grid captures less than
/// kRequiredGridCoverage of the probability mass. Components above
/// kMaxFockNumber are dropped when their total mass is below kTruncationTail
/// and rejected with DomainError otherwise (likewise in sample_pulses).
IntensityDistribution intensity_distribution(const PhotonNumberDistribution &dist, const GainSetting &gain,
                                             std::span<const double> grid);
IntensityDistribution intensity_distribution(const PhotonNumberDistribution &dist, const GainSetting &gain,
                                             const IntensityGridSpec &spec = {});

/// Probability mass of dist lying between grid.front() and grid.back(),
/// integrated in the quadrature variable (independent of the N-grid
/// trapezoid).
double grid_coverage(const PhotonNumberDistribution &dist, const GainSetting &gain, double n_lo, double n_hi);

/// Simulated detector output: per pulse draw n from dist, x from |psi_n|^2,
/// and record N = detection_scale * e^(2G) x^2 / 2. Deterministic for a given
/// seed regardless of thread count.
PulseRecordSet sample_pulses(const PhotonNumberDistribution &dist, const GainSetting &gain, size_t n_pulses,
                             double detection_scale, uint64_t seed);

}  // namespace ampwit

#endif
