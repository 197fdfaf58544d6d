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

#ifndef AMPWIT_FOCK_CORE_H
#define AMPWIT_FOCK_CORE_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ampwit {

/// Absolute tolerance on sum(probs) == 1 enforced by validate().
inline constexpr double kNormalizationTolerance = 1e-9;

/// Largest mass a constructor may discard when it auto-truncates.
inline constexpr double kTruncationTail = 1e-12;

/// Photon-number probabilities p_n for n = 0..n_max.
///
/// Construction never throws; validate() reports malformed data. Operations
/// that need a valid distribution call require_valid() on entry.
class PhotonNumberDistribution {
   public:
    PhotonNumberDistribution() = default;
    explicit PhotonNumberDistribution(std::vector<double> probs);

    std::span<const double> probs() const {
        return probs_;
    }
    size_t n_max() const {
        return probs_.empty() ? 0 : probs_.size() - 1;
    }
    size_t size() const {
        return probs_.size();
    }
    /// p_n, or 0 beyond the truncation.
    double operator[](size_t n) const {
        return n < probs_.size() ? probs_[n] : 0.0;
    }

    double p0() const {
        return (*this)[0];
    }
    double p1() const {
        return (*this)[1];
    }
    /// Tail mass over n >= 2.
    double p2plus() const;

    bool operator==(const PhotonNumberDistribution &other) const = default;

   private:
    std::vector<double> probs_;
};

struct ValidationResult {
    bool ok = true;
    std::string message;

    explicit operator bool() const {
        return ok;
    }
};

/// Checks non-emptiness, finiteness, non-negativity and normalization.
/// Reports the first violated invariant.
ValidationResult validate(const PhotonNumberDistribution &dist);

/// Throws ValidationError with validate()'s message when dist is invalid.
void require_valid(const PhotonNumberDistribution &dist);

/// Mean, variance and normalized second-order correlation of a photon-number
/// law. g2_pre is empty when the mean is zero.
struct MomentSummary {
    double m = 0;
    double s2 = 0;
    std::optional<double> g2_pre;

    bool g2_defined() const {
        return g2_pre.has_value();
    }
};

/// Builds a summary from (m, s2), filling g2_pre = 1 + (s2 - m) / m^2 when m > 0.
MomentSummary make_moment_summary(double m, double s2);

MomentSummary moments(const PhotonNumberDistribution &dist);

/// Post-amplification intensity density over photon number N.
struct IntensityDistribution {
    std::vector<double> grid;
    std::vector<double> density;
    double gain = 0;

    /// Trapezoidal integral of density over grid.
    double integral() const;
    /// Trapezoidal first moment.
    double mean() const;
};

/// Detected intensity per pulse, optionally tagged with herald clicks.
struct PulseRecordSet {
    std::vector<double> counts;
    std::optional<std::vector<bool>> herald;
    std::map<std::string, std::string> meta;

    size_t size() const {
        return counts.size();
    }
    /// Records with herald == 1 only. Throws ValidationError if there is no
    /// herald column.
    PulseRecordSet conditioned() const;
    /// Same records scaled by factor (detection-efficiency change).
    PulseRecordSet scaled(double factor) const;
};

ValidationResult validate(const PulseRecordSet &records);

struct Interval {
    double lo = 0;
    double hi = 0;
};

struct BootstrapOptions {
    size_t resamples = 1000;
    /// Central coverage of the percentile interval.
    double level = 0.68;
    uint64_t seed = 0;
};

/// Sample moments of a pulse record set with bootstrap percentile intervals.
struct MomentEstimate {
    size_t n = 0;
    double mean = 0;
    double variance = 0;
    double g2 = 0;
    Interval mean_ci;
    Interval variance_ci;
    Interval g2_ci;
    /// Bootstrap standard deviation of the g2 replicates.
    double g2_se = 0;
    double mean_se = 0;

    MomentSummary summary() const {
        return make_moment_summary(mean, variance);
    }
};

/// g2 of a sample, 1 + (var - mean) / mean^2 with the unbiased variance.
double sample_g2(double mean, double unbiased_variance);

/// Throws DomainError for fewer than two records or an all-zero sample.
MomentEstimate estimate_moments(const PulseRecordSet &records, const BootstrapOptions &options = {});

/// Lower/upper percentile of a set of replicates at the given central level.
Interval percentile_interval(std::vector<double> replicates, double level);

/// Sample standard deviation (n - 1 denominator).
double sample_stddev(std::span<const double> values);

enum class VerdictCategory {
    NonGaussian,
    NonClassicalOnly,
    Classical,
    BelowPhaseIndependentFloor,
    NonPhysical,
};

std::string_view to_string(VerdictCategory category);

/// Signed distance of a point from one boundary. Positive margins are on the
/// side where the witness fires (non-classical, non-Gaussian, below floor,
/// physical).
struct BoundaryMargin {
    std::string boundary;
    double threshold = 0;
    double margin = 0;
    double sigma = 0;
};

struct WitnessVerdict {
    VerdictCategory category = VerdictCategory::Classical;
    std::vector<BoundaryMargin> margins;
    std::string confidence_note;

    /// nullptr when no margin with that name was recorded.
    const BoundaryMargin *margin(std::string_view boundary) const;
};

}  // namespace ampwit

#endif
