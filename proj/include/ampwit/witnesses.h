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

#ifndef AMPWIT_WITNESSES_H
#define AMPWIT_WITNESSES_H

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ampwit/fock_core.h"

namespace ampwit {

/// Points tabulated along the Gaussian p0/p1 boundary.
inline constexpr size_t kNgTablePoints = 10000;
/// Squeezing range of that table; beyond it both probabilities underflow.
inline constexpr double kNgTableMaxSqueezing = 5.0;
/// Bracket for inverting e^r cosh 2r.
inline constexpr double kInversionMaxSqueezing = 20.0;
/// Bisection stops once the r bracket is narrower than this.
inline constexpr double kInversionTolerance = 1e-13;
/// Points closer than this to a boundary count as on it (not crossing).
inline constexpr double kBoundaryTolerance = 1e-9;

enum class CurveKind {
    NG_pre_p0p1,
    NC_pre_p0p1,
    NG_post_mu_g2,
    NC_post_mu_g2,
    Floor_post_mu_g2,
    NG_pre_moments,
    NC_pre_moments,
};

inline constexpr CurveKind kAllCurveKinds[] = {
    CurveKind::NG_pre_p0p1,      CurveKind::NC_pre_p0p1,    CurveKind::NG_post_mu_g2,  CurveKind::NC_post_mu_g2,
    CurveKind::Floor_post_mu_g2, CurveKind::NG_pre_moments, CurveKind::NC_pre_moments,
};

std::string_view to_string(CurveKind kind);
/// Accepts full names ("NG_post_mu_g2") and the short forms ("NG_post").
std::optional<CurveKind> parse_curve_kind(std::string_view text);

struct BoundaryCurve {
    CurveKind kind;
    std::vector<double> parameter;
    std::vector<double> x;
    std::vector<double> y;
};

struct ProbabilityPoint {
    double p0;
    double p1;
};

struct PostPoint {
    double mu_rel;
    double g2;
};

/// Largest (p0, p1) pairs reachable by Gaussian states, parametrized by the
/// squeezing r in [0, 5]:
///   p0(r) = exp(-(e^4r - 1)(1 - tanh r) / 4) / cosh r
///   p1(r) = (e^4r - 1) exp(-(e^4r - 1)(1 - tanh r) / 4) / (4 cosh^3 r)
ProbabilityPoint ng_curve_pre(double r);

/// Coherent-mixture limit on p1 at fixed p0: -p0 ln p0.
double nc_bound_pre(double p0);

/// Shared read-only table of ng_curve_pre over [0, kNgTableMaxSqueezing].
std::span<const ProbabilityPoint> ng_curve_pre_table();

/// p1 of the tabulated Gaussian boundary at p0 (linear interpolation).
double ng_curve_pre_p1_at(double p0);

/// True when (p0, p1) lies outside the region enclosed by the tabulated
/// Gaussian boundary and the p1 = 0 axis (crossing-number test).
bool beyond_ng_curve_pre(double p0, double p1);

/// Parametric boundary of Gaussian states after high-gain amplification:
///   mu_rel(r) = e^r cosh 2r,  g2(r) = 3 - 3 sinh^2 r (sinh 2r + 1) / cosh^2 2r.
PostPoint ng_curve_post(double r);

/// r with e^r cosh 2r = mu_rel, found by bisection on [0, kInversionMaxSqueezing].
double invert_ng_mu_rel(double mu_rel);

/// g2 threshold below which a state with this mu_rel is non-Gaussian.
/// Throws DomainError for mu_rel < 1.
double ng_bound_post(double mu_rel);

/// Coherent-state line 3/2 + 3/mu_rel - 3/(2 mu_rel^2); below it the state is
/// non-classical.
double nc_bound_post(double mu_rel);

/// Lowest g2 reachable by phase-independent states, from vacuum/|1> mixtures
/// on [1, 3) and |1>/|2> mixtures on [3, 5). Throws DomainError outside [1, 5).
double floor_post(double mu_rel);

/// Variance threshold below which a state with pre-amplification mean m is
/// non-Gaussian, obtained by pulling ng_bound_post back through the
/// asymptotic moment map.
double ng_bound_moments(double m);

/// Anti-bunching line s^2 = m.
double nc_bound_moments(double m);

/// Verdict in the (p0, p1) plane. Inputs outside [0, 1] throw
/// ValidationError.
WitnessVerdict classify_probabilities(double p0, double p1, double sigma_p0 = 0, double sigma_p1 = 0);

/// Verdict in the (mu_rel, g2) plane using the asymptotic witnesses. Margins
/// are in g2 units; their sigma folds in sigma_mu through the boundary slope.
/// Throws DomainError for mu_rel < 1.
WitnessVerdict classify_moments(double mu_rel, double g2, double sigma_mu = 0, double sigma_g2 = 0);

/// Samples one boundary. Parametric kinds use r in [0, r_max] (capped at
/// kNgTableMaxSqueezing for the p0/p1 curve); NC_pre_p0p1 uses p0 from 1 to 0
/// and Floor_post_mu_g2 uses mu_rel - 1 over [0, 4).
BoundaryCurve tabulate_curve(CurveKind kind, double r_max, size_t points);

}  // namespace ampwit

#endif
