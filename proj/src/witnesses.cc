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

#include "ampwit/witnesses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ampwit/errors.h"
#include "ampwit/opa.h"

namespace ampwit {

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::NG_pre_p0p1:
            return "NG_pre_p0p1";
        case CurveKind::NC_pre_p0p1:
            return "NC_pre_p0p1";
        case CurveKind::NG_post_mu_g2:
            return "NG_post_mu_g2";
        case CurveKind::NC_post_mu_g2:
            return "NC_post_mu_g2";
        case CurveKind::Floor_post_mu_g2:
            return "Floor_post_mu_g2";
        case CurveKind::NG_pre_moments:
            return "NG_pre_moments";
        case CurveKind::NC_pre_moments:
            return "NC_pre_moments";
    }
    return "unknown";
}

std::optional<CurveKind> parse_curve_kind(std::string_view text) {
    std::optional<CurveKind> short_match;
    size_t short_matches = 0;
    for (auto kind : kAllCurveKinds) {
        auto name = to_string(kind);
        if (text == name) {
            return kind;
        }
        // Short form drops the coordinate suffix; only accepted when unique
        // ("NG_post" yes, "NG_pre" is ambiguous).
        auto cut = name.find('_', name.find('_') + 1);
        if (cut != std::string_view::npos && text == name.substr(0, cut)) {
            short_match = kind;
            short_matches++;
        }
    }
    return short_matches == 1 ? short_match : std::nullopt;
}

ProbabilityPoint ng_curve_pre(double r) {
    if (!(r >= 0 && r <= kNgTableMaxSqueezing)) {
        std::ostringstream out;
        out << "ng_curve_pre: r must lie in [0, " << kNgTableMaxSqueezing << "], got " << r;
        throw DomainError(out.str());
    }
    if (r == 0) {
        return {1.0, 0.0};
    }
    double growth = std::expm1(4 * r);
    double one_minus_tanh = 2 / (std::exp(2 * r) + 1);
    double exponent = -0.25 * growth * one_minus_tanh;
    double log_cosh = r + std::log1p(std::exp(-2 * r)) - std::log(2.0);
    double p0 = std::exp(exponent - log_cosh);
    double p1 = std::exp(std::log(growth) + exponent - std::log(4.0) - 3 * log_cosh);
    return {p0, p1};
}

double nc_bound_pre(double p0) {
    if (!(p0 >= 0 && p0 <= 1)) {
        throw DomainError("nc_bound_pre: p0 must lie in [0, 1]");
    }
    return p0 > 0 ? -p0 * std::log(p0) : 0.0;
}

std::span<const ProbabilityPoint> ng_curve_pre_table() {
    static const std::vector<ProbabilityPoint> table = [] {
        std::vector<ProbabilityPoint> out(kNgTablePoints);
        for (size_t i = 0; i < kNgTablePoints; i++) {
            double r = kNgTableMaxSqueezing * static_cast<double>(i) / static_cast<double>(kNgTablePoints - 1);
            out[i] = ng_curve_pre(r);
        }
        return out;
    }();
    return table;
}

double ng_curve_pre_p1_at(double p0) {
    auto table = ng_curve_pre_table();
    double best = 0;
    for (size_t i = 1; i < table.size(); i++) {
        const auto &a = table[i - 1];
        const auto &b = table[i];
        double lo = std::min(a.p0, b.p0);
        double hi = std::max(a.p0, b.p0);
        if (p0 < lo || p0 > hi || hi == lo) {
            continue;
        }
        double t = (p0 - a.p0) / (b.p0 - a.p0);
        best = std::max(best, a.p1 + t * (b.p1 - a.p1));
    }
    return best;
}

bool beyond_ng_curve_pre(double p0, double p1) {
    auto table = ng_curve_pre_table();
    // Closed polygon: the curve from (1, 0) to its underflowed end, then back
    // to (1, 0) along p1 = 0. Even-odd crossing count along +p1.
    bool inside = false;
    size_t count = table.size();
    for (size_t i = 0; i < count; i++) {
        const auto &a = table[i];
        const auto &b = table[(i + 1) % count];
        if ((a.p0 > p0) != (b.p0 > p0)) {
            double t = (p0 - a.p0) / (b.p0 - a.p0);
            double edge_p1 = a.p1 + t * (b.p1 - a.p1);
            if (p1 < edge_p1) {
                inside = !inside;
            }
        }
    }
    return !inside && p1 > 0;
}

PostPoint ng_curve_post(double r) {
    if (!(r >= 0)) {
        throw DomainError("ng_curve_post: r must be >= 0");
    }
    double sh = std::sinh(r);
    double ch2 = std::cosh(2 * r);
    double mu = std::exp(r) * ch2;
    double g2 = 3 - 3 * sh * sh * (std::sinh(2 * r) + 1) / (ch2 * ch2);
    return {mu, g2};
}

double invert_ng_mu_rel(double mu_rel) {
    if (!(mu_rel >= 1)) {
        std::ostringstream out;
        out << "mu_rel = " << mu_rel << " < 1 is unreachable for any state since mu_rel = 2m + 1 >= 1";
        throw DomainError(out.str());
    }
    double lo = 0;
    double hi = kInversionMaxSqueezing;
    if (ng_curve_post(hi).mu_rel <= mu_rel) {
        return hi;
    }
    for (int iter = 0; iter < 200 && hi - lo > kInversionTolerance; iter++) {
        double mid = 0.5 * (lo + hi);
        if (ng_curve_post(mid).mu_rel < mu_rel) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double ng_bound_post(double mu_rel) {
    return ng_curve_post(invert_ng_mu_rel(mu_rel)).g2;
}

double nc_bound_post(double mu_rel) {
    if (!(mu_rel >= 1)) {
        throw DomainError("nc_bound_post: mu_rel must be >= 1");
    }
    return 1.5 + 3 / mu_rel - 3 / (2 * mu_rel * mu_rel);
}

double floor_post(double mu_rel) {
    if (!(mu_rel >= 1 && mu_rel < 5)) {
        std::ostringstream out;
        out << "floor_post: mu_rel = " << mu_rel
            << " outside [1, 5); the phase-independent floor is only known up to |2>";
        throw DomainError(out.str());
    }
    // Mixture (1 - w)|k> + w|k+1> with k = 0 below mu_rel = 3 and k = 1 above.
    double base = mu_rel < 3 ? 0 : 1;
    double w = (mu_rel - 1 - 2 * base) / 2;
    return asymptotic_moments(base + w, w - w * w).g2_post;
}

double ng_bound_moments(double m) {
    if (!(m >= 0)) {
        throw DomainError("ng_bound_moments: m must be >= 0");
    }
    double mu = 2 * m + 1;
    double g2 = ng_bound_post(mu);
    return ((g2 - 1) * mu * mu / 2 - 1 - m - m * m) / 3;
}

double nc_bound_moments(double m) {
    return m;
}

namespace {

std::string describe_confidence(const BoundaryMargin &deciding) {
    std::ostringstream out;
    out.precision(4);
    if (deciding.sigma <= 0) {
        out << "point estimate only: no uncertainty supplied (margin " << deciding.margin << " to "
            << deciding.boundary << ")";
    } else if (std::abs(deciding.margin) > deciding.sigma) {
        out << "conclusive: |margin| " << std::abs(deciding.margin) << " to " << deciding.boundary
            << " exceeds 1 sigma = " << deciding.sigma;
    } else {
        out << "inconclusive: |margin| " << std::abs(deciding.margin) << " to " << deciding.boundary
            << " is within 1 sigma = " << deciding.sigma;
    }
    return out.str();
}

template <typename F>
double boundary_slope(F threshold, double mu_rel, double lo, double hi) {
    double h = 1e-6 * std::max(1.0, mu_rel);
    double a = std::max(lo, mu_rel - h);
    double b = std::min(hi, mu_rel + h);
    if (b <= a) {
        return 0;
    }
    return (threshold(b) - threshold(a)) / (b - a);
}

}  // namespace

WitnessVerdict classify_probabilities(double p0, double p1, double sigma_p0, double sigma_p1) {
    if (!(p0 >= 0 && p0 <= 1 && p1 >= 0 && p1 <= 1)) {
        std::ostringstream out;
        out << "classify_probabilities: p0 = " << p0 << ", p1 = " << p1 << " must lie in [0, 1]";
        throw ValidationError(out.str());
    }
    if (!(sigma_p0 >= 0 && sigma_p1 >= 0)) {
        throw ValidationError("classify_probabilities: uncertainties must be >= 0");
    }
    double sigma_sum = std::hypot(sigma_p0, sigma_p1);
    double ng_p1 = ng_curve_pre_p1_at(p0);
    double nc_p1 = nc_bound_pre(p0);
    // d(-p0 ln p0)/dp0 = -(ln p0 + 1)
    double nc_slope = p0 > 0 ? -(std::log(p0) + 1) : 0;
    double ng_slope = (ng_curve_pre_p1_at(std::min(1.0, p0 + 1e-6)) - ng_curve_pre_p1_at(std::max(0.0, p0 - 1e-6))) /
                      (std::min(1.0, p0 + 1e-6) - std::max(0.0, p0 - 1e-6));

    WitnessVerdict verdict;
    BoundaryMargin physical{"physical", 1.0, 1 - p0 - p1, sigma_sum};
    BoundaryMargin ng{"ng_pre_p0p1", ng_p1, p1 - ng_p1, std::hypot(sigma_p1, ng_slope * sigma_p0)};
    BoundaryMargin nc{"nc_pre_p0p1", nc_p1, p1 - nc_p1, std::hypot(sigma_p1, nc_slope * sigma_p0)};
    verdict.margins = {physical, ng, nc};

    const BoundaryMargin *deciding = &nc;
    if (physical.margin < -(sigma_sum + kBoundaryTolerance)) {
        verdict.category = VerdictCategory::NonPhysical;
        deciding = &verdict.margins[0];
    } else if (beyond_ng_curve_pre(p0, p1) && ng.margin > kBoundaryTolerance && nc.margin > kBoundaryTolerance) {
        verdict.category = VerdictCategory::NonGaussian;
        deciding = &verdict.margins[1];
    } else if (nc.margin > kBoundaryTolerance) {
        verdict.category = VerdictCategory::NonClassicalOnly;
        deciding = &verdict.margins[2];
    } else {
        verdict.category = VerdictCategory::Classical;
        deciding = &verdict.margins[2];
    }
    verdict.confidence_note = describe_confidence(*deciding);
    if (verdict.category != VerdictCategory::NonPhysical &&
        std::abs(physical.margin) <= std::max(sigma_sum, kBoundaryTolerance)) {
        verdict.confidence_note += verdict.category == VerdictCategory::NonGaussian
                                       ? "; at the boundary between non-Gaussian and non-physical"
                                       : "; at the non-physical boundary p0 + p1 = 1";
    }
    return verdict;
}

WitnessVerdict classify_moments(double mu_rel, double g2, double sigma_mu, double sigma_g2) {
    if (!(mu_rel >= 1)) {
        std::ostringstream out;
        out << "classify_moments: mu_rel = " << mu_rel << " < 1 is unreachable for any state";
        throw DomainError(out.str());
    }
    if (!std::isfinite(g2) || !(sigma_mu >= 0 && sigma_g2 >= 0)) {
        throw ValidationError("classify_moments: g2 must be finite and uncertainties >= 0");
    }
    const double inf = std::numeric_limits<double>::infinity();
    auto margin_for = [&](const char *name, double threshold, double slope) {
        return BoundaryMargin{name, threshold, threshold - g2, std::hypot(sigma_g2, slope * sigma_mu)};
    };

    WitnessVerdict verdict;
    bool has_floor = mu_rel < 5;
    if (has_floor) {
        verdict.margins.push_back(
            margin_for("floor_post", floor_post(mu_rel), boundary_slope(floor_post, mu_rel, 1.0, 5.0 - 1e-9)));
    }
    verdict.margins.push_back(
        margin_for("ng_post", ng_bound_post(mu_rel), boundary_slope(ng_bound_post, mu_rel, 1.0, inf)));
    verdict.margins.push_back(
        margin_for("nc_post", nc_bound_post(mu_rel), boundary_slope(nc_bound_post, mu_rel, 1.0, inf)));

    const BoundaryMargin &ng = *verdict.margin("ng_post");
    const BoundaryMargin &nc = *verdict.margin("nc_post");
    const BoundaryMargin *deciding = &nc;
    if (has_floor && verdict.margin("floor_post")->margin > kBoundaryTolerance) {
        verdict.category = VerdictCategory::BelowPhaseIndependentFloor;
        deciding = verdict.margin("floor_post");
    } else if (ng.margin > kBoundaryTolerance) {
        verdict.category = VerdictCategory::NonGaussian;
        deciding = &ng;
    } else if (nc.margin > kBoundaryTolerance) {
        verdict.category = VerdictCategory::NonClassicalOnly;
    } else {
        verdict.category = VerdictCategory::Classical;
    }
    verdict.confidence_note = describe_confidence(*deciding);
    return verdict;
}

BoundaryCurve tabulate_curve(CurveKind kind, double r_max, size_t points) {
    if (points < 2) {
        throw ValidationError("tabulate_curve: need at least 2 points");
    }
    if (!(r_max > 0)) {
        throw ValidationError("tabulate_curve: r_max must be > 0");
    }
    BoundaryCurve curve{kind, {}, {}, {}};
    curve.parameter.reserve(points);
    curve.x.reserve(points);
    curve.y.reserve(points);
    auto fraction = [&](size_t i) { return static_cast<double>(i) / static_cast<double>(points - 1); };
    auto push = [&](double param, double x, double y) {
        curve.parameter.push_back(param);
        curve.x.push_back(x);
        curve.y.push_back(y);
    };
    for (size_t i = 0; i < points; i++) {
        double f = fraction(i);
        double r = f * r_max;
        switch (kind) {
            case CurveKind::NG_pre_p0p1: {
                double rr = f * std::min(r_max, kNgTableMaxSqueezing);
                auto p = ng_curve_pre(rr);
                push(rr, p.p0, p.p1);
                break;
            }
            case CurveKind::NC_pre_p0p1: {
                double p0 = 1 - f;
                push(p0, p0, nc_bound_pre(p0));
                break;
            }
            case CurveKind::NG_post_mu_g2: {
                auto p = ng_curve_post(r);
                push(r, p.mu_rel, p.g2);
                break;
            }
            case CurveKind::NC_post_mu_g2: {
                double mu = ng_curve_post(r).mu_rel;
                push(r, mu, nc_bound_post(mu));
                break;
            }
            case CurveKind::Floor_post_mu_g2: {
                double offset = 4 * static_cast<double>(i) / static_cast<double>(points);
                push(offset, 1 + offset, floor_post(1 + offset));
                break;
            }
            case CurveKind::NG_pre_moments: {
                auto p = ng_curve_post(r);
                double m = (p.mu_rel - 1) / 2;
                double s2 = ((p.g2 - 1) * p.mu_rel * p.mu_rel / 2 - 1 - m - m * m) / 3;
                push(r, m, s2);
                break;
            }
            case CurveKind::NC_pre_moments: {
                double m = (ng_curve_post(r).mu_rel - 1) / 2;
                push(r, m, nc_bound_moments(m));
                break;
            }
        }
    }
    return curve;
}

}  // namespace ampwit
