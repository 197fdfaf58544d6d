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

#include <gtest/gtest.h>

#include <cmath>

#include "ampwit/errors.h"
#include "ampwit/opa.h"
#include "ampwit/state_models.h"

using namespace ampwit;

namespace {

// Largest p1 over real displaced squeezed vacua with the given p0. The
// displacement is fixed by p0, leaving a one-dimensional search in r.
double squeezed_coherent_p1(double p0) {
    auto p1_at = [&](double r) {
        double c = p0 * std::cosh(r);
        return c >= 1 ? 0.0 : p0 * (1 + std::tanh(r)) * -std::log(c);
    };
    double a = 0;
    double b = std::acosh(1 / p0);
    const double phi = (std::sqrt(5.0) - 1) / 2;
    for (int i = 0; i < 200; i++) {
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        if (p1_at(c) > p1_at(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    return p1_at(0.5 * (a + b));
}

}  // namespace

TEST(ng_curve_pre, endpoints_and_reference_value) {
    auto z = ng_curve_pre(0);
    EXPECT_EQ(z.p0, 1);
    EXPECT_EQ(z.p1, 0);
    // 30-digit reference evaluation.
    auto p = ng_curve_pre(0.2);
    EXPECT_NEAR(p.p0, 0.7666074401766103540863, 1e-15);
    EXPECT_NEAR(p.p1, 0.2257270834827572052501, 1e-15);
    EXPECT_THROW(ng_curve_pre(-0.1), DomainError);
    EXPECT_THROW(ng_curve_pre(5.1), DomainError);
}

TEST(ng_curve_pre, maximum_single_photon_probability) {
    double best = 0;
    double best_p0 = 0;
    for (const auto &p : ng_curve_pre_table()) {
        if (p.p1 > best) {
            best = p.p1;
            best_p0 = p.p0;
        }
    }
    // Table spacing in r is 5e-4, so the sampled peak sits slightly low.
    EXPECT_NEAR(best, 0.47788941237673797, 5e-7);
    EXPECT_LE(best, 0.47788941237673797);
    EXPECT_NEAR(best_p0, 0.31859294158449198, 1e-3);
    auto exact = ng_curve_pre(std::atanh(0.5));
    EXPECT_NEAR(exact.p1, 0.47788941237673797, 1e-15);
    EXPECT_NEAR(exact.p0, 0.31859294158449198, 1e-15);
}

TEST(ng_curve_pre, agrees_with_squeezed_coherent_optimum) {
    for (double p0 : {0.95, 0.9, 0.7, 0.5, 0.31859294158449198, 0.2, 0.05}) {
        EXPECT_NEAR(ng_curve_pre_p1_at(p0), squeezed_coherent_p1(p0), 2e-6) << p0;
    }
}

TEST(ng_curve_pre, p0_decreases_along_table) {
    auto table = ng_curve_pre_table();
    ASSERT_EQ(table.size(), kNgTablePoints);
    for (size_t i = 1; i < table.size(); i++) {
        EXPECT_LE(table[i].p0, table[i - 1].p0);
    }
}

TEST(nc_bound_pre, values) {
    EXPECT_EQ(nc_bound_pre(1), 0);
    EXPECT_NEAR(nc_bound_pre(std::exp(-1.0)), std::exp(-1.0), 1e-16);
    EXPECT_NEAR(nc_bound_pre(0.5), 0.34657359027997265, 1e-16);
}

TEST(beyond_ng_curve_pre, region_test) {
    EXPECT_TRUE(beyond_ng_curve_pre(0.49, 0.51));
    EXPECT_FALSE(beyond_ng_curve_pre(0.9, 0.05));
    EXPECT_TRUE(beyond_ng_curve_pre(0.0, 1.0));
    EXPECT_FALSE(beyond_ng_curve_pre(0.5, 0.4244));
    EXPECT_TRUE(beyond_ng_curve_pre(0.5, 0.4246));
}

TEST(ng_bound_post, reference_values) {
    EXPECT_EQ(ng_bound_post(1), 3);
    double mu = std::exp(1.0) * std::cosh(2.0);
    EXPECT_NEAR(mu, 10.226708182179555, 1e-12);
    double s = std::sinh(1.0);
    double c = std::cosh(2.0);
    double expected = 3 - 3 * s * s * (std::sinh(2.0) + 1) / (c * c);
    EXPECT_NEAR(expected, 1.6455925430774164, 1e-14);
    EXPECT_NEAR(ng_bound_post(mu), expected, 1e-10);
    EXPECT_NEAR(ng_bound_post(1.66), 2.6406188, 1e-7);
    EXPECT_NEAR(ng_bound_post(1.609), 2.6707314, 1e-7);
    EXPECT_NEAR(ng_bound_post(2), 2.4635186, 1e-7);
    EXPECT_NEAR(ng_bound_post(3), 2.1327447, 1e-7);
    EXPECT_NEAR(ng_bound_post(5), 1.8511759, 1e-7);
    EXPECT_THROW(ng_bound_post(0.99), DomainError);
}

TEST(ng_bound_post, large_squeezing_tail) {
    for (double r : {3.0, 4.0, 5.0, 6.0}) {
        auto p = ng_curve_post(r);
        EXPECT_NEAR(p.g2, 1.5 + 9 * std::exp(-4 * r), 2e-3 * 9 * std::exp(-4 * r)) << r;
        EXPECT_GT(p.g2, 1.5);
    }
    EXPECT_NEAR(ng_bound_post(1e8), 1.5, 1e-6);
}

TEST(ng_bound_post, inversion_round_trip) {
    for (double r : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        auto p = ng_curve_post(r);
        EXPECT_NEAR(invert_ng_mu_rel(p.mu_rel), r, 1e-9) << r;
        EXPECT_NEAR(ng_bound_post(p.mu_rel), p.g2, 1e-8) << r;
    }
}

TEST(ng_bound_post, strictly_decreasing) {
    double previous = ng_bound_post(1);
    for (double mu = 1.01; mu < 60; mu += 0.01) {
        double g = ng_bound_post(mu);
        EXPECT_LT(g, previous) << mu;
        previous = g;
    }
}

TEST(nc_bound_post, values) {
    EXPECT_NEAR(nc_bound_post(1), 3, 1e-15);
    EXPECT_NEAR(nc_bound_post(1.66), 2.7628828567281176, 1e-12);
    EXPECT_NEAR(nc_bound_post(2), 2.625, 1e-15);
    EXPECT_NEAR(nc_bound_post(3), 7.0 / 3, 1e-15);
    EXPECT_NEAR(nc_bound_post(5), 2.04, 1e-15);
}

TEST(floor_post, values) {
    EXPECT_NEAR(floor_post(1), 3, 1e-15);
    EXPECT_NEAR(floor_post(2), 2.25, 1e-15);
    EXPECT_NEAR(floor_post(3), 5.0 / 3, 1e-15);
    EXPECT_NEAR(floor_post(std::nextafter(3.0, 0.0)), 5.0 / 3, 1e-12);
    EXPECT_LT(1.66, floor_post(2));
    EXPECT_THROW(floor_post(0.9), DomainError);
    EXPECT_THROW(floor_post(5), DomainError);
}

TEST(boundaries, ordering) {
    for (double mu = 1.001; mu < 5; mu += 0.001) {
        double f = floor_post(mu);
        double ng = ng_bound_post(mu);
        double nc = nc_bound_post(mu);
        ASSERT_LT(f, ng) << mu;
        ASSERT_LT(ng, nc) << mu;
        ASSERT_LT(nc, 3) << mu;
    }
}

TEST(ng_bound_moments, values) {
    EXPECT_NEAR(ng_bound_moments(0), 0, 1e-12);
    double b = ng_bound_moments(1);
    EXPECT_NEAR(b, 0.69911710989713656, 1e-8);
    EXPECT_GT(b, 0);
    EXPECT_LT(b, 1);
    EXPECT_EQ(nc_bound_moments(2.5), 2.5);
}

TEST(ng_bound_moments, agrees_with_classify_moments) {
    for (int i = 0; i < 100; i++) {
        double m = 0.02 + 0.05 * i;
        double bound = ng_bound_moments(m);
        for (int j = 0; j < 100; j++) {
            double s2 = 0.06 * j;
            if (std::abs(s2 - bound) < 1e-6) {
                continue;
            }
            auto a = asymptotic_moments(m, s2);
            auto v = classify_moments(a.mu_rel, a.g2_post);
            bool ng = v.category == VerdictCategory::NonGaussian ||
                      v.category == VerdictCategory::BelowPhaseIndependentFloor;
            EXPECT_EQ(ng, s2 < bound) << "m=" << m << " s2=" << s2;
        }
    }
}

TEST(classify_probabilities, boundary_with_nonphysical) {
    auto v = classify_probabilities(0.67, 0.33);
    EXPECT_NE(v.category, VerdictCategory::Classical);
    EXPECT_NE(v.confidence_note.find("at the boundary between non-Gaussian and non-physical"), std::string::npos)
        << v.confidence_note;
    ASSERT_NE(v.margin("physical"), nullptr);
    EXPECT_NEAR(v.margin("physical")->margin, 0, 1e-12);
}

TEST(classify_probabilities, on_nc_boundary) {
    auto v = classify_probabilities(0.715, 0.239);
    ASSERT_NE(v.margin("nc_pre_p0p1"), nullptr);
    EXPECT_LT(std::abs(v.margin("nc_pre_p0p1")->margin), 0.005);
}

TEST(classify_probabilities, categories) {
    EXPECT_EQ(classify_probabilities(0.99, 0.005).category, VerdictCategory::Classical);
    EXPECT_EQ(classify_probabilities(0.49, 0.51).category, VerdictCategory::NonGaussian);
    EXPECT_EQ(classify_probabilities(0.5, 0.4).category, VerdictCategory::NonClassicalOnly);
    EXPECT_EQ(classify_probabilities(0.6, 0.6).category, VerdictCategory::NonPhysical);
    EXPECT_EQ(classify_probabilities(0.6, 0.41, 0.01, 0.01).category, VerdictCategory::NonGaussian);
}

TEST(classify_probabilities, ng_implies_nc) {
    for (double p0 = 0.01; p0 < 1; p0 += 0.01) {
        for (double p1 = 0.0; p0 + p1 <= 1; p1 += 0.01) {
            auto v = classify_probabilities(p0, p1);
            if (v.category == VerdictCategory::NonGaussian) {
                EXPECT_GT(v.margin("nc_pre_p0p1")->margin, 0) << p0 << "," << p1;
            }
        }
    }
}

TEST(classify_probabilities, rejects_out_of_range) {
    EXPECT_THROW(classify_probabilities(-0.1, 0.5), ValidationError);
    EXPECT_THROW(classify_probabilities(0.5, 1.1), ValidationError);
}

TEST(classify_moments, examples) {
    EXPECT_EQ(classify_moments(1.66, 2.58).category, VerdictCategory::NonGaussian);
    for (double mu : {1.2, 1.66, 2.0, 4.0, 9.0}) {
        EXPECT_EQ(classify_moments(mu, 3.0).category, VerdictCategory::Classical) << mu;
    }
    EXPECT_EQ(classify_moments(2, 1.66).category, VerdictCategory::BelowPhaseIndependentFloor);
    EXPECT_EQ(classify_moments(2, 2.55).category, VerdictCategory::NonClassicalOnly);
    EXPECT_THROW(classify_moments(0.9, 2.0), DomainError);
}

TEST(classify_moments, reference_states) {
    for (int n : {1, 2}) {
        auto a = asymptotic_moments(moments(make_fock(n)));
        auto v = classify_moments(a.mu_rel, a.g2_post);
        EXPECT_EQ(v.category, VerdictCategory::NonGaussian) << n;
        EXPECT_GT(v.margin("ng_post")->margin, 0);
    }
    for (double nbar : {0.1, 1.0, 4.0}) {
        auto a = asymptotic_moments(moments(make_thermal(nbar)));
        EXPECT_EQ(classify_moments(a.mu_rel, a.g2_post).category, VerdictCategory::Classical);
    }
    for (double m = 0.01; m <= 20; m *= 1.4) {
        auto a = asymptotic_moments(moments(make_coherent(m)));
        auto v = classify_moments(a.mu_rel, a.g2_post);
        EXPECT_EQ(v.category, VerdictCategory::Classical) << m;
        EXPECT_NEAR(v.margin("nc_post")->margin, 0, 1e-9) << m;
    }
}

TEST(classify_moments, confidence_note) {
    EXPECT_NE(classify_moments(1.66, 2.58, 0.02, 0.03).confidence_note.find("conclusive"), std::string::npos);
    EXPECT_NE(classify_moments(1.66, 2.58, 0.02, 0.08).confidence_note.find("inconclusive"), std::string::npos);
    EXPECT_NE(classify_moments(1.66, 2.58).confidence_note.find("point estimate"), std::string::npos);
}

TEST(curve_kind, parsing) {
    for (auto kind : kAllCurveKinds) {
        EXPECT_EQ(parse_curve_kind(to_string(kind)), kind);
    }
    EXPECT_EQ(parse_curve_kind("NG_post"), CurveKind::NG_post_mu_g2);
    EXPECT_EQ(parse_curve_kind("Floor_post"), CurveKind::Floor_post_mu_g2);
    EXPECT_FALSE(parse_curve_kind("NG_pre").has_value());
    EXPECT_FALSE(parse_curve_kind("bogus").has_value());
}

TEST(tabulate_curve, shapes) {
    auto ng = tabulate_curve(CurveKind::NG_post_mu_g2, 5, 1000);
    ASSERT_EQ(ng.x.size(), 1000u);
    EXPECT_EQ(ng.x.front(), 1);
    EXPECT_EQ(ng.y.front(), 3);
    EXPECT_NEAR(ng.parameter.back(), 5, 1e-15);
    auto nc = tabulate_curve(CurveKind::NC_pre_p0p1, 5, 11);
    EXPECT_EQ(nc.x.front(), 1);
    EXPECT_EQ(nc.y.front(), 0);
    auto fl = tabulate_curve(CurveKind::Floor_post_mu_g2, 5, 100);
    EXPECT_LT(fl.x.back(), 5);
    auto mom = tabulate_curve(CurveKind::NG_pre_moments, 2, 50);
    for (size_t i = 0; i < mom.x.size(); i++) {
        EXPECT_NEAR(mom.y[i], ng_bound_moments(mom.x[i]), 1e-7);
    }
    EXPECT_THROW(tabulate_curve(CurveKind::NG_post_mu_g2, 5, 1), ValidationError);
}
