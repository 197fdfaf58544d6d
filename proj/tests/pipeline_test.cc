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

#include "ampwit/pipeline.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "ampwit/errors.h"
#include "ampwit/io.h"
#include "json.hpp"

using namespace ampwit;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("ampwit_pipeline_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() {
        fs::remove_all(path_);
    }
    std::string file(const std::string &name, const std::string &content) const {
        auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

private:
    fs::path path_;
};

// Heralded source with an overall signal transmittance of 0.26.
HeraldedSourceConfig reference_source(double brightness) {
    return HeraldedSourceConfig{brightness, 0.26, 0.272, 0.0};
}

AnalysisOptions quick_options(uint64_t seed, size_t resamples = 300) {
    AnalysisOptions o;
    o.bootstrap = {resamples, 0.68, seed};
    return o;
}

const GainSetting kGain(6.5);

}  // namespace

TEST(ingest, three_row_fixture) {
    TempDir dir;
    auto path = dir.file("three.csv", "# gain=6.5\npulse_index,counts,herald\n0,10.5,1\n1,20,0\n2,30.25,1\n");
    auto all = ingest_pulse_csv(path);
    EXPECT_EQ(all.counts, (std::vector<double>{10.5, 20, 30.25}));
    EXPECT_FALSE(all.herald.has_value());
    auto kept = ingest_pulse_csv(path, true);
    EXPECT_EQ(kept.counts, (std::vector<double>{10.5, 30.25}));
    EXPECT_EQ(kept.meta.at("gain"), "6.5");
}

TEST(ingest, conditioning_errors) {
    TempDir dir;
    EXPECT_THROW(ingest_pulse_csv(dir.file("plain.csv", "pulse_index,counts\n0,1\n"), true), ValidationError);
    EXPECT_THROW(ingest_pulse_csv(dir.file("none.csv", "pulse_index,counts,herald\n0,1,0\n"), true), ValidationError);
    EXPECT_THROW(ingest_pulse_csv(dir.file("empty.csv", "pulse_index,counts\n")), ValidationError);
}

TEST(ingest, simulated_fixture_round_trips) {
    TempDir dir;
    auto records = sample_pulses(make_fock(1), kGain, 35000, 1.0, 12);
    std::ostringstream out;
    write_pulse_csv(out, records);
    auto back = ingest_pulse_csv(dir.file("sim.csv", out.str()));
    ASSERT_EQ(back.size(), 35000u);
    EXPECT_EQ(back.counts, records.counts);
    double a = 0;
    double b = 0;
    for (size_t i = 0; i < back.size(); i++) {
        a += records.counts[i];
        b += back.counts[i];
    }
    EXPECT_EQ(a, b);
}

TEST(sha256, known_digest) {
    TempDir dir;
    EXPECT_EQ(sha256_file(dir.file("abc.txt", "abc")),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_THROW(sha256_file("/nonexistent"), ValidationError);
}

TEST(analyze, vacuum_against_itself) {
    auto vac = sample_pulses(make_vacuum(), kGain, 35000, 1.0, 21);
    auto r = analyze(vac, vac, quick_options(1));
    EXPECT_EQ(r.mu_rel.value, 1);
    EXPECT_NEAR(r.g2.value, 3, 0.03);
    EXPECT_LE(r.g2.ci.lo, r.g2.value);
    EXPECT_GE(r.g2.ci.hi, r.g2.value);
    // Every boundary meets at (1, 3), so sampling noise alone decides the
    // side; anything other than Classical must be flagged as such.
    if (r.verdict.category != VerdictCategory::Classical) {
        EXPECT_NE(r.verdict.confidence_note.find("inconclusive"), std::string::npos) << r.verdict.confidence_note;
    }
}

TEST(analyze, reference_heralded_point) {
    auto dist = heralded_spdc(reference_source(0.1)).dist;
    auto signal = sample_pulses(dist, kGain, 35000, 1.0, 31);
    auto vacuum = sample_pulses(make_vacuum(), kGain, 35000, 1.0, 32);
    auto r = analyze(signal, vacuum, quick_options(33));
    EXPECT_NEAR(r.mu_rel.value, 1.66, 0.1);
    EXPECT_NEAR(r.g2.value, 2.58, 0.12);
    EXPECT_EQ(r.verdict.category, VerdictCategory::NonGaussian) << r.verdict.confidence_note;
    auto expected = asymptotic_moments(moments(dist));
    EXPECT_NEAR(r.mu_rel.value, expected.mu_rel, 3 * r.mu_rel.se);
    EXPECT_NEAR(r.g2.value, expected.g2_post, 3 * r.g2.se);
    EXPECT_EQ(r.boundaries.mu_rel, r.mu_rel.value);
    EXPECT_DOUBLE_EQ(r.boundaries.ng_post, ng_bound_post(r.mu_rel.value));
    EXPECT_DOUBLE_EQ(r.boundaries.nc_post, nc_bound_post(r.mu_rel.value));
    ASSERT_TRUE(r.boundaries.floor_post.has_value());
    EXPECT_DOUBLE_EQ(*r.boundaries.floor_post, floor_post(r.mu_rel.value));
}

TEST(analyze, unconditioned_thermal_is_classical) {
    uint64_t seed = 40;
    for (double nbar : {0.05, 0.25, 0.5, 1.0}) {
        auto signal = sample_pulses(make_thermal(nbar), kGain, 35000, 1.0, seed++);
        auto vacuum = sample_pulses(make_vacuum(), kGain, 35000, 1.0, seed++);
        auto o = quick_options(seed++);
        o.bootstrap.level = 0.997;
        auto r = analyze(signal, vacuum, o);
        EXPECT_LE(r.g2.ci.lo, 3) << nbar;
        EXPECT_GE(r.g2.ci.hi, 3) << nbar;
        // Dim thermal light sits within noise of the coherent line.
        if (r.verdict.category != VerdictCategory::Classical) {
            EXPECT_NE(r.verdict.confidence_note.find("inconclusive"), std::string::npos) << nbar;
        }
        if (nbar >= 0.5) {
            EXPECT_EQ(r.verdict.category, VerdictCategory::Classical) << nbar;
        }
    }
}

TEST(analyze, invariant_under_common_rescaling) {
    auto signal = sample_pulses(make_fock(1), kGain, 20000, 1.0, 51);
    auto vacuum = sample_pulses(make_vacuum(), kGain, 20000, 1.0, 52);
    auto base = analyze(signal, vacuum, quick_options(5, 50));
    for (double c : {0.37, 1e-4, 2.5e3}) {
        auto s = signal;
        auto v = vacuum;
        for (auto &x : s.counts) {
            x *= c;
        }
        for (auto &x : v.counts) {
            x *= c;
        }
        auto r = analyze(s, v, quick_options(5, 50));
        EXPECT_NEAR(r.mu_rel.value, base.mu_rel.value, 1e-12 * base.mu_rel.value) << c;
        EXPECT_NEAR(r.g2.value, base.g2.value, 1e-12 * base.g2.value) << c;
        EXPECT_EQ(r.verdict.category, base.verdict.category);
    }
}

TEST(analyze, errors) {
    PulseRecordSet zeros;
    zeros.counts.assign(100, 0.0);
    auto signal = sample_pulses(make_fock(1), kGain, 1000, 1.0, 1);
    EXPECT_THROW(analyze(signal, zeros), DomainError);
    EXPECT_THROW(analyze(zeros, signal), DomainError);
    PulseRecordSet empty;
    EXPECT_THROW(analyze(signal, empty), ValidationError);
    // A signal far dimmer than the vacuum reference.
    auto dim = signal;
    for (auto &x : dim.counts) {
        x *= 0.1;
    }
    EXPECT_THROW(analyze(dim, signal), DomainError);
}

TEST(analyze, json_report_schema) {
    auto signal = sample_pulses(make_fock(1), kGain, 5000, 1.0, 61);
    auto vacuum = sample_pulses(make_vacuum(), kGain, 5000, 1.0, 62);
    auto r = analyze(signal, vacuum, quick_options(63, 100));
    r.signal.sha256 = "00";
    auto doc = nlohmann::json::parse(to_json(r));
    EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(doc["mu_rel"]["value"].get<double>(), r.mu_rel.value);
    EXPECT_LE(doc["g2"]["ci"][0].get<double>(), doc["g2"]["ci"][1].get<double>());
    EXPECT_EQ(doc["verdict"]["category"], std::string(to_string(r.verdict.category)));
    EXPECT_EQ(doc["boundaries"]["ng_post"].get<double>(), r.boundaries.ng_post);
    EXPECT_EQ(doc["inputs"]["signal"]["sha256"], "00");
    EXPECT_TRUE(doc["inputs"]["vacuum"]["sha256"].is_null());
    EXPECT_EQ(doc["inputs"]["seed"], 63);
    EXPECT_EQ(doc["inputs"]["signal"]["n_pulses"], 5000);
    EXPECT_NE(doc["uncertainty_method"].get<std::string>().find("bootstrap"), std::string::npos);
}

TEST(sweep, monte_carlo_agrees_with_analytic) {
    std::vector<double> b = {0.05, 0.1, 0.2};
    HeraldedSourceConfig base{0.1, 0.51, 0.272, 0.0};
    auto exact = sweep_brightness(base, b, 1.0, kGain);
    SweepOptions mc;
    mc.mode = SweepMode::MonteCarlo;
    mc.n_pulses = 100000;
    mc.seed = 3;
    mc.resamples = 200;
    auto sampled = sweep_brightness(base, b, 1.0, kGain, mc);
    for (size_t i = 0; i < b.size(); i++) {
        EXPECT_NEAR(sampled[i].mu_rel, exact[i].mu_rel, 3 * sampled[i].sigma_mu_rel) << b[i];
        EXPECT_NEAR(sampled[i].g2, exact[i].g2, 3 * sampled[i].sigma_g2) << b[i];
        EXPECT_EQ(sampled[i].herald_probability, exact[i].herald_probability);
        // Click inference folds n >= 3 into p2+, so compare against what the
        // estimator converges to.
        HeraldedSourceConfig cfg = base;
        cfg.mean_pairs = b[i];
        auto target = infer_probabilities(expected_clicks(heralded_spdc(cfg).dist, mc.hbt), mc.hbt);
        EXPECT_NEAR(sampled[i].p0, target.p0, 3 * sampled[i].sigma_p0) << b[i];
        EXPECT_NEAR(sampled[i].p1, target.p1, 3 * sampled[i].sigma_p1) << b[i];
        if (exact[i].p2plus < 0.05) {
            EXPECT_NEAR(sampled[i].p0, exact[i].p0, 3 * sampled[i].sigma_p0) << b[i];
            EXPECT_NEAR(sampled[i].p1, exact[i].p1, 3 * sampled[i].sigma_p1) << b[i];
        }
    }
}

TEST(sweep, low_brightness_limit_is_attenuated_single_photon) {
    std::vector<double> b = {1e-7};
    auto row = sweep_brightness(reference_source(0.1), b, 1.0, kGain)[0];
    double eta = 0.26;
    EXPECT_NEAR(row.p1, eta, 1e-6);
    EXPECT_NEAR(row.p0, 1 - eta, 1e-6);
    EXPECT_NEAR(row.mu_rel, 1 + 2 * eta, 1e-6);
    // s2 = eta - eta^2 for the mixture.
    EXPECT_NEAR(row.g2, 1 + 2 * (1 + 4 * eta - 2 * eta * eta) / ((1 + 2 * eta) * (1 + 2 * eta)), 1e-6);
}

TEST(sweep, extra_loss_composes_with_signal_efficiency) {
    std::vector<double> b = {0.1, 0.4};
    auto split = sweep_brightness(HeraldedSourceConfig{0.1, 0.52, 0.272, 0.0}, b, 0.5, kGain);
    auto whole = sweep_brightness(reference_source(0.1), b, 1.0, kGain);
    for (size_t i = 0; i < b.size(); i++) {
        EXPECT_NEAR(split[i].p1, whole[i].p1, 1e-12);
        EXPECT_NEAR(split[i].g2, whole[i].g2, 1e-12);
    }
}

TEST(sweep, brighter_sources_drift_toward_classical) {
    std::vector<double> b = {0.1, 0.15, 0.39, 0.62, 0.77, 0.94};
    auto rows = sweep_brightness(reference_source(0.1), b, 1.0, kGain);
    EXPECT_EQ(rows.front().moment_verdict.category, VerdictCategory::NonGaussian);
    for (size_t i = 1; i < rows.size(); i++) {
        EXPECT_GT(rows[i].mu_rel, rows[i - 1].mu_rel);
        EXPECT_LT(rows[i].moment_verdict.margin("ng_post")->margin,
                  rows[i - 1].moment_verdict.margin("ng_post")->margin);
        EXPECT_LT(rows[i].moment_verdict.margin("nc_post")->margin,
                  rows[i - 1].moment_verdict.margin("nc_post")->margin);
    }
    EXPECT_EQ(rows.back().moment_verdict.category, VerdictCategory::Classical);
}

TEST(sweep, probability_verdict_flip_of_model) {
    // Reference values from an independent direct-sum evaluation of the
    // heralded model: the non-Gaussian margin changes sign between 0.40 and
    // 0.42 pairs per pulse.
    std::vector<double> b = {0.40, 0.42};
    auto rows = sweep_brightness(HeraldedSourceConfig{0.1, 0.51, 0.272, 0.0}, b, 1.0, kGain);
    EXPECT_NEAR(rows[0].probability_verdict.margin("ng_pre_p0p1")->margin, 0.00198, 2e-5);
    EXPECT_NEAR(rows[1].probability_verdict.margin("ng_pre_p0p1")->margin, -0.0011, 2e-5);
    EXPECT_EQ(rows[0].probability_verdict.category, VerdictCategory::NonGaussian);
    EXPECT_EQ(rows[1].probability_verdict.category, VerdictCategory::NonClassicalOnly);
}

TEST(sweep, csv_and_errors) {
    std::vector<double> b = {0.1, 0.2};
    auto csv = sweep_to_csv(sweep_brightness(reference_source(0.1), b, 1.0, kGain));
    EXPECT_EQ(csv.rfind("brightness,herald_probability,p0,p1,p2plus,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    std::vector<double> none;
    EXPECT_THROW(sweep_brightness(reference_source(0.1), none, 1.0, kGain), ValidationError);
    EXPECT_THROW(sweep_brightness(reference_source(0.1), b, 0.0, kGain), DomainError);
}

TEST(sweep, deterministic_monte_carlo) {
    std::vector<double> b = {0.1, 0.3};
    SweepOptions mc;
    mc.mode = SweepMode::MonteCarlo;
    mc.n_pulses = 5000;
    mc.resamples = 50;
    mc.seed = 8;
    auto a = sweep_to_csv(sweep_brightness(reference_source(0.1), b, 1.0, kGain, mc));
    auto c = sweep_to_csv(sweep_brightness(reference_source(0.1), b, 1.0, kGain, mc));
    EXPECT_EQ(a, c);
}

TEST(sweep_config, parse) {
    auto cfg = parse_sweep_config(R"({"source": {"eta_signal": 0.51}, "brightness": [0.1, 0.2],
                                      "mode": "monte_carlo", "pulses": 1000, "seed": 4, "extra_loss": 0.5})");
    EXPECT_EQ(cfg.source.eta_signal, 0.51);
    EXPECT_EQ(cfg.brightness.size(), 2u);
    EXPECT_EQ(cfg.options.mode, SweepMode::MonteCarlo);
    EXPECT_EQ(cfg.options.n_pulses, 1000u);
    EXPECT_EQ(cfg.options.seed, 4u);
    EXPECT_EQ(cfg.extra_loss, 0.5);
    EXPECT_EQ(cfg.gain, kDefaultGain);
    EXPECT_THROW(parse_sweep_config(R"({"brightness": []})"), ValidationError);
    EXPECT_THROW(parse_sweep_config(R"({"brightness": [0.1], "colour": 1})"), ValidationError);
    EXPECT_THROW(parse_sweep_config(R"({"brightness": [0.1], "mode": "fast"})"), ValidationError);
    EXPECT_THROW(parse_sweep_config(R"({"mode": "analytic"})"), ValidationError);
    EXPECT_THROW(parse_sweep_config(R"({"brightness": "0.1"})"), ValidationError);
}

TEST(preamp, examples) {
    std::vector<PostPoint> post = {{3, 5.0 / 3}, {1, 3}, {5, 3}};
    auto rows = preamp_comparison(post, {}, 1.0);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].m, 1, 1e-15);
    EXPECT_NEAR(rows[0].s2, 0, 1e-14);
    EXPECT_EQ(rows[1].m, 0);
    EXPECT_NEAR(rows[1].s2, 0, 1e-15);
    EXPECT_NEAR(rows[2].s2, 2 * 2 + 2, 1e-12);
    for (const auto &r : rows) {
        EXPECT_FALSE(r.flagged);
        EXPECT_EQ(r.source, PreampRow::Source::Post);
    }
}

TEST(preamp, thermal_identity) {
    for (double nbar = 0; nbar < 20; nbar += 0.7) {
        std::vector<PostPoint> post = {{2 * nbar + 1, 3}};
        auto row = preamp_comparison(post, {}, 1.0)[0];
        EXPECT_NEAR(row.s2, nbar * nbar + nbar, 1e-10 * (1 + nbar * nbar));
    }
}

TEST(preamp, inverts_asymptotic_map) {
    for (double m = 0; m < 6; m += 0.31) {
        for (double s2 = 0; s2 < 8; s2 += 0.43) {
            auto a = asymptotic_moments(m, s2);
            std::vector<PostPoint> post = {{a.mu_rel, a.g2_post}};
            auto row = preamp_comparison(post, {}, 1.0)[0];
            EXPECT_NEAR(row.m, m, 1e-10);
            EXPECT_NEAR(row.s2, s2, 1e-10);
        }
    }
}

TEST(preamp, probability_points_are_loss_corrected) {
    std::vector<ProbabilityTriple> prob = {{0.6, 0.3, 0.1}};
    auto row = preamp_comparison({}, prob, 0.5)[0];
    EXPECT_EQ(row.source, PreampRow::Source::Probability);
    // Corrected state (0.4, 0.2, 0.4).
    EXPECT_NEAR(row.m, 1.0, 1e-14);
    EXPECT_NEAR(row.s2, 0.2 + 1.6 - 1.0, 1e-14);
    ASSERT_TRUE(row.ng_bound.has_value());
    EXPECT_NEAR(*row.ng_bound, ng_bound_moments(1.0), 1e-15);
    EXPECT_EQ(row.nc_bound, 1.0);
}

TEST(preamp, flags_unphysical_rows) {
    std::vector<PostPoint> post = {{3, 1.5}};
    std::vector<ProbabilityTriple> prob = {{0.5, 0.05, 0.45}};
    auto rows = preamp_comparison(post, prob, 0.5);
    EXPECT_TRUE(rows[0].flagged);
    EXPECT_LT(rows[0].s2, 0);
    EXPECT_TRUE(rows[1].flagged);
    auto csv = preamp_to_csv(rows);
    EXPECT_EQ(csv.rfind("source,m,s2,ng_bound,nc_bound,flagged\npost,", 0), 0u);
}
