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

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <random>
#include <sstream>

#include "ampwit/errors.h"
#include "ampwit/io.h"
#include "ampwit/parallel.h"
#include "json.hpp"

namespace ampwit {

PulseRecordSet ingest_pulse_csv(const std::string &path, bool conditioned) {
    auto records = load_pulse_csv(path);
    if (!conditioned) {
        records.herald.reset();
        return records;
    }
    if (!records.herald) {
        throw ValidationError("'" + path + "' has no herald column; conditioned analysis needs one");
    }
    auto kept = records.conditioned();
    if (kept.counts.empty()) {
        throw ValidationError("'" + path + "' has no rows with herald=1");
    }
    return kept;
}

std::string sha256_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "' for hashing");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx.get(), buf, static_cast<size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; i++) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

namespace {

struct MeanVar {
    double mean;
    double var;
};

template <typename ValueAt>
MeanVar mean_var(size_t n, double pivot, ValueAt value_at) {
    double sum = 0;
    double sum_sq = 0;
    for (size_t i = 0; i < n; i++) {
        double d = value_at(i) - pivot;
        sum += d;
        sum_sq += d * d;
    }
    double nd = static_cast<double>(n);
    double shift = sum / nd;
    return {pivot + shift, std::max(0.0, (sum_sq - nd * shift * shift) / (nd - 1))};
}

MeanVar mean_var(const std::vector<double> &counts) {
    double pivot = 0;
    for (double c : counts) {
        pivot += c;
    }
    pivot /= static_cast<double>(counts.size());
    return mean_var(counts.size(), pivot, [&](size_t i) { return counts[i]; });
}

double intensity_g2(const MeanVar &mv) {
    return 1 + mv.var / (mv.mean * mv.mean);
}

void require_records(const PulseRecordSet &records, const char *label) {
    auto check = validate(records);
    if (!check) {
        throw ValidationError(std::string(label) + " records: " + check.message);
    }
    if (records.size() < 2) {
        throw ValidationError(std::string(label) + " records: need at least 2 pulses");
    }
}

RecordProvenance provenance_of(const PulseRecordSet &records, const char *label) {
    RecordProvenance p;
    p.label = label;
    p.n_pulses = records.size();
    p.meta = records.meta;
    return p;
}

}  // namespace

AnalysisReport analyze(const PulseRecordSet &signal, const PulseRecordSet &vacuum, const AnalysisOptions &options) {
    require_records(signal, "signal");
    require_records(vacuum, "vacuum");
    MeanVar s = mean_var(signal.counts);
    MeanVar v = mean_var(vacuum.counts);
    if (!(v.mean > 0)) {
        throw DomainError("vacuum reference has zero mean; cannot normalize");
    }
    if (!(s.mean > 0)) {
        throw DomainError("signal records have zero mean; g2 is undefined");
    }

    AnalysisReport report;
    report.mu_rel.value = s.mean / v.mean;
    report.g2.value = intensity_g2(s);
    report.signal = provenance_of(signal, "signal");
    report.vacuum = provenance_of(vacuum, "vacuum");
    report.seed = options.bootstrap.seed;
    report.resamples = options.bootstrap.resamples;
    report.level = options.bootstrap.level;
    report.gain = options.gain;

    size_t resamples = options.bootstrap.resamples;
    std::vector<double> mu_reps(resamples);
    std::vector<double> g2_reps(resamples);
    const auto &sc = signal.counts;
    const auto &vc = vacuum.counts;
    parallel_for(resamples, [&](size_t b) {
        std::mt19937_64 rng_s(derive_seed(options.bootstrap.seed, 2 * b));
        std::mt19937_64 rng_v(derive_seed(options.bootstrap.seed, 2 * b + 1));
        std::uniform_int_distribution<size_t> pick_s(0, sc.size() - 1);
        std::uniform_int_distribution<size_t> pick_v(0, vc.size() - 1);
        auto rs = mean_var(sc.size(), s.mean, [&](size_t) { return sc[pick_s(rng_s)]; });
        auto rv = mean_var(vc.size(), v.mean, [&](size_t) { return vc[pick_v(rng_v)]; });
        mu_reps[b] = rv.mean > 0 ? rs.mean / rv.mean : std::nan("");
        g2_reps[b] = rs.mean > 0 ? intensity_g2(rs) : std::nan("");
    });
    auto not_finite = [](double x) { return !std::isfinite(x); };
    std::erase_if(mu_reps, not_finite);
    std::erase_if(g2_reps, not_finite);
    auto summarize = [&](EstimateWithCi &est, std::vector<double> &reps) {
        if (reps.size() >= 2) {
            est.se = sample_stddev(reps);
            est.ci = percentile_interval(reps, options.bootstrap.level);
        } else {
            est.ci = {est.value, est.value};
        }
    };
    summarize(report.mu_rel, mu_reps);
    summarize(report.g2, g2_reps);

    double mu_eval = report.mu_rel.value;
    bool clamped = false;
    if (mu_eval < 1) {
        if (mu_eval + 3 * report.mu_rel.se < 1) {
            std::ostringstream msg;
            msg << "mu_rel = " << mu_eval << " lies more than 3 standard errors below 1; the signal is dimmer than "
                << "amplified vacuum";
            throw DomainError(msg.str());
        }
        mu_eval = 1;
        clamped = true;
    }
    report.verdict = classify_moments(mu_eval, report.g2.value, report.mu_rel.se, report.g2.se);
    if (clamped) {
        report.verdict.confidence_note += "; mu_rel below 1 within uncertainty, boundaries evaluated at mu_rel = 1";
    }
    report.boundaries.mu_rel = mu_eval;
    if (const auto *f = report.verdict.margin("floor_post")) {
        report.boundaries.floor_post = f->threshold;
    }
    report.boundaries.ng_post = report.verdict.margin("ng_post")->threshold;
    report.boundaries.nc_post = report.verdict.margin("nc_post")->threshold;
    return report;
}

namespace {

nlohmann::json estimate_json(const EstimateWithCi &e) {
    return {{"value", e.value}, {"ci", {e.ci.lo, e.ci.hi}}, {"se", e.se}};
}

nlohmann::json verdict_json(const WitnessVerdict &v) {
    nlohmann::json margins = nlohmann::json::array();
    for (const auto &m : v.margins) {
        margins.push_back({{"boundary", m.boundary}, {"threshold", m.threshold}, {"margin", m.margin},
                           {"sigma", m.sigma}});
    }
    return {{"category", std::string(to_string(v.category))},
            {"confidence_note", v.confidence_note},
            {"margins", margins}};
}

nlohmann::json provenance_json(const RecordProvenance &p) {
    nlohmann::json out = {{"n_pulses", p.n_pulses}, {"conditioned", p.conditioned}, {"meta", p.meta}};
    out["sha256"] = p.sha256 ? nlohmann::json(*p.sha256) : nlohmann::json(nullptr);
    return out;
}

}  // namespace

std::string to_json(const AnalysisReport &report) {
    nlohmann::json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["mu_rel"] = estimate_json(report.mu_rel);
    doc["g2"] = estimate_json(report.g2);
    doc["uncertainty_method"] =
        "bootstrap percentile interval over joint resampling of signal and vacuum records; se is the bootstrap "
        "standard deviation";
    doc["verdict"] = verdict_json(report.verdict);
    nlohmann::json bounds = {{"mu_rel", report.boundaries.mu_rel},
                             {"ng_post", report.boundaries.ng_post},
                             {"nc_post", report.boundaries.nc_post}};
    bounds["floor_post"] =
        report.boundaries.floor_post ? nlohmann::json(*report.boundaries.floor_post) : nlohmann::json(nullptr);
    doc["boundaries"] = bounds;
    nlohmann::json inputs = {{"signal", provenance_json(report.signal)},
                             {"vacuum", provenance_json(report.vacuum)},
                             {"seed", report.seed},
                             {"resamples", report.resamples},
                             {"level", report.level}};
    inputs["gain"] = report.gain ? nlohmann::json(*report.gain) : nlohmann::json(nullptr);
    doc["inputs"] = inputs;
    return doc.dump(2);
}

std::vector<SweepRow> sweep_brightness(const HeraldedSourceConfig &base, std::span<const double> brightness,
                                       double extra_loss, const GainSetting &gain, const SweepOptions &options) {
    if (brightness.empty()) {
        throw ValidationError("sweep_brightness: empty brightness list");
    }
    if (!(extra_loss > 0 && extra_loss <= 1)) {
        throw DomainError("sweep_brightness: extra_loss transmittance must lie in (0, 1]");
    }
    validate(options.hbt);
    std::vector<HeraldedSourceConfig> configs;
    for (double b : brightness) {
        HeraldedSourceConfig cfg = base;
        cfg.mean_pairs = b;
        validate(cfg);
        configs.push_back(cfg);
    }

    std::vector<SweepRow> rows(brightness.size());
    parallel_for(brightness.size(), [&](size_t i) {
        auto herald = heralded_spdc(configs[i]);
        auto dist = apply_loss(herald.dist, extra_loss);
        SweepRow &row = rows[i];
        row.brightness = brightness[i];
        row.herald_probability = herald.herald_probability;
        if (options.mode == SweepMode::Analytic) {
            row.p0 = dist.p0();
            row.p1 = dist.p1();
            row.p2plus = dist.p2plus();
            auto am = asymptotic_moments(moments(dist));
            row.mu_rel = am.mu_rel;
            row.g2 = am.g2_post;
        } else {
            uint64_t seed = options.seed;
            auto signal = sample_pulses(dist, gain, options.n_pulses, 1.0, derive_seed(seed, 4 * i));
            auto vacuum = sample_pulses(make_vacuum(), gain, options.n_pulses, 1.0, derive_seed(seed, 4 * i + 1));
            AnalysisOptions ao;
            ao.bootstrap.resamples = options.resamples;
            ao.bootstrap.seed = derive_seed(seed, 4 * i + 2);
            auto report = analyze(signal, vacuum, ao);
            row.mu_rel = report.mu_rel.value;
            row.g2 = report.g2.value;
            row.sigma_mu_rel = report.mu_rel.se;
            row.sigma_g2 = report.g2.se;
            auto clicks = simulate_clicks(dist, options.hbt, options.n_pulses, derive_seed(seed, 4 * i + 3));
            auto inferred = infer_probabilities(clicks, options.hbt);
            row.p0 = inferred.p0;
            row.p1 = inferred.p1;
            row.p2plus = inferred.p2plus;
            row.sigma_p0 = inferred.sigma_p0;
            row.sigma_p1 = inferred.sigma_p1;
        }
        row.probability_verdict = classify_probabilities(std::clamp(row.p0, 0.0, 1.0), std::clamp(row.p1, 0.0, 1.0),
                                                         row.sigma_p0, row.sigma_p1);
        row.moment_verdict =
            classify_moments(std::max(row.mu_rel, 1.0), row.g2, row.sigma_mu_rel, row.sigma_g2);
    });
    return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "brightness,herald_probability,p0,p1,p2plus,sigma_p0,sigma_p1,mu_rel,g2,sigma_mu_rel,sigma_g2,"
           "probability_verdict,ng_pre_margin,moment_verdict,ng_post_margin,nc_post_margin\n";
    for (const auto &r : rows) {
        out << format_double(r.brightness) << "," << format_double(r.herald_probability) << ","
            << format_double(r.p0) << "," << format_double(r.p1) << "," << format_double(r.p2plus) << ","
            << format_double(r.sigma_p0) << "," << format_double(r.sigma_p1) << "," << format_double(r.mu_rel)
            << "," << format_double(r.g2) << "," << format_double(r.sigma_mu_rel) << ","
            << format_double(r.sigma_g2) << "," << to_string(r.probability_verdict.category) << ","
            << format_double(r.probability_verdict.margin("ng_pre_p0p1")->margin) << ","
            << to_string(r.moment_verdict.category) << ","
            << format_double(r.moment_verdict.margin("ng_post")->margin) << ","
            << format_double(r.moment_verdict.margin("nc_post")->margin) << "\n";
    }
    return out.str();
}

SweepConfig parse_sweep_config(const std::string &json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("sweep config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("sweep config must be a JSON object");
    }
    static const char *known[] = {"source", "brightness", "extra_loss", "gain", "mode", "pulses", "seed", "resamples"};
    for (const auto &[key, value] : doc.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw ValidationError("sweep config: unknown key '" + key + "'");
        }
    }
    SweepConfig cfg;
    try {
        if (doc.contains("source")) {
            cfg.source = parse_heralded_source_config(doc["source"].dump());
        }
        if (!doc.contains("brightness") || !doc["brightness"].is_array()) {
            throw ValidationError("sweep config: 'brightness' array is required");
        }
        cfg.brightness = doc["brightness"].get<std::vector<double>>();
        cfg.extra_loss = doc.value("extra_loss", 1.0);
        cfg.gain = doc.value("gain", kDefaultGain);
        std::string mode = doc.value("mode", std::string("analytic"));
        if (mode == "analytic") {
            cfg.options.mode = SweepMode::Analytic;
        } else if (mode == "monte_carlo") {
            cfg.options.mode = SweepMode::MonteCarlo;
        } else {
            throw ValidationError("sweep config: mode must be 'analytic' or 'monte_carlo', got '" + mode + "'");
        }
        cfg.options.n_pulses = doc.value("pulses", cfg.options.n_pulses);
        cfg.options.seed = doc.value("seed", cfg.options.seed);
        cfg.options.resamples = doc.value("resamples", cfg.options.resamples);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("sweep config: ") + e.what());
    }
    if (cfg.brightness.empty()) {
        throw ValidationError("sweep config: 'brightness' must not be empty");
    }
    return cfg;
}

std::vector<PreampRow> preamp_comparison(std::span<const PostPoint> points_post,
                                         std::span<const ProbabilityTriple> points_prob, double eta,
                                         double tolerance) {
    std::vector<PreampRow> rows;
    auto finish = [&](PreampRow row, bool negative_input) {
        row.flagged = negative_input || row.s2 < -tolerance || row.m < -tolerance;
        if (row.m >= 0) {
            row.ng_bound = ng_bound_moments(row.m);
        }
        row.nc_bound = nc_bound_moments(row.m);
        rows.push_back(row);
    };
    for (const auto &p : points_post) {
        PreampRow row;
        row.source = PreampRow::Source::Post;
        row.m = (p.mu_rel - 1) / 2;
        row.s2 = ((p.g2 - 1) * p.mu_rel * p.mu_rel / 2 - 1 - row.m - row.m * row.m) / 3;
        finish(row, false);
    }
    for (const auto &p : points_prob) {
        auto c = correct_loss(p.p0, p.p1, p.p2plus, eta);
        PreampRow row;
        row.source = PreampRow::Source::Probability;
        row.m = c.p1 + 2 * c.p2plus;
        row.s2 = c.p1 + 4 * c.p2plus - row.m * row.m;
        finish(row, c.p0 < -tolerance || c.p1 < -tolerance || c.p2plus < -tolerance);
    }
    return rows;
}

std::string preamp_to_csv(std::span<const PreampRow> rows) {
    std::ostringstream out;
    out << "source,m,s2,ng_bound,nc_bound,flagged\n";
    for (const auto &r : rows) {
        out << (r.source == PreampRow::Source::Post ? "post" : "probability") << "," << format_double(r.m) << ","
            << format_double(r.s2) << "," << (r.ng_bound ? format_double(*r.ng_bound) : "") << ","
            << format_double(r.nc_bound) << "," << (r.flagged ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace ampwit
