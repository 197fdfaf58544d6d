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

#include "ampwit/cli.h"

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ampwit/errors.h"
#include "ampwit/hbt.h"
#include "ampwit/io.h"
#include "ampwit/opa.h"
#include "ampwit/pipeline.h"
#include "ampwit/state_models.h"
#include "ampwit/witnesses.h"
#include "json.hpp"

namespace ampwit {

namespace {

using nlohmann::json;

struct StateSpec {
    std::string kind = "vacuum";
    size_t n = 1;
    double mean = 0.1;
    size_t n_max = 0;
    std::string dist_path;
    double transmittance = 1;
    HeraldedSourceConfig source;
};

void add_state_options(CLI::App *cmd, StateSpec &spec) {
    cmd->add_option("--state", spec.kind, "State family")
        ->check(CLI::IsMember({"vacuum", "fock", "thermal", "coherent", "heralded", "file"}))
        ->capture_default_str();
    cmd->add_option("--n", spec.n, "Photon number for --state fock")->capture_default_str();
    cmd->add_option("--mean", spec.mean, "Mean photon number for thermal / coherent")->capture_default_str();
    cmd->add_option("--n-max", spec.n_max, "Truncation order (0 = automatic)")->capture_default_str();
    cmd->add_option("--dist", spec.dist_path, "JSON file {\"probs\": [...]} for --state file");
    cmd->add_option("--transmittance", spec.transmittance, "Binomial loss applied last")->capture_default_str();
    cmd->add_option("--brightness", spec.source.mean_pairs, "Mean pair number for --state heralded")
        ->capture_default_str();
    cmd->add_option("--eta-signal", spec.source.eta_signal, "Signal-arm transmittance")->capture_default_str();
    cmd->add_option("--eta-idler", spec.source.eta_idler, "Herald-arm detection efficiency")->capture_default_str();
    cmd->add_option("--dark-count", spec.source.dark_count, "Herald dark-click probability")->capture_default_str();
}

PhotonNumberDistribution build_state(const StateSpec &spec) {
    std::optional<size_t> n_max;
    if (spec.n_max > 0) {
        n_max = spec.n_max;
    }
    PhotonNumberDistribution dist;
    if (spec.kind == "vacuum") {
        dist = make_vacuum();
    } else if (spec.kind == "fock") {
        dist = make_fock(spec.n);
    } else if (spec.kind == "thermal") {
        dist = make_thermal(spec.mean, n_max);
    } else if (spec.kind == "coherent") {
        dist = make_coherent(spec.mean, n_max);
    } else if (spec.kind == "heralded") {
        dist = heralded_spdc(spec.source).dist;
    } else {
        if (spec.dist_path.empty()) {
            throw ValidationError("--state file needs --dist");
        }
        dist = parse_distribution_json(read_text_file(spec.dist_path));
        require_valid(dist);
    }
    if (spec.transmittance != 1) {
        dist = apply_loss(dist, spec.transmittance);
    }
    return dist;
}

json optional_json(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

json verdict_to_json(const WitnessVerdict &v) {
    json margins = json::array();
    for (const auto &m : v.margins) {
        margins.push_back({{"boundary", m.boundary}, {"threshold", m.threshold}, {"margin", m.margin},
                           {"sigma", m.sigma}});
    }
    return {{"category", std::string(to_string(v.category))},
            {"confidence_note", v.confidence_note},
            {"margins", margins}};
}

/// Flat key/value record printed as a JSON object or a one-row CSV.
void emit_record(std::ostream &out, const std::string &format, const json &record) {
    if (format == "json") {
        out << record.dump(2) << "\n";
        return;
    }
    std::string header;
    std::string row;
    for (const auto &[key, value] : record.items()) {
        if (!header.empty()) {
            header += ",";
            row += ",";
        }
        header += key;
        if (value.is_number_float()) {
            row += format_double(value.get<double>());
        } else if (value.is_string()) {
            row += value.get<std::string>();
        } else if (value.is_null()) {
        } else {
            row += value.dump();
        }
    }
    out << header << "\n" << row << "\n";
}

class OutputTarget {
   public:
    OutputTarget(const std::string &path, std::ostream &fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw ValidationError("cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream &stream() {
        return file_.is_open() ? file_ : fallback_;
    }

   private:
    std::ofstream file_;
    std::ostream &fallback_;
};

std::string version_text() {
    std::ostringstream out;
    out << "ampwit " << kVersion << "\n";
    out << "ng_table_points=" << kNgTablePoints << "\n";
    out << "ng_table_max_squeezing=" << format_double(kNgTableMaxSqueezing) << "\n";
    out << "inversion_max_squeezing=" << format_double(kInversionMaxSqueezing) << "\n";
    out << "inversion_tolerance=" << format_double(kInversionTolerance) << "\n";
    out << "boundary_tolerance=" << format_double(kBoundaryTolerance) << "\n";
    out << "normalization_tolerance=" << format_double(kNormalizationTolerance) << "\n";
    out << "truncation_tail=" << format_double(kTruncationTail) << "\n";
    out << "intensity_grid_points=" << IntensityGridSpec{}.points << "\n";
    return out.str();
}

}  // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Photon-number statistics before and after phase-sensitive amplification, with "
                 "non-classicality and non-Gaussianity witnesses.",
                 "ampwit"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    uint64_t seed = 0;
    double gain_value = kDefaultGain;
    std::string format;
    bool show_version = false;
    app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
    auto *gain_opt = app.add_option("--gain", gain_value, "Parametric gain G")->capture_default_str();
    app.add_option("--format", format, "Output format (default depends on the subcommand)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--version", show_version, "Print version and table resolution constants");

    // simulate-state
    StateSpec sim_state;
    auto *sim = app.add_subcommand("simulate-state", "Print a photon-number distribution");
    add_state_options(sim, sim_state);

    // amplify
    StateSpec amp_state;
    bool amp_intensity = false;
    IntensityGridSpec amp_grid;
    std::string amp_out;
    auto *amp = app.add_subcommand("amplify", "Asymptotic post-amplification moments or intensity distribution");
    add_state_options(amp, amp_state);
    amp->add_flag("--intensity", amp_intensity, "Emit the intensity distribution N,density instead of moments");
    amp->add_option("--points", amp_grid.points, "Intensity grid points")->capture_default_str();
    amp->add_option("--out", amp_out, "Output file (default stdout)");

    // sample
    StateSpec sample_state;
    size_t sample_pulses_n = 35000;
    double sample_scale = 1;
    std::string sample_out;
    auto *smp = app.add_subcommand("sample", "Simulate amplified pulse records as CSV");
    add_state_options(smp, sample_state);
    smp->add_option("--pulses", sample_pulses_n, "Number of pulses")->capture_default_str();
    smp->add_option("--detection-scale", sample_scale, "Linear detection efficiency in (0, 1]")
        ->capture_default_str();
    smp->add_option("--out", sample_out, "Output file (default stdout)");

    // hbt-infer
    ClickStatistics hbt_stats;
    HbtConfig hbt_cfg;
    std::optional<double> hbt_tprime;
    auto *hbt = app.add_subcommand("hbt-infer", "Infer p0, p1, p2+ from HBT click probabilities");
    hbt->add_option("--q1", hbt_stats.Q1, "Probability that exactly one detector clicks")->required();
    hbt->add_option("--q2", hbt_stats.Q2, "Probability that both detectors click")->required();
    hbt->add_option("--t", hbt_cfg.T, "Beam-splitter transmittance")->capture_default_str();
    hbt->add_option("--pa", hbt_cfg.pA, "Detector A efficiency")->capture_default_str();
    hbt->add_option("--pb", hbt_cfg.pB, "Detector B efficiency")->capture_default_str();
    hbt->add_option("--pulses", hbt_stats.n_pulses, "Pulse count behind Q1, Q2 (enables standard errors)");
    hbt->add_option("--tprime", hbt_tprime, "Known transmittance before the beam splitter to correct for");

    // witness
    std::optional<double> w_mu, w_g2, w_p0, w_p1;
    double w_sigma_mu = 0, w_sigma_g2 = 0, w_sigma_p0 = 0, w_sigma_p1 = 0;
    auto *wit = app.add_subcommand("witness", "Classify a (mu_rel, g2) or (p0, p1) point");
    auto *o_mu = wit->add_option("--mu-rel", w_mu, "Relative post-amplification mean");
    auto *o_g2 = wit->add_option("--g2", w_g2, "Post-amplification g2");
    auto *o_p0 = wit->add_option("--p0", w_p0, "Vacuum probability");
    auto *o_p1 = wit->add_option("--p1", w_p1, "Single-photon probability");
    o_mu->needs(o_g2);
    o_g2->needs(o_mu);
    o_p0->needs(o_p1);
    o_p1->needs(o_p0);
    o_mu->excludes(o_p0);
    o_p0->excludes(o_mu);
    wit->add_option("--sigma-mu", w_sigma_mu, "Standard error of mu_rel")->capture_default_str();
    wit->add_option("--sigma-g2", w_sigma_g2, "Standard error of g2")->capture_default_str();
    wit->add_option("--sigma-p0", w_sigma_p0, "Standard error of p0")->capture_default_str();
    wit->add_option("--sigma-p1", w_sigma_p1, "Standard error of p1")->capture_default_str();

    // curves
    std::string c_kind = "all";
    double c_r_max = 5;
    size_t c_points = 1000;
    std::string c_out;
    auto *crv = app.add_subcommand("curves", "Tabulate witness boundaries as param,x,y CSV");
    crv->add_option("--kind", c_kind, "Curve name, short form, or 'all'")->capture_default_str();
    crv->add_option("--r-max", c_r_max, "Largest squeezing parameter")->capture_default_str();
    crv->add_option("--points", c_points, "Rows per curve")->capture_default_str();
    crv->add_option("--out", c_out, "Output file (default stdout)");

    // analyze
    std::string a_signal, a_vacuum, a_out;
    bool a_conditioned = false;
    BootstrapOptions a_boot;
    auto *ana = app.add_subcommand("analyze", "Estimate (mu_rel, g2) from pulse CSVs and classify");
    ana->add_option("--signal", a_signal, "Signal pulse CSV")->required()->check(CLI::ExistingFile);
    ana->add_option("--vacuum", a_vacuum, "Amplified-vacuum pulse CSV")->required()->check(CLI::ExistingFile);
    ana->add_option("--out", a_out, "Report file (default stdout)");
    ana->add_flag("--conditioned", a_conditioned, "Keep only herald=1 signal rows");
    ana->add_option("--resamples", a_boot.resamples, "Bootstrap resamples")->capture_default_str();
    ana->add_option("--level", a_boot.level, "Central interval level")->capture_default_str();

    // sweep
    std::string s_config, s_out;
    auto *swp = app.add_subcommand("sweep", "Brightness sweep of the heralded source");
    swp->add_option("--config", s_config, "Sweep JSON config")->required()->check(CLI::ExistingFile);
    swp->add_option("--out", s_out, "Output file (default stdout)");

    std::vector<const char *> argv;
    argv.push_back("ampwit");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "ampwit: error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (show_version) {
            out << version_text();
            return kExitOk;
        }
        GainSetting gain(gain_value);
        auto fmt = [&](const char *fallback) { return format.empty() ? std::string(fallback) : format; };

        if (sim->parsed()) {
            auto dist = build_state(sim_state);
            auto ms = moments(dist);
            if (fmt("json") == "json") {
                json doc = {{"probs", std::vector<double>(dist.probs().begin(), dist.probs().end())},
                            {"p0", dist.p0()},
                            {"p1", dist.p1()},
                            {"p2plus", dist.p2plus()},
                            {"m", ms.m},
                            {"s2", ms.s2},
                            {"g2_pre", optional_json(ms.g2_pre)}};
                out << doc.dump(2) << "\n";
            } else {
                out << "n,probability\n";
                for (size_t n = 0; n < dist.size(); n++) {
                    out << n << "," << format_double(dist[n]) << "\n";
                }
            }
        } else if (amp->parsed()) {
            auto dist = build_state(amp_state);
            OutputTarget target(amp_out, out);
            if (amp_intensity) {
                auto id = intensity_distribution(dist, gain, amp_grid);
                if (fmt("csv") == "json") {
                    json doc = {{"gain", id.gain}, {"N", id.grid}, {"density", id.density}};
                    target.stream() << doc.dump() << "\n";
                } else {
                    write_intensity_csv(target.stream(), id);
                }
            } else {
                auto ms = moments(dist);
                auto am = asymptotic_moments(ms);
                json doc = {{"m", ms.m},
                            {"s2", ms.s2},
                            {"mu_rel", am.mu_rel},
                            {"sigma2_rel", am.sigma2_rel},
                            {"g2", am.g2_post},
                            {"gain", gain.value()},
                            {"mean_photons", amplified_mean(ms.m, gain)}};
                emit_record(target.stream(), fmt("json"), doc);
            }
        } else if (smp->parsed()) {
            auto dist = build_state(sample_state);
            auto records = sample_pulses(dist, gain, sample_pulses_n, sample_scale, seed);
            records.meta["state"] = sample_state.kind;
            OutputTarget target(sample_out, out);
            if (fmt("csv") == "json") {
                json doc = {{"meta", records.meta}, {"counts", records.counts}};
                target.stream() << doc.dump() << "\n";
            } else {
                write_pulse_csv(target.stream(), records);
            }
        } else if (hbt->parsed()) {
            validate(hbt_cfg);
            auto inferred = infer_probabilities(hbt_stats, hbt_cfg);
            json doc;
            if (hbt_tprime) {
                auto c = correct_loss(inferred.p0, inferred.p1, inferred.p2plus, *hbt_tprime);
                doc = {{"p0", c.p0}, {"p1", c.p1}, {"p2plus", c.p2plus}};
                doc["uncorrected_p0"] = inferred.p0;
                doc["uncorrected_p1"] = inferred.p1;
                doc["uncorrected_p2plus"] = inferred.p2plus;
                doc["physical"] = c.p0 >= 0 && c.p0 <= 1 && c.p1 >= 0 && c.p1 <= 1 && c.p2plus >= 0 &&
                                  c.p2plus <= 1;
            } else {
                doc = {{"p0", inferred.p0}, {"p1", inferred.p1}, {"p2plus", inferred.p2plus}};
                doc["physical"] = inferred.physical;
            }
            if (hbt_stats.n_pulses > 0) {
                doc["sigma_p0"] = inferred.sigma_p0;
                doc["sigma_p1"] = inferred.sigma_p1;
                doc["sigma_p2plus"] = inferred.sigma_p2plus;
            }
            if (fmt("json") == "json") {
                doc["warnings"] = inferred.warnings;
                out << doc.dump(2) << "\n";
            } else {
                emit_record(out, "csv", doc);
            }
        } else if (wit->parsed()) {
            WitnessVerdict verdict;
            json input;
            if (w_mu) {
                verdict = classify_moments(*w_mu, *w_g2, w_sigma_mu, w_sigma_g2);
                input = {{"mu_rel", *w_mu}, {"g2", *w_g2}, {"sigma_mu", w_sigma_mu}, {"sigma_g2", w_sigma_g2}};
            } else if (w_p0) {
                verdict = classify_probabilities(*w_p0, *w_p1, w_sigma_p0, w_sigma_p1);
                input = {{"p0", *w_p0}, {"p1", *w_p1}, {"sigma_p0", w_sigma_p0}, {"sigma_p1", w_sigma_p1}};
            } else {
                throw ValidationError("witness needs either --mu-rel/--g2 or --p0/--p1");
            }
            if (fmt("json") == "json") {
                json doc = verdict_to_json(verdict);
                doc["input"] = input;
                out << doc.dump(2) << "\n";
            } else {
                out << "# category=" << to_string(verdict.category) << "\n";
                out << "boundary,threshold,margin,sigma\n";
                for (const auto &m : verdict.margins) {
                    out << m.boundary << "," << format_double(m.threshold) << "," << format_double(m.margin) << ","
                        << format_double(m.sigma) << "\n";
                }
            }
        } else if (crv->parsed()) {
            std::vector<CurveKind> kinds;
            if (c_kind == "all") {
                kinds.assign(std::begin(kAllCurveKinds), std::end(kAllCurveKinds));
            } else if (auto k = parse_curve_kind(c_kind)) {
                kinds.push_back(*k);
            } else {
                throw ValidationError("unknown or ambiguous curve kind '" + c_kind + "'");
            }
            OutputTarget target(c_out, out);
            json all = json::array();
            for (auto kind : kinds) {
                auto curve = tabulate_curve(kind, c_r_max, c_points);
                if (fmt("csv") == "json") {
                    all.push_back({{"kind", std::string(to_string(kind))},
                                   {"param", curve.parameter},
                                   {"x", curve.x},
                                   {"y", curve.y}});
                } else {
                    write_curve_csv(target.stream(), curve);
                }
            }
            if (fmt("csv") == "json") {
                target.stream() << all.dump() << "\n";
            }
        } else if (ana->parsed()) {
            auto signal = ingest_pulse_csv(a_signal, a_conditioned);
            auto vacuum = ingest_pulse_csv(a_vacuum, false);
            AnalysisOptions opts;
            opts.bootstrap = a_boot;
            opts.bootstrap.seed = seed;
            opts.gain = gain.value();
            auto report = analyze(signal, vacuum, opts);
            report.signal.sha256 = sha256_file(a_signal);
            report.signal.conditioned = a_conditioned;
            report.vacuum.sha256 = sha256_file(a_vacuum);
            OutputTarget target(a_out, out);
            if (fmt("json") == "json") {
                target.stream() << to_json(report) << "\n";
            } else {
                json row = {{"mu_rel", report.mu_rel.value},
                            {"mu_rel_lo", report.mu_rel.ci.lo},
                            {"mu_rel_hi", report.mu_rel.ci.hi},
                            {"g2", report.g2.value},
                            {"g2_lo", report.g2.ci.lo},
                            {"g2_hi", report.g2.ci.hi},
                            {"verdict", std::string(to_string(report.verdict.category))}};
                emit_record(target.stream(), "csv", row);
            }
        } else if (swp->parsed()) {
            auto cfg = parse_sweep_config(read_text_file(s_config));
            if (gain_opt->count() > 0) {
                cfg.gain = gain_value;
            }
            if (app.get_option("--seed")->count() > 0) {
                cfg.options.seed = seed;
            }
            auto rows = sweep_brightness(cfg.source, cfg.brightness, cfg.extra_loss, GainSetting(cfg.gain),
                                         cfg.options);
            OutputTarget target(s_out, out);
            if (fmt("csv") == "json") {
                json doc = json::array();
                for (const auto &r : rows) {
                    doc.push_back({{"brightness", r.brightness},
                                   {"herald_probability", r.herald_probability},
                                   {"p0", r.p0},
                                   {"p1", r.p1},
                                   {"p2plus", r.p2plus},
                                   {"sigma_p0", r.sigma_p0},
                                   {"sigma_p1", r.sigma_p1},
                                   {"mu_rel", r.mu_rel},
                                   {"g2", r.g2},
                                   {"sigma_mu_rel", r.sigma_mu_rel},
                                   {"sigma_g2", r.sigma_g2},
                                   {"probability_verdict", verdict_to_json(r.probability_verdict)},
                                   {"moment_verdict", verdict_to_json(r.moment_verdict)}});
                }
                target.stream() << doc.dump(2) << "\n";
            } else {
                target.stream() << sweep_to_csv(rows);
            }
        } else {
            out << app.help();
        }
        return kExitOk;
    } catch (const ValidationError &e) {
        err << "ampwit: error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError &e) {
        err << "ampwit: error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception &e) {
        err << "ampwit: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace ampwit
