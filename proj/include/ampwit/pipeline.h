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

#ifndef AMPWIT_PIPELINE_H
#define AMPWIT_PIPELINE_H

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ampwit/fock_core.h"
#include "ampwit/hbt.h"
#include "ampwit/opa.h"
#include "ampwit/state_models.h"
#include "ampwit/witnesses.h"

namespace ampwit {

inline constexpr int kReportSchemaVersion = 1;

/// Reads a pulse CSV; with `conditioned` only herald=1 rows are kept
/// (the file must then carry a herald column).
PulseRecordSet ingest_pulse_csv(const std::string &path, bool conditioned = false);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string &path);

struct AnalysisOptions {
    BootstrapOptions bootstrap;
    std::optional<double> gain;
};

struct RecordProvenance {
    std::string label;
    std::optional<std::string> sha256;
    size_t n_pulses = 0;
    bool conditioned = false;
    std::map<std::string, std::string> meta;
};

struct EstimateWithCi {
    double value = 0;
    Interval ci;
    /// Bootstrap standard deviation.
    double se = 0;
};

/// Thresholds in force at the measured mu_rel (floor only below 5).
struct BoundarySamples {
    double mu_rel = 1;
    std::optional<double> floor_post;
    double ng_post = 3;
    double nc_post = 3;
};

struct AnalysisReport {
    EstimateWithCi mu_rel;
    /// Intensity correlation 1 + var / mean^2 of the signal records.
    EstimateWithCi g2;
    WitnessVerdict verdict;
    BoundarySamples boundaries;
    RecordProvenance signal;
    RecordProvenance vacuum;
    uint64_t seed = 0;
    size_t resamples = 0;
    double level = 0;
    std::optional<double> gain;
};

/// mu_rel = mean(signal) / mean(vacuum); g2 from the signal; percentile CIs
/// from resampling both sets jointly. A mu_rel below 1 but within 3 standard
/// errors of it is classified at mu_rel = 1; further below is a DomainError.
AnalysisReport analyze(const PulseRecordSet &signal, const PulseRecordSet &vacuum,
                       const AnalysisOptions &options = {});

std::string to_json(const AnalysisReport &report);

enum class SweepMode { Analytic, MonteCarlo };

struct SweepOptions {
    SweepMode mode = SweepMode::Analytic;
    size_t n_pulses = 35000;
    uint64_t seed = 0;
    /// Bootstrap resamples per Monte-Carlo point.
    size_t resamples = 200;
    HbtConfig hbt;
};

struct SweepRow {
    double brightness = 0;
    double herald_probability = 0;
    double p0 = 0;
    double p1 = 0;
    double p2plus = 0;
    double sigma_p0 = 0;
    double sigma_p1 = 0;
    double mu_rel = 1;
    double g2 = 3;
    double sigma_mu_rel = 0;
    double sigma_g2 = 0;
    WitnessVerdict probability_verdict;
    WitnessVerdict moment_verdict;
};

/// One row per brightness (mean pair number): the heralded state after
/// eta_signal and a further transmittance extra_loss, its (p0, p1, p2+)
/// and (mu_rel, g2), and both verdicts. Monte-Carlo mode replaces the exact
/// values with HBT click inference and sampled pulse records.
std::vector<SweepRow> sweep_brightness(const HeraldedSourceConfig &base, std::span<const double> brightness,
                                       double extra_loss, const GainSetting &gain, const SweepOptions &options = {});

std::string sweep_to_csv(std::span<const SweepRow> rows);

struct SweepConfig {
    HeraldedSourceConfig source;
    std::vector<double> brightness;
    double extra_loss = 1;
    double gain = kDefaultGain;
    SweepOptions options;
};

/// {"source": {...}, "brightness": [...], "extra_loss": 1, "gain": 6.5,
///  "mode": "analytic" | "monte_carlo", "pulses": 35000, "seed": 0,
///  "resamples": 200}
SweepConfig parse_sweep_config(const std::string &json_text);

struct PreampRow {
    enum class Source { Post, Probability };
    Source source = Source::Post;
    double m = 0;
    double s2 = 0;
    std::optional<double> ng_bound;
    double nc_bound = 0;
    /// s2 (or m) negative beyond tolerance.
    bool flagged = false;
};

struct ProbabilityTriple {
    double p0;
    double p1;
    double p2plus;
};

/// Maps post-amplification points back through the asymptotic map and
/// loss-corrects probability points by eta before taking (m, s2) directly
/// (p2+ counted as two photons).
std::vector<PreampRow> preamp_comparison(std::span<const PostPoint> points_post,
                                         std::span<const ProbabilityTriple> points_prob, double eta,
                                         double tolerance = 1e-9);

std::string preamp_to_csv(std::span<const PreampRow> rows);

}  // namespace ampwit

#endif
