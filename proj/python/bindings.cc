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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ampwit/cli.h"
#include "ampwit/errors.h"
#include "ampwit/hbt.h"
#include "ampwit/opa.h"
#include "ampwit/pipeline.h"
#include "ampwit/state_models.h"
#include "ampwit/witnesses.h"

namespace py = pybind11;
using namespace ampwit;

namespace {

py::dict verdict_dict(const WitnessVerdict &v) {
    py::list margins;
    for (const auto &m : v.margins) {
        py::dict d;
        d["boundary"] = m.boundary;
        d["threshold"] = m.threshold;
        d["margin"] = m.margin;
        d["sigma"] = m.sigma;
        margins.append(d);
    }
    py::dict out;
    out["category"] = std::string(to_string(v.category));
    out["confidence_note"] = v.confidence_note;
    out["margins"] = margins;
    return out;
}

PulseRecordSet records_from(const std::vector<double> &counts) {
    PulseRecordSet r;
    r.counts = counts;
    return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ampwit native core";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);

    py::class_<PhotonNumberDistribution>(m, "PhotonNumberDistribution")
        .def(py::init<std::vector<double>>(), py::arg("probs"))
        .def_property_readonly("probs",
                               [](const PhotonNumberDistribution &d) {
                                   return std::vector<double>(d.probs().begin(), d.probs().end());
                               })
        .def_property_readonly("n_max", &PhotonNumberDistribution::n_max)
        .def_property_readonly("p0", &PhotonNumberDistribution::p0)
        .def_property_readonly("p1", &PhotonNumberDistribution::p1)
        .def_property_readonly("p2plus", &PhotonNumberDistribution::p2plus)
        .def("__len__", &PhotonNumberDistribution::size)
        .def("__getitem__", &PhotonNumberDistribution::operator[]);

    m.def("validate", [](const PhotonNumberDistribution &d) {
        auto r = validate(d);
        return py::make_tuple(r.ok, r.message);
    });
    m.def("moments", [](const PhotonNumberDistribution &d) {
        auto ms = moments(d);
        py::dict out;
        out["m"] = ms.m;
        out["s2"] = ms.s2;
        out["g2_pre"] = ms.g2_pre ? py::cast(*ms.g2_pre) : py::none();
        return out;
    });

    m.def("make_vacuum", &make_vacuum);
    m.def("make_fock", &make_fock, py::arg("n"));
    m.def("make_thermal", &make_thermal, py::arg("mean"), py::arg("n_max") = py::none());
    m.def("make_coherent", &make_coherent, py::arg("mean"), py::arg("n_max") = py::none());
    m.def("apply_loss", &apply_loss, py::arg("dist"), py::arg("eta"));
    m.def(
        "mix",
        [](const std::vector<double> &w, const std::vector<PhotonNumberDistribution> &d) { return mix(w, d); },
        py::arg("weights"), py::arg("dists"));
    m.def(
        "heralded_spdc",
        [](double mean_pairs, double eta_signal, double eta_idler, double dark_count) {
            HeraldedSourceConfig cfg{mean_pairs, eta_signal, eta_idler, dark_count};
            return heralded_spdc(cfg).dist;
        },
        py::arg("mean_pairs"), py::arg("eta_signal") = 0.51, py::arg("eta_idler") = HeraldedSourceConfig{}.eta_idler,
        py::arg("dark_count") = 0.0);

    m.def(
        "asymptotic_moments",
        [](double mm, double s2) {
            auto a = asymptotic_moments(make_moment_summary(mm, s2));
            return py::make_tuple(a.mu_rel, a.sigma2_rel, a.g2_post);
        },
        py::arg("m"), py::arg("s2"));
    m.def(
        "sample_pulses",
        [](const PhotonNumberDistribution &d, double gain, size_t n, double scale, uint64_t seed) {
            return sample_pulses(d, GainSetting(gain), n, scale, seed).counts;
        },
        py::arg("dist"), py::arg("gain") = kDefaultGain, py::arg("n_pulses") = 35000, py::arg("detection_scale") = 1.0,
        py::arg("seed") = 0);
    m.def(
        "estimate_moments",
        [](const std::vector<double> &counts, size_t resamples, uint64_t seed) {
            BootstrapOptions opts;
            opts.resamples = resamples;
            opts.seed = seed;
            auto e = estimate_moments(records_from(counts), opts);
            py::dict out;
            out["mean"] = e.mean;
            out["variance"] = e.variance;
            out["g2"] = e.g2;
            out["g2_ci"] = py::make_tuple(e.g2_ci.lo, e.g2_ci.hi);
            out["g2_se"] = e.g2_se;
            return out;
        },
        py::arg("counts"), py::arg("resamples") = 1000, py::arg("seed") = 0);
    m.def(
        "analyze_json",
        [](const std::vector<double> &signal, const std::vector<double> &vacuum, size_t resamples, uint64_t seed) {
            AnalysisOptions opts;
            opts.bootstrap.resamples = resamples;
            opts.bootstrap.seed = seed;
            return to_json(analyze(records_from(signal), records_from(vacuum), opts));
        },
        py::arg("signal"), py::arg("vacuum"), py::arg("resamples") = 1000, py::arg("seed") = 0);

    m.def("ng_curve_pre", [](double r) {
        auto p = ng_curve_pre(r);
        return py::make_tuple(p.p0, p.p1);
    });
    m.def("nc_bound_pre", &nc_bound_pre);
    m.def("ng_curve_post", [](double r) {
        auto p = ng_curve_post(r);
        return py::make_tuple(p.mu_rel, p.g2);
    });
    m.def("invert_ng_mu_rel", &invert_ng_mu_rel);
    m.def("ng_bound_post", &ng_bound_post);
    m.def("nc_bound_post", &nc_bound_post);
    m.def("floor_post", &floor_post);
    m.def("ng_bound_moments", &ng_bound_moments);
    m.def(
        "classify_moments",
        [](double mu, double g2, double smu, double sg2) { return verdict_dict(classify_moments(mu, g2, smu, sg2)); },
        py::arg("mu_rel"), py::arg("g2"), py::arg("sigma_mu") = 0.0, py::arg("sigma_g2") = 0.0);
    m.def(
        "classify_probabilities",
        [](double p0, double p1, double s0, double s1) { return verdict_dict(classify_probabilities(p0, p1, s0, s1)); },
        py::arg("p0"), py::arg("p1"), py::arg("sigma_p0") = 0.0, py::arg("sigma_p1") = 0.0);

    m.def(
        "infer_probabilities",
        [](double q1, double q2, double t, double pa, double pb, size_t n_pulses) {
            HbtConfig cfg{t, pa, pb, 0};
            validate(cfg);
            ClickStatistics stats;
            stats.Q1 = q1;
            stats.Q2 = q2;
            stats.n_pulses = n_pulses;
            auto r = infer_probabilities(stats, cfg);
            py::dict out;
            out["p0"] = r.p0;
            out["p1"] = r.p1;
            out["p2plus"] = r.p2plus;
            out["physical"] = r.physical;
            out["sigma"] = py::make_tuple(r.sigma_p0, r.sigma_p1, r.sigma_p2plus);
            return out;
        },
        py::arg("q1"), py::arg("q2"), py::arg("t") = 0.5, py::arg("pa") = 1.0, py::arg("pb") = 1.0,
        py::arg("n_pulses") = 0);
    m.def(
        "correct_loss",
        [](double p0, double p1, double p2, double t) {
            auto c = correct_loss(p0, p1, p2, t);
            return py::make_tuple(c.p0, c.p1, c.p2plus);
        },
        py::arg("p0"), py::arg("p1"), py::arg("p2plus"), py::arg("t_prime"));
    m.def(
        "heralding_efficiency",
        [](double coinc, double heralds, const std::vector<double> &corr) {
            return heralding_efficiency(coinc, heralds, corr);
        },
        py::arg("coincidences"), py::arg("heralds"), py::arg("corrections"));

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            int code = dispatch(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
