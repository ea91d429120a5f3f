#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "blockbeta/asymptotics.hpp"
#include "blockbeta/experiment.hpp"
#include "blockbeta/hull.hpp"
#include "blockbeta/metacube.hpp"
#include "blockbeta/sampler.hpp"
#include "blockbeta/suites.hpp"

namespace py = pybind11;
using namespace blockbeta;

namespace {

BetaParams betas_from(const std::vector<std::string>& betas) {
    ExperimentConfig cfg;
    cfg.betas = betas;
    return cfg.beta_params();
}

std::vector<std::string> beta_texts(const py::sequence& betas) {
    std::vector<std::string> out;
    for (const auto& b : betas) out.push_back(py::str(b));
    return out;
}

py::dict hull_dict(const HullResult& h) {
    py::dict d;
    d["f_vector"] = h.f_vector;
    d["volume"] = h.volume;
    d["vertex_ids"] = h.vertex_ids;
    std::vector<std::vector<int>> facets;
    for (const auto& f : h.facets) facets.push_back(f.vertex_ids);
    d["facets"] = facets;
    d["duplicates_merged"] = h.duplicates_merged;
    return d;
}

py::dict fit_dict(const RateFit& f) {
    py::dict d;
    d["exponent"] = f.exponent_hat;
    d["exponent_se"] = f.exponent_se;
    d["log_coeff"] = f.log_coeff;
    d["log_power"] = f.log_power;
    d["r_squared"] = f.r_squared;
    d["scale_coeff"] = f.scale_coeff;
    d["weighted"] = f.weighted;
    return d;
}

}  // namespace

PYBIND11_MODULE(_blockbeta, m) {
    m.doc() = "Random polytopes from block-beta points in products of balls";

    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def(
        "predict_rate",
        [](const std::vector<int>& dims, const py::sequence& betas) {
            const RatePrediction p = predict_rate(BlockStructure(dims), betas_from(beta_texts(betas)));
            py::dict d;
            d["k"] = p.k;
            d["k_max"] = p.k_max;
            d["count_k_max"] = p.count_k_max;
            d["exponent"] = p.exponent;
            d["log_power"] = p.log_power;
            return d;
        },
        py::arg("dims"), py::arg("betas"), "Predicted growth n^exponent (ln n)^log_power.");

    m.def(
        "sample",
        [](const std::vector<int>& dims, const py::sequence& betas, std::size_t count, std::uint64_t seed,
           std::uint64_t stream) {
            const BlockStructure bs(dims);
            RngStream rng(seed, stream);
            auto coords = sample_block_beta_cloud(bs, betas_from(beta_texts(betas)), count, rng);
            py::array_t<double> out({count, static_cast<std::size_t>(bs.total())});
            std::copy(coords.begin(), coords.end(), out.mutable_data());
            return out;
        },
        py::arg("dims"), py::arg("betas"), py::arg("count"), py::arg("seed") = 0, py::arg("stream") = 0,
        "count x d array of block-beta points.");

    m.def(
        "convex_hull",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> pts) {
            if (pts.ndim() != 2) throw std::invalid_argument("points must be a 2-d array");
            const auto d = static_cast<int>(pts.shape(1));
            std::vector<double> coords(pts.data(), pts.data() + pts.size());
            HullResult h;
            {
                py::gil_scoped_release release;
                h = convex_hull(PointCloud(d, std::move(coords)));
            }
            return hull_dict(h);
        },
        py::arg("points"), "Simplicial hull: f_vector, volume, vertex_ids, facets.");

    m.def(
        "cap_content_meta",
        [](const std::vector<double>& v, double s, const std::vector<double>& betas) {
            return cap_content_meta(MetaCap(v, s), betas);
        },
        py::arg("v"), py::arg("s"), py::arg("betas"));
    m.def(
        "section_content_meta",
        [](const std::vector<double>& v, double s, const std::vector<double>& betas) {
            return section_content_meta(MetaCap(v, s), betas);
        },
        py::arg("v"), py::arg("s"), py::arg("betas"));

    m.def(
        "aw_integral",
        [](const std::vector<double>& a, double n, double alpha, double c) {
            return aw_integral_numeric(AwConfig(a, alpha, c), n);
        },
        py::arg("a"), py::arg("n"), py::arg("alpha") = 0.0, py::arg("c") = 1.0);
    m.def(
        "aw_asymptotic",
        [](const std::vector<double>& a, double n, double alpha, double c) {
            return aw_asymptotic(AwConfig(a, alpha, c), n);
        },
        py::arg("a"), py::arg("n"), py::arg("alpha") = 0.0, py::arg("c") = 1.0);

    m.def(
        "fit_rate",
        [](const std::vector<double>& n, const std::vector<double>& mean, const std::vector<double>& se,
           double exponent, int log_power) {
            if (n.size() != mean.size() || n.size() != se.size())
                throw std::invalid_argument("n, mean and se must have equal length");
            std::vector<RatePoint> pts;
            for (std::size_t i = 0; i < n.size(); ++i) pts.push_back({n[i], mean[i], se[i]});
            const RateFitPair fit = fit_rate(pts, exponent, log_power);
            py::dict d;
            d["fixed"] = fit_dict(fit.fixed);
            d["free"] = fit_dict(fit.free);
            return d;
        },
        py::arg("n"), py::arg("mean"), py::arg("se"), py::arg("exponent"), py::arg("log_power"));

    m.def(
        "simulate",
        [](const std::string& config_json) {
            const ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
            RunRecord rec;
            {
                py::gil_scoped_release release;
                rec = simulate(cfg);
            }
            std::ostringstream csv;
            write_csv(csv, cfg, rec.samples);
            py::list aggs;
            for (const auto& a : rec.aggregates) {
                py::dict d;
                d["n"] = a.n;
                d["reps"] = a.reps;
                d["f_mean"] = a.f_mean;
                d["f_se"] = a.f_se;
                d["volume_deficit_mean"] = a.volume_deficit_mean;
                d["volume_deficit_se"] = a.volume_deficit_se;
                aggs.append(d);
            }
            py::dict out;
            out["csv"] = csv.str();
            out["config_hash"] = rec.config_hash;
            out["aggregates"] = aggs;
            return out;
        },
        py::arg("config_json"), "Run a sweep from a JSON config; returns CSV text and per-n aggregates.");

    m.def("suite_names", &suite_names);
    m.def(
        "verify",
        [](const std::string& name, std::uint64_t seed, double scale) {
            std::vector<Report> reps;
            {
                py::gil_scoped_release release;
                reps = run_suite(name, {seed, scale});
            }
            py::list out;
            for (const auto& r : reps) out.append(py::make_tuple(r.title, r.passed(), r.str()));
            return out;
        },
        py::arg("suite"), py::arg("seed") = 1, py::arg("scale") = 1.0,
        "List of (title, passed, report text) for a named suite.");
}
