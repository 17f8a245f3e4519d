#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "multimin/core.hpp"
#include "multimin/harness.hpp"
#include "multimin/infill.hpp"
#include "multimin/mbo.hpp"
#include "multimin/metrics.hpp"
#include "multimin/minima.hpp"
#include "multimin/objectives.hpp"
#include "multimin/optim.hpp"
#include "multimin/random.hpp"
#include "multimin/surrogate.hpp"

namespace py = pybind11;
using multimin::BoxDomain;
using multimin::Design;
using multimin::EvaluatedDesign;
using multimin::KrigingModel;
using multimin::RandomStream;
using multimin::Vec;

namespace {

BoxDomain make_domain(const Vec& lower, const Vec& upper) {
    return BoxDomain(lower, upper);
}

Design matrix_to_design(const Eigen::MatrixXd& x) {
    Design d;
    d.points.reserve(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) d.points.push_back(x.row(i));
    return d;
}

Eigen::MatrixXd design_to_matrix(const Design& d) {
    if (d.points.empty()) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(d.points.size()), d.points[0].size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = d.points[i];
    return m;
}

multimin::CriterionKind kind_from(const std::string& algorithm, double lambda_g,
                                  double p_q, double lambda_lcb) {
    multimin::CriterionKind kind;
    if (algorithm == "ei") kind.variant = multimin::Criterion::ei;
    else if (algorithm == "lcb") kind.variant = multimin::Criterion::lcb;
    else if (algorithm == "se") kind.variant = multimin::Criterion::se;
    else if (algorithm == "geilm") kind.variant = multimin::Criterion::geilm;
    else throw multimin::ConfigError("unknown criterion: " + algorithm);
    kind.lambda_g = lambda_g;
    kind.p_q = p_q;
    kind.lambda_lcb = lambda_lcb;
    return kind;
}

py::dict cluster_dict(const multimin::MinimaSet& set) {
    py::list clusters;
    for (const auto& c : set.clusters) {
        py::dict entry;
        entry["x"] = Vec(c.representative);
        entry["value"] = c.value;
        entry["members"] = c.members;
        clusters.append(entry);
    }
    py::dict out;
    out["clusters"] = clusters;
    out["skipped_boundary"] = set.skipped_boundary;
    out["raw_converged"] = set.raw_converged;
    return out;
}

py::dict record_dict(const multimin::RunRecord& rec) {
    py::dict out;
    out["function"] = rec.cell.function;
    out["dim"] = rec.cell.dim;
    out["algorithm"] = rec.cell.algorithm;
    out["n_init"] = rec.cell.n_init;
    out["n_seq"] = rec.cell.n_seq;
    out["n_total"] = rec.n_total;
    out["replication"] = rec.replication;
    out["seed"] = rec.seed;
    out["pr"] = rec.pr ? py::cast(*rec.pr) : py::none();
    out["ahd"] = rec.ahd ? py::cast(*rec.ahd) : py::none();
    out["l"] = rec.l ? py::cast(*rec.l) : py::none();
    out["h"] = rec.h;
    out["interval"] =
        rec.interval ? py::cast(std::string(1, *rec.interval)) : py::none();
    out["skipped_boundary"] = rec.skipped_boundary;
    out["fit_failures"] = rec.fit_failures;
    out["failed"] = rec.failed;
    out["csv"] = multimin::format_record(rec, false);
    return out;
}

}  // namespace

PYBIND11_MODULE(_multimin, m) {
    m.doc() = "Kriging-based recovery of all local minima of expensive "
              "black-box functions";

    py::register_exception<multimin::Error>(m, "MultiminError");

    // ---- objective registry ------------------------------------------------
    m.def("list_functions", [] {
        py::list out;
        for (const auto& entry : multimin::registry()) {
            py::dict row;
            row["name"] = entry.fn.name;
            row["dim"] = entry.fn.dim;
            row["minima"] = entry.known.count();
            row["lower"] = Vec(entry.fn.domain.lower);
            row["upper"] = Vec(entry.fn.domain.upper);
            out.append(row);
        }
        return out;
    });

    m.def(
        "known_minima",
        [](const std::string& name, int dim) {
            const auto& entry = multimin::lookup(name, dim);
            const auto& e = entry.known.entries;
            Eigen::MatrixXd points(static_cast<Eigen::Index>(e.size()), dim);
            Vec values(static_cast<Eigen::Index>(e.size()));
            for (Eigen::Index i = 0; i < points.rows(); ++i) {
                points.row(i) = e[i].first;
                values[i] = e[i].second;
            }
            return py::make_tuple(points, values);
        },
        py::arg("name"), py::arg("dim"));

    m.def(
        "evaluate",
        [](const std::string& name, int dim, const Vec& x) {
            return multimin::evaluate(multimin::lookup(name, dim).fn, x);
        },
        py::arg("name"), py::arg("dim"), py::arg("x"));

    m.def(
        "domain",
        [](const std::string& name, int dim) {
            const auto& fn = multimin::lookup(name, dim).fn;
            return py::make_tuple(Vec(fn.domain.lower), Vec(fn.domain.upper));
        },
        py::arg("name"), py::arg("dim"));

    // ---- sampling and seeds ------------------------------------------------
    m.def(
        "lhs_sample",
        [](const Vec& lower, const Vec& upper, int n, std::uint64_t seed) {
            RandomStream stream(seed);
            return design_to_matrix(
                multimin::lhs_sample(make_domain(lower, upper), n, stream));
        },
        py::arg("lower"), py::arg("upper"), py::arg("n"), py::arg("seed"));

    m.def("derive_seed", &multimin::derive_seed, py::arg("base_seed"),
          py::arg("cell_hash"), py::arg("replication"));

    // ---- infill criteria ---------------------------------------------------
    m.def("expected_improvement", &multimin::expected_improvement, py::arg("mu"),
          py::arg("s"), py::arg("ystar"));
    m.def("lcb", &multimin::lcb, py::arg("mu"), py::arg("s"), py::arg("lambda_lcb"));
    m.def("se", &multimin::se, py::arg("s"));
    m.def("quantile_sd", &multimin::quantile_sd, py::arg("ystar"), py::arg("ymax"),
          py::arg("p_q"));
    m.def(
        "geilm",
        [](double mu, double s, const Vec& grad, double ystar, double ymax,
           double s_p, double lambda_g) {
            return multimin::geilm(mu, s, grad,
                                   multimin::CriterionContext{ystar, ymax, s_p},
                                   lambda_g);
        },
        py::arg("mu"), py::arg("s"), py::arg("grad"), py::arg("ystar"),
        py::arg("ymax"), py::arg("s_p"), py::arg("lambda_g") = 2.0);

    // ---- surrogate ----------------------------------------------------------
    py::class_<KrigingModel>(m, "Surrogate")
        .def("predict",
             [](const KrigingModel& self, const Vec& x) {
                 const multimin::Prediction p = self.predict(x);
                 return py::make_tuple(p.mean, p.sd);
             })
        .def("predict_mean", &KrigingModel::predict_mean)
        .def("mean_gradient", &KrigingModel::mean_gradient)
        .def_property_readonly(
            "lengthscales",
            [](const KrigingModel& self) { return Vec(self.lengthscales()); })
        .def_property_readonly("process_variance", &KrigingModel::process_variance)
        .def_property_readonly("trend", &KrigingModel::trend)
        .def_property_readonly("nll", &KrigingModel::nll)
        .def_property_readonly("nugget", &KrigingModel::nugget)
        .def_property_readonly("degenerate", &KrigingModel::degenerate)
        .def_property_readonly("n", &KrigingModel::n)
        .def_property_readonly("lower", [](const KrigingModel& self) {
            return Vec(self.domain().lower);
        })
        .def_property_readonly("upper", [](const KrigingModel& self) {
            return Vec(self.domain().upper);
        });

    m.def(
        "fit",
        [](const Eigen::MatrixXd& x, const Vec& y, const Vec& lower,
           const Vec& upper, std::uint64_t seed) {
            RandomStream stream(seed);
            return multimin::fit(make_domain(lower, upper),
                                 EvaluatedDesign(matrix_to_design(x), y),
                                 multimin::KrigingConfig{}, stream);
        },
        py::arg("x"), py::arg("y"), py::arg("lower"), py::arg("upper"),
        py::arg("seed") = 0);

    m.def(
        "propose",
        [](const KrigingModel& model, const Eigen::MatrixXd& x, const Vec& y,
           const std::string& criterion, std::uint64_t seed, double lambda_g,
           double p_q, double lambda_lcb) {
            RandomStream stream(seed);
            return Vec(multimin::propose(
                model, EvaluatedDesign(matrix_to_design(x), y),
                kind_from(criterion, lambda_g, p_q, lambda_lcb), stream));
        },
        py::arg("model"), py::arg("x"), py::arg("y"), py::arg("criterion"),
        py::arg("seed") = 0, py::arg("lambda_g") = 2.0, py::arg("p_q") = 0.001,
        py::arg("lambda_lcb") = 1.0);

    // ---- sequential optimization --------------------------------------------
    m.def(
        "run_mbo",
        [](const std::string& name, int dim, const std::string& criterion,
           int n_init, int n_seq, std::uint64_t seed, double lambda_g, double p_q) {
            const multimin::MboConfig config{
                multimin::lookup(name, dim).fn, n_init, n_seq,
                kind_from(criterion, lambda_g, p_q, 1.0),
                multimin::KrigingConfig{}, seed};
            const multimin::MboResult res = multimin::run(config);
            py::list trace;
            for (const auto& rec : res.trace.records) {
                py::dict row;
                row["iteration"] = rec.iteration;
                row["proposed"] = Vec(rec.proposed);
                row["response"] = rec.response;
                row["incumbent"] = rec.incumbent;
                row["criterion_value"] = rec.criterion_value;
                trace.append(row);
            }
            py::dict out;
            out["x"] = design_to_matrix(res.evaluated.design);
            out["y"] = Vec(res.evaluated.responses);
            out["incumbent"] = res.evaluated.incumbent_value();
            out["model"] = res.model;
            out["trace"] = trace;
            return out;
        },
        py::arg("name"), py::arg("dim"), py::arg("criterion"), py::arg("n_init"),
        py::arg("n_seq"), py::arg("seed") = 0, py::arg("lambda_g") = 2.0,
        py::arg("p_q") = 0.001);

    // ---- minima extraction ---------------------------------------------------
    m.def("sample_size", &multimin::sample_size, py::arg("p"));

    m.def(
        "extract_minima",
        [](const KrigingModel& model, int n, std::uint64_t seed, double delta) {
            const multimin::ValueGrad field = [&model](const Vec& x, Vec& g) {
                g = model.mean_gradient(x);
                return model.predict_mean(x);
            };
            RandomStream stream(seed);
            const multimin::ExtractResult res =
                multimin::extract(field, model.domain(), n, stream);
            multimin::MinimaSet set = multimin::agglomerate(res.kept, delta);
            set.skipped_boundary = res.skipped_boundary;
            py::dict out = cluster_dict(set);
            out["non_converged"] = res.non_converged;
            return out;
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = 0,
        py::arg("delta") = 0.001);

    // ---- metrics ---------------------------------------------------------------
    m.def("chebyshev", &multimin::chebyshev, py::arg("a"), py::arg("b"));
    m.def("peak_ratio", &multimin::peak_ratio, py::arg("l"), py::arg("h"));
    m.def(
        "ahd",
        [](const Eigen::MatrixXd& u, const Eigen::MatrixXd& s, double r) {
            std::vector<Vec> U, S;
            for (Eigen::Index i = 0; i < u.rows(); ++i) U.push_back(u.row(i));
            for (Eigen::Index i = 0; i < s.rows(); ++i) S.push_back(s.row(i));
            return multimin::ahd(U, S, r);
        },
        py::arg("u"), py::arg("s"), py::arg("r") = 1.0);

    // ---- experiment harness ------------------------------------------------------
    m.attr("CSV_HEADER") = std::string(multimin::kCsvHeader);

    m.def(
        "run_cell",
        [](const std::string& function, int dim, const std::string& algorithm,
           int n_init, int n_seq, std::uint64_t base_seed, int replication,
           double delta, double r, double lambda_g, double p_q) {
            multimin::ExperimentConfig params = multimin::ExperimentConfig::defaults();
            params.delta = delta;
            params.r = r;
            params.lambda_g = lambda_g;
            params.p_q = p_q;
            const multimin::CellSpec cell{function, dim, algorithm, n_init, n_seq};
            const std::uint64_t seed = multimin::derive_seed(
                base_seed, multimin::cell_hash(cell), replication);
            return record_dict(multimin::run_cell(cell, params, replication, seed));
        },
        py::arg("function"), py::arg("dim"), py::arg("algorithm"),
        py::arg("n_init"), py::arg("n_seq") = 0, py::arg("base_seed") = 1729,
        py::arg("replication") = 0, py::arg("delta") = 0.001, py::arg("r") = 1.0,
        py::arg("lambda_g") = 2.0, py::arg("p_q") = 0.001);

    m.def(
        "verify_oracle",
        [](const std::string& name, int dim, double tolerance, int n_override) {
            const multimin::OracleReport rep =
                multimin::verify_oracle(name, dim, tolerance, n_override);
            py::dict out;
            out["function"] = rep.function;
            out["dim"] = rep.dim;
            out["expected"] = rep.h;
            out["clusters"] = rep.clusters;
            out["skipped_boundary"] = rep.skipped_boundary;
            out["non_converged"] = rep.non_converged;
            out["match_distance"] = rep.match_distance;
            out["worst_match"] = rep.worst_match;
            out["pass"] = rep.pass;
            return out;
        },
        py::arg("name"), py::arg("dim"), py::arg("tolerance") = 1e-2,
        py::arg("n_override") = 0);
}
