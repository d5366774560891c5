#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "censmed/bootstrap.hpp"
#include "censmed/censored_normal.hpp"
#include "censmed/cli.hpp"
#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/io.hpp"
#include "censmed/mediation.hpp"
#include "censmed/simulation.hpp"

namespace py = pybind11;
using namespace censmed;

namespace {

MethodSpec make_spec(const std::string& method, std::uint64_t seed, int J_predict, int mcem_J, int mcem_K,
                     const std::string& half_limit_scale) {
    MethodSpec s;
    s.kind = parse_method(method);
    s.seed = seed;
    s.J_predict = J_predict;
    s.mcem.J = mcem_J;
    s.mcem.K = mcem_K;
    if (half_limit_scale == "natural") s.half_limit_scale = HalfLimitScale::Natural;
    else if (half_limit_scale == "log") s.half_limit_scale = HalfLimitScale::Log;
    else throw Error(ErrorKind::InvalidArgument, "half_limit_scale must be 'natural' or 'log'");
    return s;
}

py::dict estimate_dict(const EffectEstimate& e) {
    py::dict d;
    d["method"] = std::string(to_string(e.method.kind));
    d["indirect"] = e.indirect;
    d["direct"] = e.direct ? py::cast(*e.direct) : py::none();
    d["xi"] = e.xi ? py::cast(*e.xi) : py::none();
    d["theta"] = e.theta_hat;
    d["converged"] = e.diagnostics.converged;
    d["n_iter"] = e.diagnostics.n_iter;
    d["separation"] = e.diagnostics.separation;
    d["notes"] = e.diagnostics.notes;
    return d;
}

Dataset from_arrays(const std::vector<int>& y, const std::vector<double>& m, const std::vector<int>& delta,
                    const std::optional<Eigen::MatrixXd>& c, const std::optional<std::vector<int>>& a,
                    double assay_limit) {
    const std::size_t n = y.size();
    if (m.size() != n || delta.size() != n || (a && a->size() != n) || (c && std::size_t(c->rows()) != n)) {
        throw Error(ErrorKind::InvalidArgument, "all columns must have the same length");
    }
    Dataset d;
    d.assay_limit = assay_limit;
    const Eigen::Index k = c ? c->cols() : 0;
    for (Eigen::Index j = 0; j < k; ++j) d.covariate_names.push_back("c_" + std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i) {
        Observation o;
        o.y = y[i];
        o.delta = delta[i];
        o.m = delta[i] ? m[i] : std::numeric_limits<double>::quiet_NaN();
        o.a = a ? (*a)[i] : 0;
        for (Eigen::Index j = 0; j < k; ++j) o.c.push_back((*c)(Eigen::Index(i), j));
        d.observations.push_back(std::move(o));
    }
    d.validate();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mediation effects with a left-censored mediator";

    static py::exception<Error> error_type(m, "CensmedError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            std::ostringstream os;
            os << to_string(e.kind()) << ": " << e.what();
            py::set_error(error_type, os.str().c_str());
        }
    });

    py::class_<Theta>(m, "Theta")
        .def(py::init<Eigen::VectorXd, double, Eigen::VectorXd>(), py::arg("alpha"), py::arg("sigma2_m"),
             py::arg("beta"))
        .def_readwrite("alpha", &Theta::alpha)
        .def_readwrite("sigma2_m", &Theta::sigma2_m)
        .def_readwrite("beta", &Theta::beta)
        .def("__repr__", [](const Theta& t) {
            std::ostringstream os;
            os << "Theta(alpha=[" << t.alpha.transpose() << "], sigma2_m=" << t.sigma2_m << ", beta=["
               << t.beta.transpose() << "])";
            return os.str();
        });

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&from_arrays), py::arg("y"), py::arg("m"), py::arg("delta"), py::arg("c") = py::none(),
             py::arg("a") = py::none(), py::arg("assay_limit") = kDefaultAssayLimit)
        .def("__len__", &Dataset::size)
        .def_readonly("assay_limit", &Dataset::assay_limit)
        .def_readonly("covariate_names", &Dataset::covariate_names)
        .def("count_censored", &Dataset::count_censored)
        .def("has_treated", &Dataset::has_treated)
        .def_property_readonly("y", [](const Dataset& d) {
            std::vector<int> v;
            for (const auto& o : d.observations) v.push_back(o.y);
            return v;
        })
        .def_property_readonly("m", [](const Dataset& d) {
            std::vector<double> v;
            for (const auto& o : d.observations) v.push_back(o.delta ? o.m : std::numeric_limits<double>::quiet_NaN());
            return v;
        })
        .def_property_readonly("delta", [](const Dataset& d) {
            std::vector<int> v;
            for (const auto& o : d.observations) v.push_back(o.delta);
            return v;
        });

    m.def("expit", &expit);
    m.def("norm_cdf", &norm_cdf);
    m.def("inverse_mills", &inverse_mills);
    m.def("truncated_normal_mean", &truncated_normal_mean, py::arg("mu"), py::arg("sigma"), py::arg("upper"));
    m.def("default_sim_params", &default_sim_params);

    m.def("true_indirect_oracle", &true_indirect_oracle, py::arg("params"), py::arg("xi"), py::arg("p_c") = 0.5,
          py::arg("quad_tol") = 1e-10);

    m.def(
        "generate_dataset",
        [](int n, std::uint64_t seed, int rep, double assay_limit, double p_c, const std::optional<Theta>& params) {
            SimScenario sc;
            sc.n = n;
            sc.seed = seed;
            sc.assay_limit = assay_limit;
            sc.p_c = p_c;
            if (params) sc.params = *params;
            return generate_dataset(sc, rep);
        },
        py::arg("n"), py::arg("seed"), py::arg("rep") = 0, py::arg("assay_limit") = kDefaultAssayLimit,
        py::arg("p_c") = 0.5, py::arg("params") = py::none());

    m.def("read_csv", [](const std::string& path, double al) { return parse_csv(std::filesystem::path(path), al); },
          py::arg("path"), py::arg("assay_limit"));
    m.def("write_csv", [](const Dataset& d, const std::string& path) { write_csv(d, std::filesystem::path(path)); },
          py::arg("data"), py::arg("path"));

    m.def(
        "fit_censored_normal",
        [](const Dataset& d) {
            const CensoredNormalFit f = fit_censored_normal(ArmSample::from_dataset(d));
            py::dict out;
            out["alpha"] = f.alpha;
            out["sigma2_m"] = f.sigma2_m;
            out["loglik"] = f.loglik;
            out["n_iter"] = f.n_iter;
            out["converged"] = f.converged;
            return out;
        },
        py::arg("data"));

    m.def(
        "estimate_shift_indirect",
        [](const Dataset& d, const std::vector<double>& xis, const std::string& method, std::uint64_t seed,
           int J_predict, int mcem_J, int mcem_K, const std::string& scale) {
            const auto est =
                estimate_shift_indirect(d, xis, make_spec(method, seed, J_predict, mcem_J, mcem_K, scale));
            py::list out;
            for (const auto& e : est) out.append(estimate_dict(e));
            return out;
        },
        py::arg("data"), py::arg("xi"), py::arg("method") = "observed_likelihood", py::arg("seed") = 0,
        py::arg("J_predict") = 100, py::arg("mcem_J") = 100, py::arg("mcem_K") = 1000,
        py::arg("half_limit_scale") = "natural");

    m.def(
        "estimate_two_arm",
        [](const Dataset& d, const std::string& method, std::uint64_t seed, int J_predict, int mcem_J, int mcem_K,
           const std::string& scale) {
            return estimate_dict(estimate_two_arm(d, make_spec(method, seed, J_predict, mcem_J, mcem_K, scale)));
        },
        py::arg("data"), py::arg("method") = "observed_likelihood", py::arg("seed") = 0, py::arg("J_predict") = 100,
        py::arg("mcem_J") = 100, py::arg("mcem_K") = 1000, py::arg("half_limit_scale") = "natural");

    m.def(
        "bootstrap_shift_indirect",
        [](const Dataset& d, double xi, const std::string& method, int B, double level, std::uint64_t seed,
           bool stratified, int threads) {
            const MethodSpec base = make_spec(method, seed, 100, 100, 1000, "natural");
            const ScalarEstimator est = [&](const Dataset& x, std::uint64_t s) {
                MethodSpec spec = base;
                spec.seed = s;
                return estimate_shift_indirect(x, xi, spec).indirect;
            };
            BootstrapOptions o;
            o.B = B;
            o.level = level;
            o.seed = seed;
            o.stratified = stratified;
            o.threads = threads;
            BootstrapResult r;
            {
                py::gil_scoped_release release;
                r = bootstrap_ci(d, est, o);
            }
            py::dict out;
            out["point"] = r.point;
            out["lower"] = r.lower;
            out["upper"] = r.upper;
            out["level"] = r.level;
            out["B"] = r.B;
            out["n_failed"] = r.n_failed;
            out["replicates"] = r.replicates;
            return out;
        },
        py::arg("data"), py::arg("xi"), py::arg("method") = "observed_likelihood", py::arg("B") = 1000,
        py::arg("level") = 0.95, py::arg("seed") = 0, py::arg("stratified") = true, py::arg("threads") = 0);

    m.def(
        "run",
        [](const std::map<std::string, std::string>& settings) {
            std::vector<ConfigEntry> entries;
            for (const auto& [k, v] : settings) entries.push_back({k, v, "python", 0});
            const RunConfig cfg = resolve_config(entries);
            std::ostringstream out, err;
            const int rc = censmed::run(cfg, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("settings"),
        "Runs one CLI mode from a dict of config keys; returns (exit_code, stdout, stderr).");

    m.attr("__version__") = version();
}
