#include "censmed/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <boost/version.hpp>
#include <Eigen/Core>

#include "censmed/bootstrap.hpp"
#include "censmed/error.hpp"
#include "censmed/random.hpp"
#include "censmed/simulation.hpp"

#ifndef CENSMED_VERSION
#define CENSMED_VERSION "0.0.0"
#endif

namespace censmed {

namespace {

// Empty default means "depends on mode" or "not set".
const std::vector<std::pair<std::string, std::string>>& defaults() {
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"mode", ""},
        {"input", ""},
        {"output", ""},
        {"seed", "1"},
        {"method", "all"},
        {"xi", ""},
        {"assay_limit", "1.96"},
        {"design", "auto"},
        {"bootstrap_B", "1000"},
        {"level", "0.95"},
        {"stratified", "true"},
        {"threads", "0"},
        {"n", "500"},
        {"n_reps", "200"},
        {"p_c", "0.5"},
        {"alpha", "2.03,0.14"},
        {"sigma2", "0.78"},
        {"beta", "0.84,-0.73,1.39"},
        {"mcem_J", "100"},
        {"mcem_K", "1000"},
        {"mcem_tol", "1e-4"},
        {"mcem_max_iter", "200"},
        {"mcem_grid_halfwidth", "8"},
        {"J_predict", "100"},
        {"half_limit_scale", "natural"},
        {"prediction_draws", "auto"},
        {"quad_tol", "1e-9"},
    };
    return d;
}

std::string origin(const ConfigEntry& e) {
    if (e.line == 0) return e.source;
    return e.source + ":" + std::to_string(e.line);
}

[[noreturn]] void bad_value(const ConfigEntry& e, const std::string& expected) {
    throw Error(ErrorKind::ConfigError,
                origin(e) + ": key '" + e.key + "': expected " + expected + ", got '" + e.value + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return out;
}

double to_real(const ConfigEntry& e, const std::string& text, bool allow_inf = false) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || errno == ERANGE || std::isnan(v) || (!allow_inf && !std::isfinite(v))) {
        bad_value(e, allow_inf ? "a number (or -inf)" : "a finite number");
    }
    return v;
}

long long to_integer(const ConfigEntry& e, long long min_value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(e.value.c_str(), &end, 10);
    if (e.value.empty() || *end != '\0' || errno == ERANGE || v < min_value) {
        bad_value(e, "an integer >= " + std::to_string(min_value));
    }
    return v;
}

std::uint64_t to_u64(const ConfigEntry& e) {
    errno = 0;
    char* end = nullptr;
    if (e.value.empty() || e.value[0] == '-') bad_value(e, "a non-negative integer");
    const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) bad_value(e, "a non-negative integer");
    return v;
}

bool to_bool(const ConfigEntry& e) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    bad_value(e, "true or false");
}

std::vector<double> to_real_list(const ConfigEntry& e) {
    std::vector<double> out;
    for (const auto& item : split_list(e.value)) out.push_back(to_real(e, item));
    if (out.empty()) bad_value(e, "a comma-separated list of numbers");
    return out;
}

Eigen::VectorXd to_vector(const ConfigEntry& e) {
    const std::vector<double> v = to_real_list(e);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::uint64_t method_stream(Method m) { return static_cast<std::uint64_t>(m) + 1; }

std::string theta_header(const std::vector<std::string>& covariates) {
    std::string h = "alpha_intercept";
    for (const auto& c : covariates) h += ",alpha_" + c;
    h += ",sigma2_m,beta_intercept,beta_m";
    for (const auto& c : covariates) h += ",beta_" + c;
    return h;
}

std::string theta_cells(const Theta& t) {
    std::string s;
    for (Eigen::Index j = 0; j < t.alpha.size(); ++j) s += (j ? "," : "") + format_number(t.alpha(j));
    s += "," + format_number(t.sigma2_m);
    for (Eigen::Index j = 0; j < t.beta.size(); ++j) s += "," + format_number(t.beta(j));
    return s;
}

std::string opt_number(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
}

std::string estimate_cells(const EffectEstimate& e, Design design) {
    std::ostringstream os;
    os << to_string(e.method.kind) << "," << (design == Design::Shift ? "shift" : "two_arm") << ","
       << opt_number(e.xi) << "," << format_number(e.indirect) << "," << opt_number(e.direct) << ","
       << theta_cells(e.theta_hat) << "," << (e.diagnostics.converged ? 1 : 0) << "," << e.diagnostics.n_iter
       << "," << (e.diagnostics.separation ? 1 : 0);
    return os.str();
}

std::string estimate_header(const std::vector<std::string>& covariates) {
    return "method,design,xi,indirect,direct," + theta_header(covariates) + ",converged,n_iter,separation";
}

Design choose_design(const RunConfig& cfg, const Dataset& data) {
    switch (cfg.design) {
        case DesignChoice::Shift: return Design::Shift;
        case DesignChoice::TwoArm: return Design::TwoArm;
        case DesignChoice::Auto: break;
    }
    return data.has_treated() ? Design::TwoArm : Design::Shift;
}

MethodSpec spec_for(const RunConfig& cfg, Method m) {
    MethodSpec spec = cfg.method_template;
    spec.kind = m;
    spec.seed = derive_seed(cfg.seed, {method_stream(m)});
    return spec;
}

std::vector<EffectEstimate> estimate_one(const Dataset& data, Design design, const RunConfig& cfg,
                                         const MethodSpec& spec) {
    if (design == Design::TwoArm) return {estimate_two_arm(data, spec)};
    return estimate_shift_indirect(data, cfg.xis, spec);
}

void run_oracle(const RunConfig& cfg, std::ostream& out) {
    out << "xi,p_c,truth\n";
    for (double xi : cfg.xis) {
        out << format_number(xi) << "," << format_number(cfg.p_c) << ","
            << format_number(true_indirect_oracle(cfg.params, xi, cfg.p_c)) << "\n";
    }
}

void run_estimate(const RunConfig& cfg, std::ostream& out) {
    const Dataset data = parse_csv(cfg.input_path, cfg.assay_limit);
    const Design design = choose_design(cfg, data);
    out << estimate_header(data.covariate_names) << "\n";
    for (Method m : cfg.methods) {
        for (const auto& e : estimate_one(data, design, cfg, spec_for(cfg, m))) {
            out << estimate_cells(e, design) << "\n";
        }
    }
}

void run_bootstrap(const RunConfig& cfg, std::ostream& out) {
    const Dataset data = parse_csv(cfg.input_path, cfg.assay_limit);
    const Design design = choose_design(cfg, data);
    out << estimate_header(data.covariate_names)
        << ",ci_lower,ci_upper,direct_ci_lower,direct_ci_upper,level,B,n_failed\n";
    for (Method m : cfg.methods) {
        const MethodSpec base = spec_for(cfg, m);
        const std::vector<EffectEstimate> point = estimate_one(data, design, cfg, base);
        VectorEstimator estimator = [&](const Dataset& d, std::uint64_t seed) {
            MethodSpec spec = base;
            spec.seed = seed;
            std::vector<double> stats;
            for (const auto& e : estimate_one(d, design, cfg, spec)) {
                stats.push_back(e.indirect);
                if (e.direct) stats.push_back(*e.direct);
            }
            return stats;
        };
        BootstrapOptions opts;
        opts.B = cfg.bootstrap_B;
        opts.level = cfg.level;
        opts.seed = base.seed;
        opts.stratified = cfg.stratified;
        opts.threads = cfg.threads;
        const std::vector<BootstrapResult> ci = bootstrap_ci(data, estimator, opts);
        std::size_t k = 0;
        for (const auto& e : point) {
            const BootstrapResult& ind = ci[k++];
            std::string direct_lo = "NA";
            std::string direct_hi = "NA";
            int n_failed = ind.n_failed;
            if (e.direct) {
                const BootstrapResult& dir = ci[k++];
                direct_lo = format_number(dir.lower);
                direct_hi = format_number(dir.upper);
                n_failed = std::max(n_failed, dir.n_failed);
            }
            out << estimate_cells(e, design) << "," << format_number(ind.lower) << "," << format_number(ind.upper)
                << "," << direct_lo << "," << direct_hi << "," << format_number(cfg.level) << "," << cfg.bootstrap_B
                << "," << n_failed << "\n";
        }
    }
}

void write_manifest(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream m(path);
    if (!m) throw Error(ErrorKind::IoError, path.string() + ": cannot open for writing");
    m << "# censmed run manifest\n";
    m << "censmed_version = " << version() << "\n";
    m << "eigen_version = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION
      << "\n";
    m << "boost_version = " << BOOST_VERSION / 100000 << "." << BOOST_VERSION / 100 % 1000 << "."
      << BOOST_VERSION % 100 << "\n";
    m << "rng = mt19937_64/splitmix64\n";
    for (const auto& [key, value] : cfg.resolved) m << key << " = " << value << "\n";
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
    std::vector<SimScenario> scenarios;
    for (int n : cfg.sample_sizes) {
        for (double xi : cfg.xis) {
            SimScenario sc;
            sc.n = n;
            sc.xi = xi;
            sc.p_c = cfg.p_c;
            sc.params = cfg.params;
            sc.assay_limit = cfg.assay_limit;
            sc.n_reps = cfg.n_reps;
            sc.seed = cfg.seed;
            for (Method m : cfg.methods) sc.methods.push_back(spec_for(cfg, m));
            scenarios.push_back(std::move(sc));
        }
    }
    SimOptions opts;
    opts.threads = cfg.threads;
    const SimReport report = run_simulation(scenarios, opts);
    out << "scenario,n,xi,method,truth,mean,bias,variance,mc_se,n_ok,n_failed,n_unconverged\n";
    for (const auto& r : report.rows) {
        out << r.scenario << "," << r.n << "," << format_number(r.xi) << "," << to_string(r.method) << ","
            << format_number(r.truth) << "," << format_number(r.mean) << "," << format_number(r.bias) << ","
            << format_number(r.variance) << "," << format_number(r.mc_se) << "," << r.n_ok << "," << r.n_failed
            << "," << r.n_unconverged << "\n";
    }
}

}  // namespace

std::string version() { return CENSMED_VERSION; }

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, value] : defaults()) k.push_back(key);
        return k;
    }();
    return keys;
}

RunConfig resolve_config(const std::vector<ConfigEntry>& entries) {
    std::map<std::string, ConfigEntry> cur;
    for (const auto& [key, value] : defaults()) cur[key] = ConfigEntry{key, value, "<default>", 0};
    for (const auto& e : entries) {
        if (!cur.count(e.key)) throw Error(ErrorKind::ConfigError, origin(e) + ": unknown key '" + e.key + "'");
        cur[e.key] = e;
    }
    auto get = [&](const std::string& key) -> const ConfigEntry& { return cur.at(key); };

    RunConfig cfg;
    const ConfigEntry& mode = get("mode");
    if (mode.value == "simulate") cfg.mode = RunMode::Simulate;
    else if (mode.value == "estimate") cfg.mode = RunMode::Estimate;
    else if (mode.value == "bootstrap") cfg.mode = RunMode::Bootstrap;
    else if (mode.value == "oracle") cfg.mode = RunMode::Oracle;
    else if (mode.value.empty()) throw Error(ErrorKind::ConfigError, "mode is required (simulate, estimate, bootstrap, oracle)");
    else bad_value(mode, "one of simulate, estimate, bootstrap, oracle");

    cfg.input_path = get("input").value;
    cfg.output_path = get("output").value;
    cfg.seed = to_u64(get("seed"));

    const ConfigEntry& method = get("method");
    if (method.value == "all") {
        cfg.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
    } else {
        for (const auto& name : split_list(method.value)) {
            try {
                const Method m = parse_method(name);
                if (std::find(cfg.methods.begin(), cfg.methods.end(), m) == cfg.methods.end()) cfg.methods.push_back(m);
            } catch (const Error&) {
                bad_value(method, "'all' or a list of extrapolation, observed_likelihood, mcem, half_assay_limit");
            }
        }
    }

    ConfigEntry xi = get("xi");
    if (xi.value.empty()) xi.value = cfg.mode == RunMode::Simulate ? "1" : "0.5,1,1.5,2";
    cfg.xis = to_real_list(xi);
    cur["xi"].value = xi.value;
    for (double v : cfg.xis) {
        if (v < 0.0) bad_value(xi, "non-negative shifts");
    }

    cfg.assay_limit = to_real(get("assay_limit"), get("assay_limit").value, true);
    if (cfg.assay_limit == std::numeric_limits<double>::infinity()) bad_value(get("assay_limit"), "a number (or -inf)");

    const ConfigEntry& design = get("design");
    if (design.value == "auto") cfg.design = DesignChoice::Auto;
    else if (design.value == "shift") cfg.design = DesignChoice::Shift;
    else if (design.value == "two_arm") cfg.design = DesignChoice::TwoArm;
    else bad_value(design, "auto, shift or two_arm");

    cfg.bootstrap_B = static_cast<int>(to_integer(get("bootstrap_B"), 10));
    cfg.level = to_real(get("level"), get("level").value);
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) bad_value(get("level"), "a value in (0, 1)");
    cfg.stratified = to_bool(get("stratified"));
    cfg.threads = static_cast<int>(to_integer(get("threads"), 0));

    for (const auto& item : split_list(get("n").value)) {
        ConfigEntry e = get("n");
        e.value = item;
        cfg.sample_sizes.push_back(static_cast<int>(to_integer(e, 10)));
    }
    cfg.n_reps = static_cast<int>(to_integer(get("n_reps"), 1));
    cfg.p_c = to_real(get("p_c"), get("p_c").value);
    if (!(cfg.p_c >= 0.0 && cfg.p_c <= 1.0)) bad_value(get("p_c"), "a probability");
    const Eigen::VectorXd alpha = to_vector(get("alpha"));
    const Eigen::VectorXd beta = to_vector(get("beta"));
    const double sigma2 = to_real(get("sigma2"), get("sigma2").value);
    if (alpha.size() != 2) bad_value(get("alpha"), "two values (intercept, covariate)");
    if (beta.size() != 3) bad_value(get("beta"), "three values (intercept, mediator, covariate)");
    if (!(sigma2 > 0.0)) bad_value(get("sigma2"), "a positive variance");
    cfg.params = Theta(alpha, sigma2, beta);

    MethodSpec& t = cfg.method_template;
    t.mcem.J = static_cast<int>(to_integer(get("mcem_J"), 1));
    t.mcem.K = static_cast<int>(to_integer(get("mcem_K"), 2));
    t.mcem.tol = to_real(get("mcem_tol"), get("mcem_tol").value);
    t.mcem.max_iter = static_cast<int>(to_integer(get("mcem_max_iter"), 1));
    t.mcem.grid_halfwidth = to_real(get("mcem_grid_halfwidth"), get("mcem_grid_halfwidth").value);
    if (!(t.mcem.tol > 0.0)) bad_value(get("mcem_tol"), "a positive tolerance");
    if (!(t.mcem.grid_halfwidth > 0.0)) bad_value(get("mcem_grid_halfwidth"), "a positive number");
    t.J_predict = static_cast<int>(to_integer(get("J_predict"), 1));
    const ConfigEntry& scale = get("half_limit_scale");
    if (scale.value == "natural") t.half_limit_scale = HalfLimitScale::Natural;
    else if (scale.value == "log") t.half_limit_scale = HalfLimitScale::Log;
    else bad_value(scale, "natural or log");
    const ConfigEntry& draws = get("prediction_draws");
    if (draws.value == "auto") t.prediction_draws = PredictionDraws::Auto;
    else if (draws.value == "truncated") t.prediction_draws = PredictionDraws::Truncated;
    else if (draws.value == "posterior") t.prediction_draws = PredictionDraws::Posterior;
    else bad_value(draws, "auto, truncated or posterior");
    if (t.prediction_draws == PredictionDraws::Posterior &&
        std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) { return m != Method::Mcem; })) {
        bad_value(draws, "posterior only when method = mcem");
    }
    t.obs_lik.quad_tol = to_real(get("quad_tol"), get("quad_tol").value);
    if (!(t.obs_lik.quad_tol > 0.0)) bad_value(get("quad_tol"), "a positive tolerance");

    if ((cfg.mode == RunMode::Estimate || cfg.mode == RunMode::Bootstrap) && cfg.input_path.empty()) {
        throw Error(ErrorKind::ConfigError, "mode " + mode.value + " requires input");
    }
    if (cfg.mode == RunMode::Simulate && cfg.output_path.empty()) {
        throw Error(ErrorKind::ConfigError, "mode simulate requires output (the manifest is written beside it)");
    }

    for (const auto& [key, e] : cur) cfg.resolved[key] = e.value;
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::ostringstream buffer;
        switch (cfg.mode) {
            case RunMode::Oracle: run_oracle(cfg, buffer); break;
            case RunMode::Estimate: run_estimate(cfg, buffer); break;
            case RunMode::Bootstrap: run_bootstrap(cfg, buffer); break;
            case RunMode::Simulate: run_simulate(cfg, buffer); break;
        }
        if (cfg.output_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream f(cfg.output_path, std::ios::binary);
            if (!f) throw Error(ErrorKind::IoError, cfg.output_path.string() + ": cannot open for writing");
            f << buffer.str();
            if (!f) throw Error(ErrorKind::IoError, cfg.output_path.string() + ": write failed");
            if (cfg.mode == RunMode::Simulate) {
                write_manifest(cfg, std::filesystem::path(cfg.output_path.string() + ".manifest"));
            }
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: Internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace censmed
