#include "censmed/simulation.hpp"

#include <cmath>
#include <limits>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/parallel.hpp"
#include "censmed/quadrature.hpp"
#include "censmed/random.hpp"

namespace censmed {

Theta default_sim_params() {
    return Theta(Eigen::Vector2d(2.03, 0.14), 0.78, Eigen::Vector3d(0.84, -0.73, 1.39));
}

void SimScenario::validate() const {
    if (n < 10) throw Error(ErrorKind::InvalidArgument, "scenario needs n >= 10");
    if (n_reps < 1) throw Error(ErrorKind::InvalidArgument, "scenario needs n_reps >= 1");
    if (!(p_c >= 0.0 && p_c <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p_c must lie in [0, 1]");
    if (params.n_covariates() != 1) {
        throw Error(ErrorKind::InvalidArgument, "simulation parameters must have exactly one covariate");
    }
    if (!(xi >= 0.0)) throw Error(ErrorKind::InvalidArgument, "shift xi must be non-negative");
}

SimulatedData generate_with_latent(const SimScenario& s, int rep_index) {
    s.validate();
    Rng rng(derive_seed(s.seed, {static_cast<std::uint64_t>(rep_index), 0x44415441ULL}));
    const double sigma = s.params.sigma_m();
    SimulatedData out;
    out.data.assay_limit = s.assay_limit;
    out.data.covariate_names = {"c_1"};
    out.data.observations.reserve(static_cast<std::size_t>(s.n));
    out.latent_m.reserve(static_cast<std::size_t>(s.n));
    for (int i = 0; i < s.n; ++i) {
        const double c = rng.bernoulli(s.p_c) ? 1.0 : 0.0;
        const double m = s.params.alpha(0) + s.params.alpha(1) * c + sigma * rng.normal();
        const double p = expit(s.params.beta(0) + s.params.beta(1) * m + s.params.beta(2) * c);
        Observation o;
        o.c = {c};
        o.a = 0;
        o.y = rng.bernoulli(p) ? 1 : 0;
        o.delta = m > s.assay_limit ? 1 : 0;
        o.m = o.delta == 1 ? m : std::numeric_limits<double>::quiet_NaN();
        out.data.observations.push_back(std::move(o));
        out.latent_m.push_back(m);
    }
    return out;
}

Dataset generate_dataset(const SimScenario& scenario, int rep_index) {
    return generate_with_latent(scenario, rep_index).data;
}

double true_indirect_oracle(const Theta& params, double xi, double p_c, double quad_tol) {
    if (params.n_covariates() != 1) {
        throw Error(ErrorKind::InvalidArgument, "oracle expects exactly one binary covariate");
    }
    const double sigma = params.sigma_m();
    double total = 0.0;
    for (int c = 0; c <= 1; ++c) {
        const double weight = c == 1 ? p_c : 1.0 - p_c;
        if (weight == 0.0) continue;
        const double mu = params.alpha(0) + params.alpha(1) * c;
        const double eta_c = params.beta(0) + params.beta(2) * c;
        // Substituting m -> m - xi in the shifted term keeps a single density,
        // so xi = 0 or a zero mediator slope gives exactly zero.
        auto integrand = [&](double m) {
            const double diff = expit(eta_c + params.beta(1) * (m - xi)) - expit(eta_c + params.beta(1) * m);
            return diff * norm_pdf((m - mu) / sigma) / sigma;
        };
        const QuadratureResult r = integrate_adaptive(integrand, mu - 12.0 * sigma, mu + 12.0 * sigma, quad_tol);
        total += weight * r.value;
    }
    return total;
}

SimReport run_simulation(const std::vector<SimScenario>& scenarios, const SimOptions& opts) {
    SimReport report;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const SimScenario& sc = scenarios[s];
        sc.validate();
        const double truth = true_indirect_oracle(sc.params, sc.xi, sc.p_c);
        const std::size_t n_methods = sc.methods.size();
        const auto n_reps = static_cast<std::size_t>(sc.n_reps);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> estimates(n_reps * n_methods, nan);
        std::vector<char> unconverged(n_reps * n_methods, 0);

        parallel_for(n_reps, opts.threads, [&](std::size_t rep) {
            const Dataset data = generate_dataset(sc, static_cast<int>(rep));
            for (std::size_t k = 0; k < n_methods; ++k) {
                MethodSpec spec = sc.methods[k];
                spec.seed = derive_seed(sc.seed, {static_cast<std::uint64_t>(rep), k + 1});
                try {
                    const EffectEstimate e = estimate_shift_indirect(data, sc.xi, spec);
                    estimates[rep * n_methods + k] = e.indirect;
                    unconverged[rep * n_methods + k] = e.diagnostics.converged ? 0 : 1;
                } catch (const std::exception&) {
                    // recorded as a failure
                }
            }
        });

        for (std::size_t k = 0; k < n_methods; ++k) {
            SimReportRow row;
            row.scenario = s;
            row.n = sc.n;
            row.xi = sc.xi;
            row.method = sc.methods[k].kind;
            row.truth = truth;
            double sum = 0.0;
            for (std::size_t rep = 0; rep < n_reps; ++rep) {
                const double v = estimates[rep * n_methods + k];
                if (opts.keep_estimates) row.estimates.push_back(v);
                if (std::isnan(v)) {
                    ++row.n_failed;
                    continue;
                }
                ++row.n_ok;
                row.n_unconverged += unconverged[rep * n_methods + k];
                sum += v;
            }
            if (row.n_ok > 0) {
                row.mean = sum / row.n_ok;
                double ss = 0.0;
                for (std::size_t rep = 0; rep < n_reps; ++rep) {
                    const double v = estimates[rep * n_methods + k];
                    if (!std::isnan(v)) ss += (v - row.mean) * (v - row.mean);
                }
                row.variance = row.n_ok > 1 ? ss / (row.n_ok - 1) : 0.0;
                row.mc_se = std::sqrt(row.variance / row.n_ok);
            } else {
                row.mean = row.variance = row.mc_se = nan;
            }
            row.bias = row.mean - row.truth;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace censmed
