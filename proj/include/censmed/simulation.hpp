#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "censmed/mediation.hpp"
#include "censmed/types.hpp"

namespace censmed {

/// Mediator and outcome parameters of the reference HIV-reservoir design.
Theta default_sim_params();
inline constexpr double kDefaultAssayLimit = 1.96;

struct SimScenario {
    int n = 500;
    double xi = 1.0;
    double p_c = 0.5;
    Theta params = default_sim_params();
    double assay_limit = kDefaultAssayLimit;
    int n_reps = 200;
    std::vector<MethodSpec> methods;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Untreated-arm data: C ~ Bernoulli(p_c), M ~ N(a0 + a1 C, sigma2),
/// Y ~ Bernoulli(expit(b0 + b1 M + b2 C)), censored when M <= AL.
/// Deterministic given (seed, rep_index).
Dataset generate_dataset(const SimScenario& scenario, int rep_index);

/// Same draws, also returning the latent mediator of every row.
struct SimulatedData {
    Dataset data;
    std::vector<double> latent_m;
};
SimulatedData generate_with_latent(const SimScenario& scenario, int rep_index);

/// True shift indirect effect for one binary covariate:
/// sum_c P(C = c) * integral of [expit(eta(m - xi)) - expit(eta(m))] N(m; mu_c, sigma2) dm.
double true_indirect_oracle(const Theta& params, double xi, double p_c, double quad_tol = 1e-10);

struct SimReportRow {
    std::size_t scenario = 0;
    int n = 0;
    double xi = 0.0;
    Method method = Method::ObservedLikelihood;
    double truth = 0.0;
    double mean = 0.0;
    double bias = 0.0;
    double variance = 0.0;
    double mc_se = 0.0;
    int n_ok = 0;
    int n_failed = 0;
    int n_unconverged = 0;
    /// Per-replicate estimates (NaN for failures), kept when requested.
    std::vector<double> estimates;
};

struct SimReport {
    std::vector<SimReportRow> rows;
};

struct SimOptions {
    int threads = 0;
    bool keep_estimates = false;
};

/// For each scenario and method, n_reps generate-then-estimate cycles. All
/// methods of a replicate see the same dataset; method seeds are derived
/// from (scenario seed, replicate, method position). Failures are counted,
/// never fatal.
SimReport run_simulation(const std::vector<SimScenario>& scenarios, const SimOptions& opts = {});

}  // namespace censmed
