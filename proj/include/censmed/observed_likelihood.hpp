#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "censmed/types.hpp"

namespace censmed {

/// Integral over (-inf, assay_limit] of Bern(y; expit(b0 + b1 m + b2'c)) times
/// the N(alpha'(1, c), sigma2_m) density. `c` excludes the intercept.
/// Absolute error is at most quad_tol (tighter, relative to the censored
/// mass, when that mass is small). Result lies in (0, Phi(z)].
double censored_cell_integral(int y, const Eigen::VectorXd& c, const Theta& theta, double assay_limit,
                              double quad_tol = 1e-9);

/// Same integral from precomputed pieces: mediator mean mu, outcome linear
/// predictor without the mediator term, and the mediator slope.
double censored_cell_integral(int y, double mu, double sigma, double eta_without_m, double beta_m,
                              double assay_limit, double quad_tol);

/// Joint observed-data log-likelihood of (y, m | c). Censored rows contribute
/// the log of their cell integral; rows sharing (y, c) are integrated once.
double obs_loglik(const Theta& theta, const ArmSample& sample, double quad_tol = 1e-9);

struct ObsLikOptions {
    double quad_tol = 1e-9;
    int simplex_max_evals = 1500;
    double simplex_f_tol = 1e-7;
    double simplex_step = 0.1;
    double grad_tol = 1e-6;
    int bfgs_max_iter = 200;
    /// Postcondition on the returned gradient; failing it clears `converged`.
    double accept_grad_tol = 1e-4;
};

struct ObsLikFit {
    Theta theta;
    double loglik = 0.0;
    double grad_inf_norm = 0.0;
    bool converged = false;
    int n_evals = 0;
    std::vector<std::string> warnings;
};

/// Maximizes obs_loglik over (alpha, log sigma2_m, beta): a simplex search
/// from `init` followed by a BFGS polish with central-difference gradients.
/// The best iterate is always returned; `converged` reports whether the
/// gradient postcondition held.
ObsLikFit maximize_obs_loglik(const ArmSample& sample, const Theta& init, const ObsLikOptions& opts = {});

/// Censored-normal fit for the mediator plus a logistic fit on uncensored
/// rows for the outcome.
Theta extrapolation_start(const ArmSample& sample);

/// Pack/unpack the optimizer's unconstrained coordinates.
Eigen::VectorXd to_unconstrained(const Theta& theta);
Theta from_unconstrained(const Eigen::VectorXd& v, std::size_t k);

}  // namespace censmed
