#pragma once

#include <functional>

#include <Eigen/Dense>

namespace censmed {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double grad_inf_norm = 0.0;
    int n_evals = 0;
    int n_iter = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    double initial_step = 0.1;
    double f_tol = 1e-8;
    int max_evals = 2000;
};

/// Minimizes f by the Nelder-Mead simplex method (standard coefficients
/// 1, 2, 1/2, 1/2). Converged when the spread of simplex values is below f_tol.
OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                        const NelderMeadOptions& opts = {});

/// Central finite differences with step rel_step * max(1, |x_i|).
Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step = 1e-6);

struct BfgsOptions {
    double grad_tol = 1e-6;
    int max_iter = 200;
    double rel_step = 1e-6;
    /// Also stop after two consecutive steps that lower f by less than
    /// f_rel_tol * (1 + |f|); gradients below that are finite-difference noise.
    double f_rel_tol = 1e-16;
};

/// Minimizes f by BFGS with finite-difference gradients and a backtracking
/// Armijo line search. Converged when the gradient infinity norm is below
/// grad_tol.
OptimResult bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opts = {});

}  // namespace censmed
