#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "censmed/types.hpp"

namespace censmed {

struct CensoredNormalFit {
    Eigen::VectorXd alpha;
    double sigma2_m = 0.0;
    int n_iter = 0;
    bool converged = false;
    double loglik = 0.0;
    /// Infinity norm of the analytic score at the returned estimate.
    double score_inf_norm = 0.0;
    /// Log-likelihood after each iteration (index 0 is the starting value).
    std::vector<double> loglik_trace;
};

struct CensoredNormalOptions {
    double tol = 1e-8;
    int max_iter = 500;
    /// Warm start; both must be set to take effect.
    std::optional<Eigen::VectorXd> init_alpha;
    std::optional<double> init_sigma2;
};

/// Observed-data log-likelihood of the left-censored normal regression
/// m | c ~ N(design * alpha, sigma2), censored at sample.assay_limit.
double censored_normal_loglik(const Eigen::VectorXd& alpha, double sigma2, const ArmSample& sample);

/// Gradient of censored_normal_loglik with respect to (alpha, sigma2).
Eigen::VectorXd censored_normal_score(const Eigen::VectorXd& alpha, double sigma2, const ArmSample& sample);

/// Iterative ML fit. Each iteration updates sigma2 from its score equation,
/// imputes censored rows with their conditional mean below the limit, and
/// refits alpha by least squares on the completed column; both use the
/// previous iterate's (alpha, sigma). Starts from OLS with censored rows
/// set to the limit. Throws NoUncensoredRows or RankDeficientDesign; hitting max_iter
/// returns the last iterate with converged = false.
CensoredNormalFit fit_censored_normal(const ArmSample& sample, const CensoredNormalOptions& opts = {});

/// Least-squares coefficients; throws RankDeficientDesign.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

}  // namespace censmed
