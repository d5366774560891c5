#pragma once

#include <vector>

#include <Eigen/Dense>

namespace censmed {

/// Regression row (1, m, c...), binary outcome, positive weight.
struct WeightedRow {
    Eigen::VectorXd x;
    int y = 0;
    double w = 1.0;
};

struct LogisticOptions {
    double tol = 1e-10;
    int max_iter = 100;
};

struct LogisticFit {
    Eigen::VectorXd beta;
    int n_iter = 0;
    bool converged = false;
    // Some |linear predictor| exceeded 30 without the score converging.
    bool separation = false;
    double score_inf_norm = 0.0;
};

/// Weighted logistic MLE by IRLS (Newton on the weighted log-likelihood,
/// started at beta = 0, with step halving when the likelihood drops).
/// Throws RankDeficientDesign when the weighted design has deficient rank.
/// Non-convergence and separation are flagged, not thrown.
LogisticFit fit_weighted_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, const LogisticOptions& opts = {});

LogisticFit fit_weighted_logistic(const std::vector<WeightedRow>& rows, const LogisticOptions& opts = {});

/// sum_i w_i [y_i eta_i - log(1 + exp(eta_i))]
double weighted_logistic_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, const Eigen::VectorXd& beta);

/// log(1 + exp(eta)) without overflow.
double log1p_exp(double eta);

}  // namespace censmed
