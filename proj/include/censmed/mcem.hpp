#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "censmed/random.hpp"
#include "censmed/types.hpp"

namespace censmed {

struct McemConfig {
    int J = 100;
    int K = 1000;
    double tol = 1e-4;
    int max_iter = 200;
    double grid_halfwidth = 8.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Discretized f(m | y, c, m <= AL; theta) on K equally spaced points.
struct GridWeights {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
    Eigen::VectorXd cumulative;

    /// Inverse-CDF draw on the discrete distribution.
    double sample(double u) const;
    double mean() const { return points.dot(weights); }
};

/// Grid on [mu - halfwidth * sigma, AL]; if AL sits below that lower end the
/// grid is moved to [AL - halfwidth * sigma, AL]. `c` excludes the intercept.
/// Throws DegenerateGrid when the interval is empty or not finite.
GridWeights grid_conditional_weights(int y, const Eigen::VectorXd& c, const Theta& theta, double assay_limit,
                                     int K, double grid_halfwidth);

/// Data completed by the E-step: uncensored rows first (weight 1), then
/// each censored row repeated J times with sampled m and weight 1/J.
struct CompletedData {
    Eigen::MatrixXd design;  // intercept then covariates
    Eigen::VectorXd m;
    Eigen::VectorXd y;
    Eigen::VectorXd w;
    Eigen::Index n_original = 0;
};

/// One Monte Carlo E-step driven by fixed uniforms, one row of J per
/// censored row (in row order).
CompletedData e_step(const ArmSample& sample, const Theta& theta, const McemConfig& config,
                     const Eigen::MatrixXd& uniforms);

/// Same, drawing the uniforms from rng.
CompletedData e_step(const ArmSample& sample, const Theta& theta, const McemConfig& config, Rng& rng);

/// Closed-form weighted least squares for alpha, weighted residual variance
/// over n_original for sigma2, weighted logistic regression for beta.
Theta m_step(const CompletedData& completed);

struct McemFit {
    Theta theta;
    int n_iter = 0;
    bool converged = false;
    bool separation = false;
    /// Final E-step draws, one vector of J per censored row in row order.
    std::vector<std::vector<double>> samples;
};

/// Monte Carlo EM with common random numbers: the uniforms behind the grid
/// draws are generated once per censored row and reused every iteration, so
/// the iterate sequence is deterministic. Starts from extrapolation_start
/// unless `init` is given.
McemFit mcem_fit(const ArmSample& sample, const McemConfig& config, const std::optional<Theta>& init = {});

}  // namespace censmed
