#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "censmed/types.hpp"

namespace censmed {

/// Percentile interval. `lower <= point` is not guaranteed: under skew the
/// percentile interval can exclude the point estimate.
struct BootstrapResult {
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    int B = 0;
    int n_failed = 0;
    /// Successful replicate values in replicate order.
    std::vector<double> replicates;
};

struct BootstrapOptions {
    int B = 1000;
    double level = 0.95;
    std::uint64_t seed = 0;
    bool stratified = true;
    int threads = 0;
};

/// Estimator of one or more statistics; receives the seed to use for its own
/// stochastic steps.
using VectorEstimator = std::function<std::vector<double>(const Dataset&, std::uint64_t seed)>;
using ScalarEstimator = std::function<double(const Dataset&, std::uint64_t seed)>;

/// Row indices for replicate b. Stratified resampling draws within each
/// treatment arm, so per-arm counts are preserved exactly.
std::vector<std::size_t> bootstrap_indices(const Dataset& data, std::uint64_t seed, int b, bool stratified);

/// Seed handed to the estimator for replicate b.
std::uint64_t replicate_seed(std::uint64_t seed, int b);

/// Linear-interpolation empirical quantile of sorted values, q in [0, 1].
double percentile(const std::vector<double>& sorted, double q);

/// Nonparametric bootstrap: re-runs the estimator on B resamples, drops and
/// counts replicates that throw or return non-finite values, and reports
/// the (1 - level)/2 and (1 + level)/2 percentiles per statistic. The point
/// estimate uses opts.seed. Throws TooManyFailures when more than B/5
/// replicates fail.
std::vector<BootstrapResult> bootstrap_ci(const Dataset& data, const VectorEstimator& estimator,
                                          const BootstrapOptions& opts = {});

BootstrapResult bootstrap_ci(const Dataset& data, const ScalarEstimator& estimator,
                             const BootstrapOptions& opts = {});

}  // namespace censmed
