#include "censmed/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace censmed {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Below this, Phi(z) is tiny enough that the ratio is taken from the
// continued fraction rather than from erfc.
constexpr double kTailSwitch = -10.0;
// Phi(z) is subnormal below roughly -37.5.
constexpr double kUnderflowSwitch = -37.0;

// Mills ratio Phi(-t) / phi(t) for t >= 10 by backward evaluation of
// 1 / (t + 1 / (t + 2 / (t + 3 / ...))).
double mills_ratio_tail(double t) {
    double acc = t;
    for (int k = 80; k >= 1; --k) {
        acc = t + k / acc;
    }
    return 1.0 / acc;
}

}  // namespace

double expit(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_norm_cdf(double z) {
    if (z > 0.0) {
        return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
    }
    if (z >= kTailSwitch) {
        return std::log(norm_cdf(z));
    }
    return -0.5 * z * z - kLogSqrt2Pi + std::log(mills_ratio_tail(-z));
}

double norm_quantile(double p) {
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    if (!(p < 1.0)) return std::numeric_limits<double>::infinity();
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double inverse_mills(double z) {
    if (z >= kTailSwitch) {
        return norm_pdf(z) / norm_cdf(z);
    }
    return 1.0 / mills_ratio_tail(-z);
}

double truncated_normal_mean(double mu, double sigma, double upper) {
    return mu - sigma * inverse_mills((upper - mu) / sigma);
}

double truncated_normal_from_uniform(double mu, double sigma, double upper, double u) {
    const double z = (upper - mu) / sigma;
    const double x = mu + sigma * norm_quantile(u * norm_cdf(z));
    return std::min(x, upper);
}

double sample_truncated_normal(double mu, double sigma, double upper, Rng& rng) {
    const double z = (upper - mu) / sigma;
    if (z >= kUnderflowSwitch) {
        return truncated_normal_from_uniform(mu, sigma, upper, rng.uniform());
    }
    // Standard normal tail beyond a = -z via exponential proposals with the
    // optimal rate; the draw t >= a maps back to mu - sigma * t <= upper.
    const double a = -z;
    const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        const double t = a - std::log(rng.uniform()) / rate;
        const double d = t - rate;
        if (rng.uniform() <= std::exp(-0.5 * d * d)) {
            return std::min(mu - sigma * t, upper);
        }
    }
}

}  // namespace censmed
