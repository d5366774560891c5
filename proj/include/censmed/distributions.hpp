#pragma once

#include "censmed/random.hpp"

namespace censmed {

/// Logistic function, evaluated so that neither branch overflows.
double expit(double x);

double norm_pdf(double z);
double norm_cdf(double z);
/// log Phi(z), finite for arbitrarily negative z.
double log_norm_cdf(double z);
/// Standard normal quantile for p in (0, 1).
double norm_quantile(double p);

/// phi(z) / Phi(z). Uses a continued fraction in the far left tail, where
/// the ratio approaches -z.
double inverse_mills(double z);

/// Mean of N(mu, sigma^2) truncated to (-inf, upper].
double truncated_normal_mean(double mu, double sigma, double upper);

/// Draw from N(mu, sigma^2) conditioned on the value being <= upper.
/// Inverse-CDF on the truncated region; exponential rejection when the
/// region's mass underflows.
double sample_truncated_normal(double mu, double sigma, double upper, Rng& rng);

/// Same draw driven by a supplied uniform in (0, 1); only valid while
/// Phi((upper - mu) / sigma) is representable.
double truncated_normal_from_uniform(double mu, double sigma, double upper, double u);

}  // namespace censmed
