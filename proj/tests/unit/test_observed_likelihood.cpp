#include <doctest.h>

#include <cmath>

#include "censmed/censored_normal.hpp"
#include "censmed/distributions.hpp"
#include "censmed/logistic.hpp"
#include "censmed/observed_likelihood.hpp"
#include "fixtures.hpp"

using namespace censmed;

namespace {

double bern(int y, double p) { return y ? p : 1.0 - p; }

// Midpoint rule with a million panels.
double riemann_cell(int y, double c, const Theta& t, double lo, double hi) {
    constexpr int panels = 1000000;
    const double h = (hi - lo) / panels;
    const double mu = t.alpha(0) + t.alpha(1) * c;
    const double sd = t.sigma_m();
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double m = lo + (k + 0.5) * h;
        acc += bern(y, expit(t.beta(0) + t.beta(1) * m + t.beta(2) * c)) * norm_pdf((m - mu) / sd) / sd;
    }
    return acc * h;
}

}  // namespace

TEST_CASE("cell integral matches a fine Riemann sum") {
    const Theta t = default_sim_params();
    for (int y : {0, 1}) {
        for (double c : {0.0, 1.0}) {
            const double mu = t.alpha(0) + t.alpha(1) * c;
            const double ref = riemann_cell(y, c, t, mu - 12 * t.sigma_m(), 1.96);
            const double got = censored_cell_integral(y, Eigen::VectorXd::Constant(1, c), t, 1.96);
            CHECK(std::abs(got - ref) < 1e-9);
        }
    }
}

TEST_CASE("cell integral stays accurate when the censored mass is tiny") {
    const Theta t = default_sim_params();
    const double al = 2.03 - 9.0 * t.sigma_m();
    const double ref = riemann_cell(1, 0.0, t, al - 3.0 * t.sigma_m(), al);
    const double got = censored_cell_integral(1, Eigen::VectorXd::Zero(1), t, al);
    CHECK(got > 0.0);
    CHECK(got <= norm_cdf(-9.0));
    CHECK(got == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("cell integrals over y sum to the censored mass") {
    const Theta t = default_sim_params();
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 1.0);
    const double total = censored_cell_integral(0, c, t, 1.5) + censored_cell_integral(1, c, t, 1.5);
    CHECK(total == doctest::Approx(norm_cdf((1.5 - 2.17) / t.sigma_m())).epsilon(1e-9));
}

TEST_CASE("observed log-likelihood equals the term-by-term sum") {
    const ArmSample s = ArmSample::from_dataset(fixtures::shift_data(80, 1.96, 21));
    const Theta t(Eigen::Vector2d(2.0, 0.2), 0.7, Eigen::Vector3d(0.5, -0.6, 1.2));
    double ll = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        const double c = s.design(i, 1);
        const int y = int(s.y(i));
        if (s.observed[i]) {
            const double mu = t.alpha(0) + t.alpha(1) * c;
            ll += std::log(norm_pdf((s.m(i) - mu) / t.sigma_m()) / t.sigma_m());
            ll += std::log(bern(y, expit(t.beta(0) + t.beta(1) * s.m(i) + t.beta(2) * c)));
        } else {
            ll += std::log(censored_cell_integral(y, Eigen::VectorXd::Constant(1, c), t, s.assay_limit));
        }
    }
    CHECK(obs_loglik(t, s) == doctest::Approx(ll).epsilon(1e-11));
}

TEST_CASE("without censoring the maximizer is the separable MLE") {
    const ArmSample s = ArmSample::from_dataset(fixtures::uncensored_data(300, 22));
    const auto med = fit_censored_normal(s);
    Eigen::MatrixXd x(s.rows(), 3);
    x << s.design.col(0), s.m, s.design.col(1);
    const auto out = fit_weighted_logistic(x, s.y, Eigen::VectorXd::Ones(s.rows()));
    const Theta start(Eigen::Vector2d(1.0, 0.0), 1.0, Eigen::Vector3d::Zero());
    const ObsLikFit fit = maximize_obs_loglik(s, start);
    CHECK(fit.converged);
    CHECK((fit.theta.alpha - med.alpha).lpNorm<Eigen::Infinity>() < 1e-5);
    CHECK(std::abs(fit.theta.sigma2_m - med.sigma2_m) < 1e-5);
    CHECK((fit.theta.beta - out.beta).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("maximizer improves on its start and on the truth") {
    const ArmSample s = ArmSample::from_dataset(fixtures::shift_data(500, 1.96, 23));
    const Theta start = extrapolation_start(s);
    const ObsLikFit fit = maximize_obs_loglik(s, start);
    CHECK(fit.converged);
    CHECK(fit.grad_inf_norm < 1e-4);
    CHECK(fit.loglik >= obs_loglik(start, s));
    CHECK(fit.loglik >= obs_loglik(default_sim_params(), s));
    CHECK(fit.loglik == doctest::Approx(obs_loglik(fit.theta, s)).epsilon(1e-12));
}

TEST_CASE("unconstrained coordinates round-trip") {
    const Theta t(Eigen::Vector2d(2.0, -0.3), 0.45, Eigen::Vector3d(0.1, -0.2, 0.3));
    const Eigen::VectorXd v = to_unconstrained(t);
    CHECK(v.size() == 6);
    CHECK(v(2) == doctest::Approx(std::log(0.45)));
    CHECK(from_unconstrained(v, 1).max_abs_diff(t) < 1e-15);
}
