#include <doctest.h>

#include <cmath>

#include "censmed/censored_normal.hpp"
#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/optimize.hpp"
#include "fixtures.hpp"

using namespace censmed;

namespace {

ArmSample sample_of(int n, double al, std::uint64_t seed, int rep = 0) {
    return ArmSample::from_dataset(fixtures::shift_data(n, al, seed, rep));
}

double loglik_by_hand(const Eigen::VectorXd& alpha, double s2, const ArmSample& s) {
    const double sd = std::sqrt(s2);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        const double mu = s.design.row(i).dot(alpha);
        if (s.observed[i]) {
            ll += std::log(norm_pdf((s.m(i) - mu) / sd) / sd);
        } else {
            ll += std::log(norm_cdf((s.assay_limit - mu) / sd));
        }
    }
    return ll;
}

}  // namespace

TEST_CASE("log-likelihood equals the term-by-term sum") {
    const ArmSample s = sample_of(100, 1.96, 3);
    const Eigen::Vector2d alpha(2.0, 0.1);
    CHECK(censored_normal_loglik(alpha, 0.8, s) == doctest::Approx(loglik_by_hand(alpha, 0.8, s)).epsilon(1e-12));
}

TEST_CASE("analytic score matches finite differences") {
    const ArmSample s = sample_of(150, 1.96, 4);
    const Eigen::Vector3d at(2.1, 0.2, 0.7);
    const Eigen::VectorXd g = censored_normal_score(at.head(2), at(2), s);
    const Eigen::VectorXd fd =
        fd_gradient([&](const Eigen::VectorXd& v) { return censored_normal_loglik(v.head(2), v(2), s); }, at);
    CHECK((g - fd).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("without censoring the fit is OLS with the 1/n variance") {
    const ArmSample s = sample_of(200, -std::numeric_limits<double>::infinity(), 5);
    const auto fit = fit_censored_normal(s);
    const Eigen::VectorXd ols = s.design.colPivHouseholderQr().solve(s.m);
    CHECK((fit.alpha - ols).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(fit.sigma2_m == doctest::Approx((s.m - s.design * ols).squaredNorm() / 200).epsilon(1e-10));
}

TEST_CASE("fit agrees with brute-force maximization") {
    for (int rep = 0; rep < 3; ++rep) {
        const ArmSample s = sample_of(200, 1.96, 6, rep);
        const auto fit = fit_censored_normal(s);
        REQUIRE(fit.converged);
        NelderMeadOptions o;
        o.f_tol = 1e-13;
        o.max_evals = 20000;
        const auto brute = nelder_mead(
            [&](const Eigen::VectorXd& v) { return -censored_normal_loglik(v.head(2), std::exp(v(2)), s); },
            Eigen::Vector3d(1.5, 0.0, 0.0), o);
        CHECK(std::abs(brute.x(0) - fit.alpha(0)) < 1e-4);
        CHECK(std::abs(brute.x(1) - fit.alpha(1)) < 1e-4);
        CHECK(std::abs(std::exp(brute.x(2)) - fit.sigma2_m) < 1e-4);
        CHECK(fit.score_inf_norm < 1e-4);
    }
}

TEST_CASE("log-likelihood never decreases across iterations") {
    for (double al : {0.5, 1.5, 1.96, 2.5}) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto fit = fit_censored_normal(sample_of(200, al, 7, rep));
            for (std::size_t t = 1; t < fit.loglik_trace.size(); ++t) {
                CHECK(fit.loglik_trace[t] >= fit.loglik_trace[t - 1] - 1e-9);
            }
        }
    }
}

TEST_CASE("shifting m and the limit shifts only the intercept") {
    Dataset d = fixtures::shift_data(200, 1.96, 8);
    const auto base = fit_censored_normal(ArmSample::from_dataset(d));
    for (auto& o : d.observations) {
        if (o.delta) o.m += 3.25;
    }
    d.assay_limit += 3.25;
    const auto shifted = fit_censored_normal(ArmSample::from_dataset(d));
    CHECK(shifted.alpha(0) - base.alpha(0) == doctest::Approx(3.25).epsilon(1e-8));
    CHECK(std::abs(shifted.alpha(1) - base.alpha(1)) < 1e-8);
    CHECK(std::abs(shifted.sigma2_m - base.sigma2_m) < 1e-8);
}

TEST_CASE("stored values on censored rows are ignored") {
    Dataset a = fixtures::shift_data(120, 1.96, 9);
    Dataset b = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.observations[i].delta == 0) {
            a.observations[i].m = a.assay_limit;
            b.observations[i].m = -999.0;
        }
    }
    const auto fa = fit_censored_normal(ArmSample::from_dataset(a));
    const auto fb = fit_censored_normal(ArmSample::from_dataset(b));
    CHECK((fa.alpha - fb.alpha).norm() == 0.0);
    CHECK(fa.sigma2_m == fb.sigma2_m);
}

TEST_CASE("all rows censored is an error") {
    const ArmSample s = sample_of(50, 100.0, 10);
    try {
        fit_censored_normal(s);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoUncensoredRows);
    }
}

TEST_CASE("warm start at the optimum converges immediately") {
    const ArmSample s = sample_of(200, 1.96, 11);
    const auto fit = fit_censored_normal(s);
    CensoredNormalOptions o;
    o.init_alpha = fit.alpha;
    o.init_sigma2 = fit.sigma2_m;
    const auto again = fit_censored_normal(s, o);
    CHECK(again.n_iter <= 2);
    CHECK((again.alpha - fit.alpha).lpNorm<Eigen::Infinity>() < 1e-7);
}
