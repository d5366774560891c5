#include <doctest.h>

#include <cmath>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/logistic.hpp"
#include "censmed/optimize.hpp"
#include "censmed/random.hpp"

using namespace censmed;

namespace {

struct Problem {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd w;
};

Problem make_problem(int n, std::uint64_t seed, bool random_weights) {
    Rng rng(seed);
    Problem p{Eigen::MatrixXd(n, 3), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        const double m = 2.0 + rng.normal();
        const double c = rng.bernoulli(0.5) ? 1.0 : 0.0;
        p.x.row(i) << 1.0, m, c;
        p.y(i) = rng.bernoulli(expit(0.84 - 0.73 * m + 1.39 * c)) ? 1.0 : 0.0;
        p.w(i) = random_weights ? 0.2 + rng.uniform() : 1.0;
    }
    return p;
}

}  // namespace

TEST_CASE("IRLS agrees with direct simplex maximization of the likelihood") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const Problem p = make_problem(300, seed, true);
        const LogisticFit fit = fit_weighted_logistic(p.x, p.y, p.w);
        REQUIRE(fit.converged);
        CHECK(fit.score_inf_norm < 1e-8);
        NelderMeadOptions o;
        o.f_tol = 1e-13;
        o.max_evals = 20000;
        const auto brute = nelder_mead(
            [&](const Eigen::VectorXd& b) { return -weighted_logistic_loglik(p.x, p.y, p.w, b); },
            Eigen::Vector3d(0.5, 0.5, 0.5), o);
        CHECK((brute.x - fit.beta).lpNorm<Eigen::Infinity>() < 1e-4);
    }
}

TEST_CASE("a duplicated row equals one row with weight 2") {
    Problem p = make_problem(80, 4, false);
    Problem dup{Eigen::MatrixXd(81, 3), Eigen::VectorXd(81), Eigen::VectorXd::Ones(81)};
    dup.x.topRows(80) = p.x;
    dup.y.head(80) = p.y;
    dup.x.row(80) = p.x.row(5);
    dup.y(80) = p.y(5);
    Eigen::VectorXd w2 = p.w;
    w2(5) = 2.0;
    const auto a = fit_weighted_logistic(dup.x, dup.y, dup.w);
    const auto b = fit_weighted_logistic(p.x, p.y, w2);
    CHECK((a.beta - b.beta).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("rescaling all weights leaves the fit unchanged") {
    const Problem p = make_problem(150, 5, true);
    const auto a = fit_weighted_logistic(p.x, p.y, p.w);
    const auto b = fit_weighted_logistic(p.x, p.y, 7.5 * p.w);
    CHECK((a.beta - b.beta).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("row-based overload matches the matrix one") {
    const Problem p = make_problem(60, 6, true);
    std::vector<WeightedRow> rows;
    for (int i = 0; i < 60; ++i) rows.push_back({p.x.row(i).transpose(), int(p.y(i)), p.w(i)});
    CHECK((fit_weighted_logistic(rows).beta - fit_weighted_logistic(p.x, p.y, p.w).beta).norm() == 0.0);
}

TEST_CASE("rank-deficient design is rejected") {
    Problem p = make_problem(50, 7, false);
    p.x.col(2) = 2.0 * p.x.col(1);
    CHECK_THROWS_AS(fit_weighted_logistic(p.x, p.y, p.w), Error);
    try {
        fit_weighted_logistic(p.x, p.y, p.w);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RankDeficientDesign);
    }
}

TEST_CASE("complete separation is flagged rather than thrown") {
    Eigen::MatrixXd x(20, 2);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) {
        x.row(i) << 1.0, double(i);
        y(i) = i >= 10 ? 1.0 : 0.0;
    }
    const auto fit = fit_weighted_logistic(x, y, Eigen::VectorXd::Ones(20));
    CHECK(fit.separation);
    CHECK_FALSE(fit.converged);
}

TEST_CASE("log1p_exp does not overflow") {
    CHECK(log1p_exp(800.0) == 800.0);
    CHECK(log1p_exp(-800.0) >= 0.0);
    CHECK(log1p_exp(0.0) == doctest::Approx(std::log(2.0)));
}
