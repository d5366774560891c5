#include <doctest.h>

#include <cmath>

#include "censmed/optimize.hpp"

using namespace censmed;

namespace {

double rosenbrock(const Eigen::VectorXd& x) {
    return 100 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1 - x(0), 2);
}

}  // namespace

TEST_CASE("Nelder-Mead finds the Rosenbrock minimum") {
    NelderMeadOptions o;
    o.f_tol = 1e-14;
    o.max_evals = 5000;
    const auto r = nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0), o);
    CHECK(r.converged);
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("BFGS finds the Rosenbrock minimum") {
    const auto r = bfgs(rosenbrock, Eigen::Vector2d(-1.2, 1.0));
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.value < 1e-10);
}

TEST_CASE("BFGS on a quadratic") {
    Eigen::Matrix3d a;
    a << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    const Eigen::Vector3d b(1, -2, 0.5);
    const Objective f = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(a * x) - b.dot(x); };
    const auto r = bfgs(f, Eigen::Vector3d::Zero());
    CHECK(r.converged);
    CHECK((r.x - a.ldlt().solve(b)).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("finite-difference gradient") {
    const Objective f = [](const Eigen::VectorXd& x) { return std::sin(x(0)) * std::exp(x(1)); };
    const Eigen::Vector2d x(0.3, -0.7);
    const Eigen::VectorXd g = fd_gradient(f, x);
    CHECK(g(0) == doctest::Approx(std::cos(0.3) * std::exp(-0.7)).epsilon(1e-8));
    CHECK(g(1) == doctest::Approx(std::sin(0.3) * std::exp(-0.7)).epsilon(1e-8));
}
