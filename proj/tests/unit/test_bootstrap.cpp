#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "censmed/bootstrap.hpp"
#include "censmed/error.hpp"
#include "fixtures.hpp"

using namespace censmed;

namespace {

Dataset digits() {
    Dataset d;
    for (int i = 0; i < 10; ++i) {
        Observation o;
        o.m = i;
        o.y = i % 2;
        d.observations.push_back(o);
    }
    return d;
}

double mean_m(const Dataset& d) {
    double s = 0.0;
    for (const auto& o : d.observations) s += o.m;
    return s / static_cast<double>(d.size());
}

// Independent percentile: order statistic interpolation written out.
double quantile7(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const double fl = std::floor(h);
    const std::size_t j = static_cast<std::size_t>(fl);
    if (j + 1 >= v.size()) return v.back();
    return v[j] + (h - fl) * (v[j + 1] - v[j]);
}

}  // namespace

TEST_CASE("constant statistic gives a degenerate interval") {
    BootstrapOptions o;
    o.B = 200;
    const auto r = bootstrap_ci(digits(), ScalarEstimator([](const Dataset&, std::uint64_t) { return 0.3; }), o);
    CHECK(r.lower == 0.3);
    CHECK(r.upper == 0.3);
    CHECK(r.point == 0.3);
}

TEST_CASE("sample-mean bootstrap matches a re-implementation on the same indices") {
    const Dataset d = digits();
    BootstrapOptions o;
    o.B = 2000;
    o.seed = 123;
    const auto r = bootstrap_ci(d, ScalarEstimator([](const Dataset& x, std::uint64_t) { return mean_m(x); }), o);
    std::vector<double> reps;
    for (int b = 0; b < o.B; ++b) {
        double s = 0.0;
        for (std::size_t i : bootstrap_indices(d, o.seed, b, true)) s += d.observations[i].m;
        reps.push_back(s / 10.0);
    }
    CHECK(r.replicates == reps);
    CHECK(std::abs(r.lower - quantile7(reps, 0.025)) < 1e-12);
    CHECK(std::abs(r.upper - quantile7(reps, 0.975)) < 1e-12);
    CHECK(r.point == 4.5);
}

TEST_CASE("percentile interpolation") {
    const std::vector<double> v = {1.0, 2.0, 4.0, 8.0};
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 1.0) == 8.0);
    CHECK(percentile(v, 0.5) == 3.0);
    CHECK(percentile(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("stratified resampling keeps per-arm counts") {
    const Dataset d = fixtures::two_arm_data(37, 1.96, 0.5, 3);
    Dataset lopsided = d;
    lopsided.observations.resize(37 + 12);
    for (int b = 0; b < 50; ++b) {
        const auto idx = bootstrap_indices(lopsided, 9, b, true);
        REQUIRE(idx.size() == lopsided.size());
        const auto treated = std::count_if(idx.begin(), idx.end(), [&](std::size_t i) {
            return lopsided.observations[i].a == 1;
        });
        CHECK(treated == 12);
    }
    const auto plain = bootstrap_indices(lopsided, 9, 0, false);
    CHECK(plain.size() == lopsided.size());
}

TEST_CASE("bootstrap is deterministic and thread-count independent") {
    const Dataset d = fixtures::shift_data(100, 1.96, 4);
    const VectorEstimator est = [](const Dataset& x, std::uint64_t) {
        double s = 0.0;
        for (const auto& o : x.observations) s += o.y;
        return std::vector<double>{s / static_cast<double>(x.size())};
    };
    BootstrapOptions o;
    o.B = 100;
    o.seed = 5;
    o.threads = 1;
    const auto a = bootstrap_ci(d, est, o);
    o.threads = 4;
    const auto b = bootstrap_ci(d, est, o);
    CHECK(a[0].replicates == b[0].replicates);
    CHECK(a[0].lower == b[0].lower);
}

TEST_CASE("failures are counted, and too many are fatal") {
    const Dataset d = digits();
    BootstrapOptions o;
    o.B = 100;
    int calls = 0;
    const ScalarEstimator flaky = [&](const Dataset& x, std::uint64_t seed) {
        ++calls;
        if (seed % 10 == 0 && calls > 1) throw Error(ErrorKind::RankDeficientDesign, "boom");
        return mean_m(x);
    };
    o.threads = 1;
    const auto r = bootstrap_ci(d, flaky, o);
    CHECK(r.n_failed + static_cast<int>(r.replicates.size()) == o.B);
    CHECK(r.n_failed > 0);

    const ScalarEstimator nan_half = [](const Dataset& x, std::uint64_t seed) {
        return seed % 2 ? std::nan("") : mean_m(x);
    };
    CHECK_THROWS_AS(bootstrap_ci(d, nan_half, o), Error);
}

TEST_CASE("argument checks") {
    BootstrapOptions o;
    o.B = 5;
    const ScalarEstimator est = [](const Dataset& x, std::uint64_t) { return mean_m(x); };
    CHECK_THROWS_AS(bootstrap_ci(digits(), est, o), Error);
    o.B = 100;
    o.level = 1.0;
    CHECK_THROWS_AS(bootstrap_ci(digits(), est, o), Error);
}
