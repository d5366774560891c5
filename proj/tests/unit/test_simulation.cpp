#include <doctest.h>

#include <cmath>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/simulation.hpp"

using namespace censmed;

TEST_CASE("truth oracle at the reference parameters") {
    const Theta p = default_sim_params();
    CHECK(true_indirect_oracle(p, 0.0, 0.5) == 0.0);
    CHECK(true_indirect_oracle(p, 0.5, 0.5) == doctest::Approx(0.07639499787261968).epsilon(1e-9));
    CHECK(true_indirect_oracle(p, 1.0, 0.5) == doctest::Approx(0.14971493487052496).epsilon(1e-9));
    CHECK(true_indirect_oracle(p, 1.5, 0.5) == doctest::Approx(0.21729044069045917).epsilon(1e-9));
    CHECK(true_indirect_oracle(p, 2.0, 0.5) == doctest::Approx(0.27715021945434540).epsilon(1e-9));
}

TEST_CASE("truth oracle is increasing in the shift when the slope is negative") {
    const Theta p = default_sim_params();
    double prev = 0.0;
    for (double xi = 0.25; xi <= 3.0; xi += 0.25) {
        const double v = true_indirect_oracle(p, xi, 0.3);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("generated data follow the model") {
    SimScenario sc;
    sc.n = 20000;
    sc.seed = 3;
    const SimulatedData s = generate_with_latent(sc, 0);
    const auto& d = s.data;
    REQUIRE(d.size() == 20000u);
    double cens = 0.0, c1 = 0.0, y = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& o = d.observations[i];
        CHECK(o.a == 0);
        cens += 1 - o.delta;
        c1 += o.c[0];
        y += o.y;
        CHECK((o.delta == 1) == (s.latent_m[i] > sc.assay_limit));
        if (o.delta) CHECK(o.m == s.latent_m[i]);
        else CHECK(std::isnan(o.m));
    }
    CHECK(cens / 20000 == doctest::Approx(0.4372198625539854).epsilon(0.03));
    CHECK(c1 / 20000 == doctest::Approx(0.5).epsilon(0.03));
    CHECK(y / 20000 == doctest::Approx(0.5004215171694831).epsilon(0.03));
}

TEST_CASE("generation is a function of seed and replicate") {
    SimScenario sc;
    sc.n = 50;
    sc.seed = 8;
    const auto a = generate_with_latent(sc, 4);
    const auto b = generate_with_latent(sc, 4);
    const auto c = generate_with_latent(sc, 5);
    CHECK(a.latent_m == b.latent_m);
    CHECK(a.latent_m != c.latent_m);
}

TEST_CASE("harness summary statistics") {
    SimScenario sc;
    sc.n = 200;
    sc.n_reps = 12;
    sc.seed = 4;
    MethodSpec ol;
    ol.kind = Method::ObservedLikelihood;
    MethodSpec hal;
    hal.kind = Method::HalfAssayLimit;
    sc.methods = {ol, hal};
    SimOptions opts;
    opts.keep_estimates = true;
    opts.threads = 1;
    const SimReport r1 = run_simulation({sc}, opts);
    opts.threads = 3;
    const SimReport r3 = run_simulation({sc}, opts);
    REQUIRE(r1.rows.size() == 2u);
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& row = r1.rows[k];
        CHECK(row.estimates == r3.rows[k].estimates);
        CHECK(row.n_ok + row.n_failed == 12);
        double mean = 0.0;
        for (double e : row.estimates) mean += e;
        mean /= 12;
        double ss = 0.0;
        for (double e : row.estimates) ss += (e - mean) * (e - mean);
        CHECK(row.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(row.truth == doctest::Approx(0.14971493487052496).epsilon(1e-9));
        CHECK(row.bias == doctest::Approx(mean - row.truth).epsilon(1e-12));
        CHECK(row.variance == doctest::Approx(ss / 11).epsilon(1e-12));
        CHECK(row.mc_se == doctest::Approx(std::sqrt(ss / 11 / 12)).epsilon(1e-12));
    }
    CHECK(r1.rows[0].method == Method::ObservedLikelihood);
}

TEST_CASE("scenario validation") {
    SimScenario sc;
    sc.methods = {MethodSpec{}};
    sc.p_c = 1.5;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc.p_c = 0.5;
    sc.n = 1;
    CHECK_THROWS_AS(sc.validate(), Error);
}
