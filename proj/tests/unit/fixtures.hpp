#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "censmed/random.hpp"
#include "censmed/simulation.hpp"
#include "censmed/types.hpp"

namespace fixtures {

inline censmed::Dataset shift_data(int n, double assay_limit, std::uint64_t seed, int rep = 0) {
    censmed::SimScenario sc;
    sc.n = n;
    sc.assay_limit = assay_limit;
    sc.seed = seed;
    return censmed::generate_dataset(sc, rep);
}

inline censmed::Dataset uncensored_data(int n, std::uint64_t seed, int rep = 0) {
    return shift_data(n, -std::numeric_limits<double>::infinity(), seed, rep);
}

// Two-arm data under the default parameters. Treated mediators are the
// untreated mediator law shifted down by `shift`.
inline censmed::Dataset two_arm_data(int n_per_arm, double assay_limit, double shift, std::uint64_t seed) {
    const censmed::Theta p = censmed::default_sim_params();
    censmed::Rng rng(seed);
    censmed::Dataset d;
    d.assay_limit = assay_limit;
    d.covariate_names = {"c_1"};
    for (int a = 0; a <= 1; ++a) {
        for (int i = 0; i < n_per_arm; ++i) {
            censmed::Observation o;
            o.a = a;
            const double c = rng.bernoulli(0.5) ? 1.0 : 0.0;
            o.c = {c};
            const double m = p.alpha(0) + p.alpha(1) * c + p.sigma_m() * rng.normal() - (a ? shift : 0.0);
            // Treated outcomes follow the untreated outcome law (no direct effect).
            const double eta = p.beta(0) + p.beta(1) * m + p.beta(2) * c;
            o.y = rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1 : 0;
            o.delta = m > assay_limit ? 1 : 0;
            if (o.delta) o.m = m;
            d.observations.push_back(o);
        }
    }
    return d;
}

}  // namespace fixtures
