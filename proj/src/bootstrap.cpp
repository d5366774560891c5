#include "censmed/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "censmed/error.hpp"
#include "censmed/parallel.hpp"
#include "censmed/random.hpp"

namespace censmed {

std::uint64_t replicate_seed(std::uint64_t seed, int b) {
    return derive_seed(seed, {static_cast<std::uint64_t>(b), 1});
}

std::vector<std::size_t> bootstrap_indices(const Dataset& data, std::uint64_t seed, int b, bool stratified) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b), 0}));
    const std::size_t n = data.size();
    std::vector<std::size_t> out;
    out.reserve(n);
    if (!stratified) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::size_t>(rng.below(n)));
        return out;
    }
    for (int arm = 0; arm <= 1; ++arm) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (data.observations[i].a == arm) members.push_back(i);
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            out.push_back(members[static_cast<std::size_t>(rng.below(members.size()))]);
        }
    }
    return out;
}

double percentile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw Error(ErrorKind::InvalidArgument, "percentile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<BootstrapResult> bootstrap_ci(const Dataset& data, const VectorEstimator& estimator,
                                          const BootstrapOptions& opts) {
    if (opts.B < 10) throw Error(ErrorKind::InvalidArgument, "bootstrap needs B >= 10");
    if (!(opts.level > 0.0 && opts.level < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "confidence level must lie in (0, 1)");
    }
    const std::vector<double> point = estimator(data, opts.seed);
    const std::size_t n_stats = point.size();

    std::vector<std::optional<std::vector<double>>> reps(static_cast<std::size_t>(opts.B));
    parallel_for(reps.size(), opts.threads, [&](std::size_t b) {
        const auto idx = bootstrap_indices(data, opts.seed, static_cast<int>(b), opts.stratified);
        Dataset resample;
        resample.assay_limit = data.assay_limit;
        resample.covariate_names = data.covariate_names;
        resample.observations.reserve(idx.size());
        for (std::size_t i : idx) resample.observations.push_back(data.observations[i]);
        try {
            std::vector<double> v = estimator(resample, replicate_seed(opts.seed, static_cast<int>(b)));
            const bool ok = v.size() == n_stats &&
                            std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
            if (ok) reps[b] = std::move(v);
        } catch (const std::exception&) {
            // counted as a failed replicate below
        }
    });

    const int n_failed = static_cast<int>(std::count(reps.begin(), reps.end(), std::nullopt));
    if (n_failed * 5 > opts.B) {
        std::ostringstream os;
        os << n_failed << " of " << opts.B << " bootstrap replicates failed";
        throw Error(ErrorKind::TooManyFailures, os.str());
    }
    std::vector<BootstrapResult> out(n_stats);
    const double tail = 0.5 * (1.0 - opts.level);
    for (std::size_t s = 0; s < n_stats; ++s) {
        BootstrapResult& r = out[s];
        r.point = point[s];
        r.level = opts.level;
        r.B = opts.B;
        r.n_failed = n_failed;
        for (const auto& rep : reps) {
            if (rep) r.replicates.push_back((*rep)[s]);
        }
        std::vector<double> sorted = r.replicates;
        std::sort(sorted.begin(), sorted.end());
        r.lower = percentile(sorted, tail);
        r.upper = percentile(sorted, 1.0 - tail);
    }
    return out;
}

BootstrapResult bootstrap_ci(const Dataset& data, const ScalarEstimator& estimator, const BootstrapOptions& opts) {
    const VectorEstimator wrapped = [&](const Dataset& d, std::uint64_t seed) {
        return std::vector<double>{estimator(d, seed)};
    };
    return bootstrap_ci(data, wrapped, opts).front();
}

}  // namespace censmed
