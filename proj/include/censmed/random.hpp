#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace censmed {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derive an independent stream seed from a base seed and a path of
/// integer labels (replicate index, method id, ...).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Seedable generator. mt19937_64 is fully specified by the standard, and
/// the conversions below are hand-written, so streams are identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal by inversion.
    double normal();
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace censmed
