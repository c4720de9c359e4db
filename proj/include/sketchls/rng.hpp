#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sketchls {

/// Name and version of the random stream recorded in run manifests. Bump the
/// suffix whenever any draw below changes.
inline constexpr std::string_view kPrngAlgorithm = "mt19937_64/u53/box-muller/v1";

// =============================================================================
/// Seeded random stream. Engine is std::mt19937_64, whose output sequence is
/// fixed by the standard; every derived draw (uniforms, normals, integers) is
/// implemented here so streams are identical across standard libraries.
///
/// An Rng is single-owner. Parallel work derives its own stream with
/// `for_replication` or `fork`.
///
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Stream for replication r of a run seeded with `master`: seed = master ⊕ r.
    static Rng for_replication(std::uint64_t master, std::uint64_t r) { return Rng(master ^ r); }

    /// Independent child stream; children with distinct tags do not overlap in
    /// practice (splitmix64 scrambled seeds).
    Rng fork(std::uint64_t tag) const;

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, bound), bound ≥ 1, by rejection.
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal by the Box–Muller transform; the second variate of each
    /// pair is cached.
    double normal();
    /// ±1 with equal probability.
    double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }
    /// χ² with integer degrees of freedom, as a sum of squared normals.
    double chi_squared(int dof);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sketchls
