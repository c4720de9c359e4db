#include "sketchls/rng.hpp"

#include <cmath>
#include <numbers>

#include "sketchls/error.hpp"

namespace sketchls {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng Rng::fork(std::uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag))); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorKind::InvalidArgument, "Rng::below(0)");
    // Reject the 2^64 mod bound smallest outputs so x % bound is unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x = engine_();
    while (x < threshold) x = engine_();
    return x % bound;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double Rng::chi_squared(int dof) {
    double s = 0.0;
    for (int k = 0; k < dof; ++k) {
        const double z = normal();
        s += z * z;
    }
    return s;
}

}  // namespace sketchls
