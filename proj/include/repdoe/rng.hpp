#pragma once

// Seeded, splittable random number generation.
//
// A generator is identified by (seed, stream). Both words are mixed through
// SplitMix64 into the 256-bit state of a xoshiro256** engine, so every stream
// is reproducible on its own and independent of how work is scheduled across
// threads. Variate generation (uniform, normal, chi-square) is implemented here
// rather than through <random> distributions so sequences are bitwise stable
// across standard library implementations.

#include <array>
#include <cstdint>

namespace repdoe {

struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

class Rng {
public:
    explicit Rng(RngState state);
    Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngState{seed, stream}) {}

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1).
    double uniform();

    // Standard normal (Marsaglia polar method, second variate cached).
    double normal();

    // Chi-square with integer degrees of freedom; df must be >= 1.
    double chi_square(unsigned df);

    // Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
    double gamma(double shape);

private:
    std::array<std::uint64_t, 4> s_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// SplitMix64 finalizer; also used to derive stream ids.
std::uint64_t mix64(std::uint64_t x);

}  // namespace repdoe
