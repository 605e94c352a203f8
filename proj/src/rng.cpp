#include "repdoe/rng.hpp"

#include "repdoe/errors.hpp"

#include <cmath>

namespace repdoe {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr unsigned kProductMethodMaxDf = 30;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(RngState state) {
    // Seed and stream go through separate mixing rounds so (a, b) and (b, a)
    // land in unrelated states.
    std::uint64_t sm = mix64(state.seed) ^ mix64(state.stream ^ 0x6a09e667f3bcc909ULL);
    for (auto& word : s_) {
        sm += 0x9e3779b97f4a7c15ULL;
        word = mix64(sm);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost to shape + 1, then scale by U^(1/shape).
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::chi_square(unsigned df) {
    if (df == 0) throw DomainError("chi_square: degrees of freedom must be >= 1");
    if (df > kProductMethodMaxDf) return 2.0 * gamma(0.5 * df);
    // chi2_{2k} = -2 log(U_1 ... U_k); an odd df adds one squared normal.
    double prod = 1.0;
    for (unsigned k = 0; k < df / 2; ++k) prod *= uniform();
    double x = (df >= 2) ? -2.0 * std::log(prod) : 0.0;
    if (df % 2 == 1) {
        const double z = normal();
        x += z * z;
    }
    return x;
}

}  // namespace repdoe
