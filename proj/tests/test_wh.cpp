#include "repdoe/design.hpp"
#include "repdoe/errors.hpp"
#include "repdoe/rng.hpp"
#include "repdoe/wh.hpp"

#include <doctest.h>

#include <cmath>

using namespace repdoe;

namespace {

// Row j of run i is mu_i + sd_i * pattern_j with a zero-mean pattern of
// sample variance one, so the run summaries are exactly (mu_i, sd_i^2).
ReplicatedData exact_data(const std::vector<double>& mu, const std::vector<double>& var, std::size_t n) {
    std::vector<double> pattern(n);
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        pattern[j] = static_cast<double>(j) - static_cast<double>(n - 1) / 2.0;
        ss += pattern[j] * pattern[j];
    }
    const double scale = std::sqrt(static_cast<double>(n - 1) / ss);
    std::vector<double> y;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) y.push_back(mu[i] + std::sqrt(var[i]) * scale * pattern[j]);
    return ReplicatedData(y, mu.size(), n);
}

ReplicatedData noisy_data(std::size_t m, std::size_t n, Rng& rng) {
    std::vector<double> y(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const double mu = rng.normal(), sd = 0.5 + rng.uniform();
        for (std::size_t j = 0; j < n; ++j) y[i * n + j] = mu + sd * rng.normal();
    }
    return ReplicatedData(y, m, n);
}

const Design& design3() {
    static const Design d = build_full_factorial({"A", "B", "C"});
    return d;
}

}  // namespace

TEST_CASE("wh_t_statistics: plug-in example") {
    const auto& d = design3();
    std::vector<double> mu(8);
    for (std::size_t i = 0; i < 8; ++i) mu[i] = d.level(i, 0);
    const auto t = wh_t_statistics(exact_data(mu, std::vector<double>(8, 1.0), 3), d);
    CHECK(std::fabs(t[0] - std::sqrt(24.0)) < 1e-12);
    for (std::size_t l = 1; l < 7; ++l) CHECK(std::fabs(t[l]) < 1e-12);
}

TEST_CASE("wh_t_statistics: constant data is degenerate") {
    const ReplicatedData flat(std::vector<double>(24, 2.0), 8, 3);
    CHECK_THROWS_AS(wh_t_statistics(flat, design3()), DegenerateError);
}

TEST_CASE("wh_z_statistics: plug-in example and equal variances") {
    const auto& d = design3();
    std::vector<double> var(8);
    for (std::size_t i = 0; i < 8; ++i) var[i] = std::exp(static_cast<double>(d.level(i, 0)));
    const auto z = wh_z_statistics(exact_data(std::vector<double>(8, 0.0), var, 5), d);
    CHECK(std::fabs(z[0] - 4.0) < 1e-10);
    for (std::size_t l = 1; l < 7; ++l) CHECK(std::fabs(z[l]) < 1e-10);

    const auto z0 = wh_z_statistics(exact_data(std::vector<double>(8, 3.0), std::vector<double>(8, 2.0), 4), d);
    for (double v : z0) CHECK(std::fabs(v) < 1e-10);

    std::vector<double> y(24, 1.0);
    y[3] = 2.0;
    y[4] = 3.0;
    y[5] = 5.0;  // only run 2 varies
    CHECK_THROWS_AS(wh_z_statistics(ReplicatedData(y, 8, 3), d), DegenerateError);
}

TEST_CASE("wh statistics are scale invariant and location shift invariant") {
    Rng rng(5, 5);
    const auto& d = design3();
    for (int rep = 0; rep < 20; ++rep) {
        const auto data = noisy_data(8, 4, rng);
        const double c = 0.1 + 10.0 * rng.uniform();
        const double shift = 5.0 * rng.normal();
        auto scaled = data.responses();
        for (auto& v : scaled) v = c * v + shift;
        const ReplicatedData other(scaled, 8, 4);
        const auto t1 = wh_t_statistics(data, d), t2 = wh_t_statistics(other, d);
        const auto z1 = wh_z_statistics(data, d), z2 = wh_z_statistics(other, d);
        for (std::size_t l = 0; l < 7; ++l) {
            CHECK(std::fabs(t1[l] - t2[l]) < 1e-9 * std::max(1.0, std::fabs(t1[l])));
            CHECK(std::fabs(z1[l] - z2[l]) < 1e-9 * std::max(1.0, std::fabs(z1[l])));
        }
    }
}

TEST_CASE("wh cutoffs: deterministic values") {
    const RngState rng{1, 1};
    const auto ier = wh_location_critical(0.05, 8, 3, 7, ErrorRate::ier, rng);
    CHECK(std::fabs(ier.value - 2.1199052992210112) < 1e-8);
    CHECK_FALSE(ier.samples.has_value());
    CHECK(std::fabs(wh_location_critical(0.05, 16, 4, 15, ErrorRate::ier, rng).value - 2.0106347576242320) < 1e-8);
    CHECK(wh_location_critical(0.999999, 8, 3, 7, ErrorRate::ier, rng).value < 1e-5);
    CHECK(std::fabs(wh_dispersion_critical(0.05, 7, ErrorRate::ier, rng).value - 1.959963984540054) < 1e-9);
    CHECK_THROWS_AS(wh_location_critical(0.0, 8, 3, 7, ErrorRate::ier, rng), DomainError);
    CHECK_THROWS_AS(wh_dispersion_critical(1.0, 7, ErrorRate::ier, rng), DomainError);
}

TEST_CASE("wh cutoffs: experimentwise Monte Carlo values") {
    const RngState rng{42, 7};
    const auto one = wh_location_critical(0.05, 8, 3, 1, ErrorRate::eer, rng, 100000);
    CHECK(std::fabs(one.value - 2.1199052992210112) < 0.02);
    REQUIRE(one.samples.has_value());
    CHECK(*one.samples == 100000);
    CHECK(std::fabs(wh_dispersion_critical(0.05, 1, ErrorRate::eer, rng, 100000).value - 1.96) < 0.01);
    // infinite df: independent coordinates, product rule
    CHECK(std::fabs(wh_dispersion_critical(0.05, 7, ErrorRate::eer, rng, 200000).value - 2.6828014547493244) < 0.02);

    // reproducible for a fixed state
    const auto a = wh_location_critical(0.05, 8, 3, 7, ErrorRate::eer, rng, 20000);
    const auto b = wh_location_critical(0.05, 8, 3, 7, ErrorRate::eer, rng, 20000);
    CHECK(a.value == b.value);

    // experimentwise cutoffs dominate individual ones, and grow with I
    const double ier = wh_location_critical(0.05, 8, 3, 7, ErrorRate::ier, rng).value;
    CHECK(a.value > ier);
    CHECK(wh_location_critical(0.05, 8, 3, 15, ErrorRate::eer, rng, 20000).value > a.value);
}

TEST_CASE("wh decisions: significant iff |t| exceeds the cutoff, monotone in alpha") {
    Rng rng(8, 1);
    const auto& d = design3();
    const RngState state{3, 3};
    for (int rep = 0; rep < 10; ++rep) {
        const auto data = noisy_data(8, 3, rng);
        const auto t = wh_t_statistics(data, d);
        const double c05 = wh_location_critical(0.05, 8, 3, 7, ErrorRate::ier, state).value;
        const double c10 = wh_location_critical(0.10, 8, 3, 7, ErrorRate::ier, state).value;
        CHECK(c10 < c05);
        for (double v : t)
            if (std::fabs(v) > c05) CHECK(std::fabs(v) > c10);
    }
}
