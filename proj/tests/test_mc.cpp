#include "repdoe/design.hpp"
#include "repdoe/errors.hpp"
#include "repdoe/mc.hpp"
#include "repdoe/sampling.hpp"

#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <numeric>

using namespace repdoe;

namespace {

double t_quantile(double p, double df) {
    return boost::math::quantile(boost::math::students_t(df), p);
}

double z_quantile(double p) {
    return boost::math::quantile(boost::math::normal(), p);
}

VarianceWeights equal_weights(std::size_t m) {
    return variance_weights(std::vector<double>(m, 1.0));
}

const Design& design(std::size_t k) {
    static const Design d3 = build_full_factorial({"A", "B", "C"});
    static const Design d4 = build_full_factorial({"A", "B", "C", "D"});
    return k == 3 ? d3 : d4;
}

}  // namespace

TEST_CASE("variance_weights: examples and errors") {
    auto w = variance_weights(std::vector<double>{1, 1, 1, 1});
    for (double v : w.rho2) CHECK(v == 0.25);
    w = variance_weights(std::vector<double>{3, 1});
    CHECK(w.rho2 == std::vector<double>{0.75, 0.25});
    w = variance_weights(std::vector<double>{0, 2, 2, 0});
    CHECK(w.rho2 == std::vector<double>{0, 0.5, 0.5, 0});
    CHECK_THROWS_AS(variance_weights(std::vector<double>{0, 0, 0}), DegenerateError);
    CHECK_THROWS_AS(variance_weights(std::vector<double>{1, -1}), ValidationError);
}

TEST_CASE("variance_weights: normalization and scale invariance") {
    Rng rng(31, 0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> s2(16), scaled(16);
        const double c = std::ldexp(1.0, static_cast<int>(rep % 21) - 10);  // powers of two scale exactly
        for (std::size_t i = 0; i < 16; ++i) {
            s2[i] = rng.chi_square(3) / 3.0;
            scaled[i] = c * s2[i];
        }
        const auto a = variance_weights(s2), b = variance_weights(scaled);
        const double sum = std::accumulate(a.rho2.begin(), a.rho2.end(), 0.0);
        CHECK(std::fabs(sum - 1.0) < 1e-12);
        for (double v : a.rho2) CHECK(v >= 0.0);
        CHECK(a.rho2 == b.rho2);
    }
    // arbitrary positive scale: equal to rounding
    std::vector<double> s2{0.3, 1.7, 2.2, 0.9}, scaled(4);
    for (std::size_t i = 0; i < 4; ++i) scaled[i] = 3.7 * s2[i];
    const auto a = variance_weights(s2), b = variance_weights(scaled);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(a.rho2[i] - b.rho2[i]) < 1e-15);
}

TEST_CASE("homogeneous weights reduce to the central t cutoff") {
    const std::pair<std::size_t, std::size_t> cases[] = {{8, 3}, {8, 6}, {16, 4}};
    std::uint64_t stream = 1;
    for (const auto& [m, n] : cases) {
        const auto r = mc_location_ier_critical(equal_weights(m), n, 0.05, 200000, RngState{2024, stream++});
        const double oracle = t_quantile(0.975, static_cast<double>(m * (n - 1)));
        CHECK(std::fabs(r.critical - oracle) < 0.02);
        CHECK(r.samples == 200000);
        CHECK(r.standard_error > 0.0);
        CHECK(r.standard_error < 0.02);
    }
}

TEST_CASE("a single dominant weight gives the t cutoff with n - 1 df") {
    std::vector<double> s2(8, 0.0);
    s2[0] = 1.0;
    const auto r = mc_location_ier_critical(variance_weights(s2), 3, 0.05, 200000, RngState{5, 5});
    CHECK(std::fabs(r.critical - t_quantile(0.975, 2.0)) < 0.1);
}

TEST_CASE("mc location cutoffs: monotone in alpha, EER dominates IER") {
    Rng rng(33, 0);
    std::vector<double> s2(8);
    for (auto& v : s2) v = std::exp(rng.normal());
    const auto w = variance_weights(s2);
    const RngState state{77, 1};
    const double c05 = mc_location_ier_critical(w, 3, 0.05, 50000, state).critical;
    const double c50 = mc_location_ier_critical(w, 3, 0.5, 50000, state).critical;
    const double c01 = mc_location_ier_critical(w, 3, 0.01, 50000, state).critical;
    CHECK(c50 < c05);
    CHECK(c05 < c01);
    CHECK(c50 > 0.0);
    const double e05 = mc_location_eer_critical(w, design(3), 3, 0.05, 50000, state).critical;
    const double e01 = mc_location_eer_critical(w, design(3), 3, 0.01, 50000, state).critical;
    CHECK(e05 >= c05);
    CHECK(e01 > e05);

    CHECK_THROWS_AS(mc_location_ier_critical(w, 3, 0.05, 500, state), DomainError);
    CHECK_THROWS_AS(mc_location_ier_critical(w, 3, 1.0, 50000, state), DomainError);
}

TEST_CASE("homogeneous EER cutoff agrees with an independent SMM quantile") {
    const auto r = mc_location_eer_critical(equal_weights(8), design(3), 3, 0.05, 200000, RngState{9, 1});
    const double smm = smm_quantile(RngState{9, 2}, 7, 16u, 0.95, 200000);
    CHECK(std::fabs(r.critical - smm) < 0.03);
}

TEST_CASE("EER with one effect matches the IER cutoff") {
    Design single({"A", "B"}, {-1, -1, 1, -1, -1, 1, 1, 1}, {{0}});
    Rng rng(34, 0);
    std::vector<double> s2(4);
    for (auto& v : s2) v = 0.5 + rng.uniform();
    const auto w = variance_weights(s2);
    const double e = mc_location_eer_critical(w, single, 4, 0.05, 200000, RngState{1, 1}).critical;
    const double i = mc_location_ier_critical(w, 4, 0.05, 200000, RngState{1, 2}).critical;
    CHECK(std::fabs(e - i) < 0.02);
}

TEST_CASE("mc cutoffs do not depend on the worker count or response scale") {
    Rng rng(35, 0);
    std::vector<double> s2(16), scaled(16);
    for (std::size_t i = 0; i < 16; ++i) {
        s2[i] = std::exp(rng.normal());
        scaled[i] = 4.0 * s2[i];
    }
    const RngState state{12, 34};
    const auto w = variance_weights(s2);
    const auto ws = variance_weights(scaled);
    const double a = mc_location_ier_critical(w, 4, 0.05, 30000, state, 1).critical;
    CHECK(mc_location_ier_critical(w, 4, 0.05, 30000, state, 3).critical == a);
    CHECK(mc_location_ier_critical(ws, 4, 0.05, 30000, state, 1).critical == a);
    const double e = mc_location_eer_critical(w, design(4), 4, 0.05, 20000, state, 1).critical;
    CHECK(mc_location_eer_critical(w, design(4), 4, 0.05, 20000, state, 2).critical == e);
}

TEST_CASE("a_n and log-variance rows") {
    const double an[] = {1.283, 1.184, 1.136, 1.107, 1.088, 1.075, 1.066, 1.058};
    const double exact[] = {1.645, 0.935, 0.645, 0.490, 0.395, 0.330, 0.284, 0.249};
    const double approx[] = {1.000, 0.667, 0.500, 0.400, 0.333, 0.286, 0.250, 0.222};
    for (unsigned n = 3; n <= 10; ++n) {
        CHECK(std::fabs(a_n(n) - an[n - 3]) < 5e-4);
        CHECK(std::fabs(exact_log_variance(n) - exact[n - 3]) < 5e-4);
        CHECK(std::fabs(approximate_log_variance(n) - approx[n - 3]) < 5e-4);
        CHECK(a_n(n) > 1.0);
        if (n > 3) CHECK(a_n(n) < a_n(n - 1));
    }
    CHECK(a_n(2) > a_n(3));
    CHECK(std::fabs(a_n(2000) - 1.0) < 1e-3);
}

TEST_CASE("dispersion closed forms against independent special functions") {
    for (unsigned n = 2; n <= 12; ++n) {
        const double exact = boost::math::trigamma((n - 1) / 2.0);
        CHECK(std::fabs(exact_log_variance(n) - exact) < 1e-12);
        const double an_oracle = std::sqrt(exact / (2.0 / (n - 1)));
        CHECK(std::fabs(a_n(n) - an_oracle) < 1e-12);
        for (double alpha : {0.01, 0.05, 0.1}) {
            CHECK(std::fabs(disp_ier_critical(alpha, n) - an_oracle * z_quantile(1.0 - alpha / 2.0)) < 1e-10);
            for (std::size_t i : {1u, 7u, 15u}) {
                const double p = 0.5 + 0.5 * std::pow(1.0 - alpha, 1.0 / static_cast<double>(i));
                CHECK(std::fabs(disp_eer_critical(alpha, n, i) - an_oracle * z_quantile(p)) < 1e-10);
            }
        }
    }
    CHECK(std::fabs(disp_ier_critical(0.05, 3) - 2.515) < 0.002);
    CHECK(std::fabs(disp_ier_critical(0.05, 10) - 2.074) < 0.002);
    CHECK(std::fabs(disp_eer_critical(0.05, 3, 7) - 3.4408) < 1e-4);
    CHECK(std::fabs(disp_ier_critical(0.05, 5000) - 1.959964) < 1e-3);
    for (unsigned n = 3; n <= 6; ++n) {
        CHECK(disp_eer_critical(0.05, n, 1) == doctest::Approx(disp_ier_critical(0.05, n)).epsilon(1e-14));
        CHECK(disp_eer_critical(0.05, n, 15) > disp_eer_critical(0.05, n, 7));
        CHECK(disp_eer_critical(0.05, n, 7) > disp_eer_critical(0.05, n, 3));
    }
    CHECK_THROWS_AS(disp_ier_critical(0.05, 1), DomainError);
    CHECK_THROWS_AS(disp_eer_critical(0.05, 3, 0), DomainError);
}
