#include "repdoe/errors.hpp"
#include "repdoe/parallel.hpp"
#include "repdoe/rng.hpp"
#include "repdoe/sampling.hpp"
#include "repdoe/special.hpp"

#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace repdoe;

namespace {

// Brute-force trigamma: sum_{k<K} 1/(x+k)^2 plus the Euler-Maclaurin tail.
double trigamma_series(double x) {
    constexpr int K = 200000;
    double s = 0.0;
    for (int k = K - 1; k >= 0; --k) s += 1.0 / ((x + k) * (x + k));
    const double a = x + K;
    return s + 1.0 / a + 1.0 / (2.0 * a * a) + 1.0 / (6.0 * a * a * a);
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("rng: identical (seed, stream) gives identical sequences") {
    Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_c = differs_c || x != c.next_u64();
        differs_d = differs_d || x != d.next_u64();
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("rng: uniform lies in the open unit interval, normal moments") {
    Rng rng(1, 0);
    double lo = 1.0, hi = 0.0;
    std::vector<double> z(1000000);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    for (auto& v : z) v = rng.normal();
    CHECK(std::fabs(mean_of(z)) < 0.003);
    CHECK(std::fabs(var_of(z) - 1.0) < 0.005);
}

TEST_CASE("rng: streams are uncorrelated") {
    Rng a(9, 1), b(9, 2);
    double sxy = 0.0;
    constexpr int N = 200000;
    for (int i = 0; i < N; ++i) sxy += a.normal() * b.normal();
    CHECK(std::fabs(sxy / N) < 0.01);
}

TEST_CASE("sample_chi_square: moments for df = 4") {
    const auto x = sample_chi_square({3, 1}, 4, 1000000);
    CHECK(std::fabs(mean_of(x) - 4.0) < 0.02);
    CHECK(std::fabs(var_of(x) - 8.0) < 0.2);
    CHECK(*std::min_element(x.begin(), x.end()) > 0.0);
}

TEST_CASE("sample_chi_square: log variance for df = 2 matches trigamma(1)") {
    auto x = sample_chi_square({3, 2}, 2, 1000000);
    for (auto& v : x) v = std::log(v);
    CHECK(std::fabs(var_of(x) - trigamma(1.0)) < 0.02);
}

TEST_CASE("sample_chi_square: odd, large and gamma-path df") {
    for (unsigned df : {1u, 3u, 5u, 31u, 45u}) {
        const auto x = sample_chi_square({5, df}, df, 400000);
        CAPTURE(df);
        CHECK(std::fabs(mean_of(x) - df) < 0.02 * df + 0.01);
        CHECK(std::fabs(var_of(x) - 2.0 * df) < 0.05 * 2.0 * df);
    }
    CHECK_THROWS_AS(sample_chi_square({1, 1}, 0, 10), DomainError);
}

TEST_CASE("sampling is bitwise reproducible") {
    CHECK(sample_chi_square({11, 3}, 3, 5000) == sample_chi_square({11, 3}, 3, 5000));
    Eigen::MatrixXd c(2, 2);
    c << 2.0, 0.5, 0.5, 1.0;
    CHECK(sample_mvn_max_abs({4, 4}, c, 5000) == sample_mvn_max_abs({4, 4}, c, 5000));
    CHECK(smm_quantile({2, 2}, 5, 12u, 0.9, 20000) == smm_quantile({2, 2}, 5, 12u, 0.9, 20000));
}

TEST_CASE("normal_quantile against Boost.Math") {
    const boost::math::normal_distribution<> nd;
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(std::fabs(normal_quantile(0.975) - 1.959963984540054) < 1e-9);
    CHECK(std::fabs(normal_quantile(0.025) + 1.959963984540054) < 1e-9);
    for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.49, 0.51, 0.8, 0.97575, 0.999, 1 - 1e-9}) {
        CAPTURE(p);
        CHECK(std::fabs(normal_quantile(p) - boost::math::quantile(nd, p)) < 1e-9);
    }
    CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
    CHECK_THROWS_AS(normal_quantile(-0.1), DomainError);
}

TEST_CASE("normal_cdf against Boost.Math") {
    const boost::math::normal_distribution<> nd;
    for (double x : {-8.0, -3.0, -1.0, 0.0, 0.5, 2.0, 6.0}) CHECK(std::fabs(normal_cdf(x) - boost::math::cdf(nd, x)) < 1e-15);
}

TEST_CASE("trigamma: known values and series oracle") {
    CHECK(std::fabs(trigamma(1.0) - std::numbers::pi * std::numbers::pi / 6.0) < 1e-12);
    CHECK(std::fabs(trigamma(0.5) - std::numbers::pi * std::numbers::pi / 2.0) < 1e-12);
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 5.99, 6.0, 10.0, 37.5}) {
        CAPTURE(x);
        const double ref = trigamma_series(x);
        CHECK(std::fabs(trigamma(x) - ref) / ref < 1e-10);
    }
    CHECK_THROWS_AS(trigamma(0.0), DomainError);
    CHECK_THROWS_AS(trigamma(-1.0), DomainError);
}

TEST_CASE("trigamma: recurrence psi'(x) - psi'(x+1) = 1/x^2") {
    for (double x : {0.5, 1.0, 2.5, 10.0, 100.0}) {
        CAPTURE(x);
        const double lhs = trigamma(x) - trigamma(x + 1.0);
        const double rhs = 1.0 / (x * x);
        CHECK(std::fabs(lhs - rhs) / rhs < 1e-10);
    }
}

TEST_CASE("incomplete beta and t quantiles against Boost.Math") {
    for (double a : {0.5, 2.0, 8.0})
        for (double b : {0.5, 3.0, 40.0})
            for (double x : {0.01, 0.3, 0.77, 0.999}) {
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(x);
                CHECK(std::fabs(incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-12);
            }
    for (double df : {1.0, 2.0, 5.0, 16.0, 48.0, 80.0, 1000.0}) {
        const boost::math::students_t_distribution<> td(df);
        for (double p : {0.6, 0.9, 0.975, 0.995, 0.9999}) {
            CAPTURE(df);
            CAPTURE(p);
            CHECK(std::fabs(student_t_quantile(p, df) - boost::math::quantile(td, p)) < 1e-9);
            CHECK(std::fabs(student_t_quantile(1.0 - p, df) + boost::math::quantile(td, p)) < 1e-9);
        }
    }
    CHECK(std::fabs(two_sided_t_critical(0.05, 16) - 2.119905299) < 1e-8);
    CHECK(two_sided_t_critical(0.999999, 16) < 1e-5);
    CHECK(std::fabs(f1_critical(0.05, 16) - 2.119905299 * 2.119905299) < 1e-7);
}

TEST_CASE("empirical_quantile: order statistic convention") {
    EmpiricalSample s({4, 1, 3, 2}, 4);
    CHECK_THROWS_AS(empirical_quantile(s, 0.5), StateError);
    s.finalize();
    CHECK(std::is_sorted(s.values().begin(), s.values().end()));
    CHECK(empirical_quantile(s, 0.5) == 2.0);

    std::vector<double> hundred(100);
    std::iota(hundred.begin(), hundred.end(), 1.0);
    EmpiricalSample h(hundred, 100);
    h.finalize();
    CHECK(empirical_quantile(h, 0.975) == 98.0);
    CHECK(empirical_quantile(h, 0.999999) == 100.0);
    CHECK(empirical_quantile(h, 1e-9) == 1.0);

    // nondecreasing in p
    double prev = -1.0;
    for (double p = 0.001; p < 1.0; p += 0.00731) {
        const double q = empirical_quantile(h, p);
        CHECK(q >= prev);
        prev = q;
    }
    CHECK_THROWS_AS(empirical_quantile(EmpiricalSample{}, 0.5), StateError);
    CHECK_THROWS_AS(empirical_quantile(h, 1.0), DomainError);

    EmpiricalSample wrong({1, 2, 3}, 4);
    CHECK_THROWS_AS(wrong.finalize(), StateError);
}

TEST_CASE("select_quantile agrees with the sorted sample") {
    Rng rng(5, 5);
    std::vector<double> v(9999);
    for (auto& x : v) x = rng.normal();
    EmpiricalSample s(v, v.size());
    s.finalize();
    for (double p : {0.01, 0.5, 0.95, 0.975}) {
        auto copy = v;
        CHECK(select_quantile(copy, p) == empirical_quantile(s, p));
    }
}

TEST_CASE("sample_mvn_max_abs: examples") {
    Eigen::MatrixXd one(1, 1);
    one << 1.0;
    CHECK(std::fabs(mean_of(sample_mvn_max_abs({1, 1}, one, 1000000)) - std::sqrt(2.0 / std::numbers::pi)) < 0.003);

    const auto two = sample_mvn_max_abs({1, 2}, Eigen::MatrixXd::Identity(2, 2), 1000000);
    const double frac = std::count_if(two.begin(), two.end(), [](double x) { return x <= 1.96; }) / 1e6;
    CHECK(std::fabs(frac - 0.95 * 0.95) < 0.002);

    const auto zero = sample_mvn_max_abs({1, 3}, Eigen::MatrixXd::Zero(3, 3), 1000);
    CHECK(std::all_of(zero.begin(), zero.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("sample_mvn_max_abs: diagonal scaling is exact") {
    const double c = 1.7;
    const auto base = sample_mvn_max_abs({8, 8}, Eigen::MatrixXd::Identity(4, 4), 2000);
    const auto scaled = sample_mvn_max_abs({8, 8}, c * c * Eigen::MatrixXd::Identity(4, 4), 2000);
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(scaled[i] == doctest::Approx(c * base[i]).epsilon(1e-15));
}

TEST_CASE("sample_mvn_max_abs: correlated covariance and errors") {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, 0.999999, 0.999999, 1.0;
    const auto x = sample_mvn_max_abs({2, 2}, c, 200000);
    // nearly identical coordinates: max |U| behaves like |N(0,1)|
    CHECK(std::fabs(mean_of(x) - std::sqrt(2.0 / std::numbers::pi)) < 0.01);

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(MvnSampler{bad}, MatrixError);
    CHECK_THROWS_AS(MvnSampler{Eigen::MatrixXd(2, 3)}, MatrixError);

    // tiny negative eigenvalue from rounding is clamped
    Eigen::MatrixXd rank1(2, 2);
    rank1 << 1.0, 1.0, 1.0, 1.0 - 1e-12;
    CHECK_NOTHROW(MvnSampler{rank1});
}

TEST_CASE("smm_quantile: reductions") {
    CHECK(std::fabs(smm_quantile({1, 1}, 1, std::nullopt, 0.95, 200000) - 1.959964) < 0.01);
    CHECK(std::fabs(smm_quantile({1, 2}, 1, 16u, 0.95, 200000) - 2.119905) < 0.02);
    CHECK(std::fabs(smm_quantile({1, 3}, 2, std::nullopt, 0.9025, 200000) - 1.959964) < 0.02);
    CHECK_THROWS_AS(smm_quantile({1, 1}, 0, std::nullopt, 0.95, 20000), DomainError);
    CHECK_THROWS_AS(smm_quantile({1, 1}, 3, 0u, 0.95, 20000), DomainError);
    CHECK_THROWS_AS(smm_quantile({1, 1}, 3, 5u, 0.95, 100), DomainError);
}

TEST_CASE("smm_quantile: nondecreasing in p and in I") {
    double prev = 0.0;
    for (double p : {0.5, 0.8, 0.9, 0.95, 0.99}) {
        const double q = smm_quantile({6, 6}, 7, 16u, p, 100000);
        CHECK(q >= prev);
        prev = q;
    }
    prev = 0.0;
    for (unsigned I : {1u, 2u, 3u, 7u, 15u}) {
        const double q = smm_quantile({6, 7}, I, 16u, 0.95, 100000);
        CHECK(q >= prev - 0.02);
        prev = q;
    }
}

TEST_CASE("fill_blocked output does not depend on the worker count") {
    const auto draw = [] {
        return [](Rng& g, double* dst) {
            dst[0] = g.normal();
            dst[1] = g.chi_square(3);
        };
    };
    std::vector<double> one, four;
    fill_blocked(one, 3 * kMcBlockSize + 17, 2, {99, 1}, 1, draw);
    fill_blocked(four, 3 * kMcBlockSize + 17, 2, {99, 1}, 4, draw);
    CHECK(one == four);
    CHECK(smm_quantile({3, 3}, 7, 20u, 0.95, 50000, 1) == smm_quantile({3, 3}, 7, 20u, 0.95, 50000, 3));
}
