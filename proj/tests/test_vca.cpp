#include "repdoe/design.hpp"
#include "repdoe/errors.hpp"
#include "repdoe/rng.hpp"
#include "repdoe/vca.hpp"
#include "repdoe/wh.hpp"

#include <doctest.h>

#include <cmath>

using namespace repdoe;

namespace {

ReplicatedData noisy_data(std::size_t m, std::size_t n, Rng& rng) {
    std::vector<double> y(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const double mu = 2.0 * rng.normal(), sd = 0.2 + 2.0 * rng.uniform();
        for (std::size_t j = 0; j < n; ++j) y[i * n + j] = mu + sd * rng.normal();
    }
    return ReplicatedData(y, m, n);
}

double sample_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

// Direct enumeration of the delete-one subsamples.
double brute_jackknife_log_variance(const std::vector<double>& row) {
    const std::size_t n = row.size();
    std::vector<double> c;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> sub;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) sub.push_back(row[k]);
        c.push_back(std::log(sample_variance(sub)));
    }
    double bar = 0.0;
    for (double v : c) bar += v / static_cast<double>(n);
    double ss = 0.0;
    for (double v : c) ss += (v - bar) * (v - bar);
    return static_cast<double>(n - 1) / static_cast<double>(n) * ss;
}

}  // namespace

TEST_CASE("jackknife_variance: mean examples") {
    const std::vector<double> row{1, 2, 3};
    CHECK(std::fabs(jackknife_variance(row, Measure::mean) - 1.0 / 3.0) < 1e-15);
    const std::vector<double> flat{4, 4, 4, 4};
    CHECK(jackknife_variance(flat, Measure::mean) == 0.0);
    const std::vector<double> single{1.0};
    CHECK_THROWS_AS(jackknife_variance(single, Measure::mean), ValidationError);
}

TEST_CASE("jackknife_variance: log-variance example (1, 2, 4)") {
    // deleted subsample variances: drop 1 -> 2, drop 2 -> 4.5, drop 4 -> 0.5
    const double c[3] = {std::log(2.0), std::log(4.5), std::log(0.5)};
    const double bar = (c[0] + c[1] + c[2]) / 3.0;
    const double expected =
        2.0 / 3.0 * ((c[0] - bar) * (c[0] - bar) + (c[1] - bar) * (c[1] - bar) + (c[2] - bar) * (c[2] - bar));
    const std::vector<double> row{1, 2, 4};
    CHECK(std::fabs(jackknife_variance(row, Measure::log_variance) - expected) < 1e-14);
    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS(jackknife_variance(two, Measure::log_variance), ValidationError);
    const std::vector<double> tied{1, 1, 3};  // dropping 3 leaves (1, 1)
    CHECK_THROWS_AS(jackknife_variance(tied, Measure::log_variance), DegenerateError);
}

TEST_CASE("jackknife of the mean equals s^2 / n") {
    Rng rng(11, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + rep % 9;
        std::vector<double> row(n);
        for (auto& v : row) v = 10.0 * rng.normal() + 3.0;
        const double expected = sample_variance(row) / static_cast<double>(n);
        CHECK(std::fabs(jackknife_variance(row, Measure::mean) - expected) <= 1e-12 * expected);
    }
}

TEST_CASE("jackknife of the log-variance matches enumeration") {
    Rng rng(12, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 3 + rep % 6;
        std::vector<double> row(n);
        for (auto& v : row) v = rng.normal();
        const double expected = brute_jackknife_log_variance(row);
        CHECK(std::fabs(jackknife_variance(row, Measure::log_variance) - expected) <= 1e-10 * std::max(1.0, expected));
    }
}

TEST_CASE("pooled_jackknife: per-run values, pooled mean and degenerate runs") {
    Rng rng(13, 0);
    const auto data = noisy_data(8, 4, rng);
    const auto jk = pooled_jackknife(data, Measure::mean);
    double mean = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(jk.per_run[i] >= 0.0);
        CHECK(std::fabs(jk.per_run[i] - data.variances()[i] / 4.0) < 1e-12);
        mean += jk.per_run[i] / 8.0;
    }
    CHECK(std::fabs(jk.pooled - mean) < 1e-14);

    std::vector<double> y(24);
    for (std::size_t k = 0; k < 24; ++k) y[k] = static_cast<double>(k * k % 7);
    y[6] = y[7] = 1.0;  // run 3 has a tied pair
    try {
        pooled_jackknife(ReplicatedData(y, 8, 3), Measure::log_variance);
        FAIL("expected DegenerateError");
    } catch (const DegenerateError& e) {
        CHECK(std::find(e.runs().begin(), e.runs().end(), 2u) != e.runs().end());
    }
}

TEST_CASE("location F equals t squared") {
    Rng rng(14, 0);
    const auto d8 = build_full_factorial({"A", "B", "C"});
    const auto d16 = build_full_factorial({"A", "B", "C", "D"});
    for (int rep = 0; rep < 50; ++rep) {
        const bool big = rep % 2 == 1;
        const auto& d = big ? d16 : d8;
        const auto data = noisy_data(d.runs(), 3 + rep % 4, rng);
        const auto f = vca_f_statistics(data, d, Model::location);
        const auto t = wh_t_statistics(data, d);
        for (std::size_t l = 0; l < f.size(); ++l)
            CHECK(std::fabs(f[l] - t[l] * t[l]) <= 1e-10 * std::max(1e-300, t[l] * t[l]));
    }
}

TEST_CASE("constant run means give F = 0") {
    std::vector<double> y;
    for (std::size_t i = 0; i < 8; ++i)
        for (double v : {-1.0, 0.0, 1.0}) y.push_back(5.0 + static_cast<double>(i + 1) * v);
    const auto f = vca_f_statistics(ReplicatedData(y, 8, 3), build_full_factorial({"A", "B", "C"}), Model::location);
    for (double v : f) CHECK(std::fabs(v) < 1e-20);
}

TEST_CASE("dispersion F matches a brute-force assembly") {
    Rng rng(15, 0);
    const auto d = build_full_factorial({"A", "B", "C"});
    const auto data = noisy_data(8, 5, rng);
    // mean square and pooled jackknife variance assembled separately
    std::vector<double> z(8);
    double pooled = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const std::vector<double> row(data.row(i).begin(), data.row(i).end());
        z[i] = std::log(sample_variance(row));
        pooled += brute_jackknife_log_variance(row) / 8.0;
    }
    const auto f = vca_f_statistics(data, d, Model::dispersion);
    for (std::size_t l = 0; l < 7; ++l) {
        double gamma = 0.0;
        for (std::size_t i = 0; i < 8; ++i) gamma += d.level(i, l) * z[i] / 8.0;
        const double expected = 8.0 * gamma * gamma / pooled;
        CHECK(std::fabs(f[l] - expected) <= 1e-10 * std::max(1e-12, expected));
    }
}

TEST_CASE("vca_critical is the squared two-sided t cutoff") {
    CHECK(std::fabs(vca_critical(0.05, 8, 3) - 4.4939984776653255) < 1e-7);
    CHECK(std::fabs(vca_critical(0.05, 16, 6) - 3.9603524206149494) < 1e-7);
    CHECK(vca_critical(0.9999999, 8, 3) < 1e-10);
    CHECK(vca_critical(0.01, 8, 3) > vca_critical(0.05, 8, 3));
    CHECK_THROWS_AS(vca_critical(1.5, 8, 3), DomainError);
}

TEST_CASE("VCA and WH individual location decisions agree") {
    Rng rng(16, 0);
    const auto d = build_full_factorial({"A", "B", "C"});
    const RngState unused{0, 0};
    for (int rep = 0; rep < 200; ++rep) {
        // moderate signal so both decisions occur
        std::vector<double> y(24);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 3; ++j) y[i * 3 + j] = 0.6 * d.level(i, 0) + 0.4 * d.level(i, 4) + rng.normal();
        const ReplicatedData data(y, 8, 3);
        for (double alpha : {0.01, 0.05, 0.2}) {
            const auto f = vca_f_statistics(data, d, Model::location);
            const auto t = wh_t_statistics(data, d);
            const double cf = vca_critical(alpha, 8, 3);
            const double ct = wh_location_critical(alpha, 8, 3, 7, ErrorRate::ier, unused).value;
            for (std::size_t l = 0; l < 7; ++l) {
                // skip ties within rounding of the boundary
                if (std::fabs(std::fabs(t[l]) - ct) < 1e-9) continue;
                CHECK((f[l] > cf) == (std::fabs(t[l]) > ct));
            }
        }
    }
}
