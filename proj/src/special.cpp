#include "repdoe/special.hpp"

#include "repdoe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace repdoe {

namespace {

// Lower-tail quantile for 0 < p <= 0.5 (result <= 0).
double lower_normal_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // Halley refinement.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double student_t_density(double t, double df) {
    const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                            0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(t * t / df));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    // 1 - p is exact for p >= 0.5, so the upper half reflects without loss.
    return p < 0.5 ? lower_normal_quantile(p) : -lower_normal_quantile(1.0 - p);
}

double trigamma(double x) {
    if (!(x > 0.0)) throw DomainError("trigamma: argument must be positive");
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}, k = 1..6
    const double series =
        inv2 * inv *
        (1.0 / 6.0 -
         inv2 * (1.0 / 30.0 -
                 inv2 * (1.0 / 42.0 -
                         inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0))))));
    return acc + inv + 0.5 * inv2 + series;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete_beta: a and b must be positive");
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("student_t_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("student_t_quantile: p must lie in (0, 1)");
    if (!(df > 0.0)) throw DomainError("student_t_quantile: df must be positive");
    if (p == 0.5) return 0.0;
    const bool upper = p > 0.5;
    const double tail2 = 2.0 * (upper ? 1.0 - p : p);  // two-sided tail mass

    // I_x(df/2, 1/2) is increasing in x = df / (df + t^2); bisect to full precision.
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (incomplete_beta(0.5 * df, 0.5, mid) < tail2)
            lo = mid;
        else
            hi = mid;
    }
    const double x = 0.5 * (lo + hi);
    double t = std::sqrt(df * (1.0 - x) / x);

    // Newton polish on the upper-tail equation.
    const double target = 1.0 - 0.5 * tail2;
    for (int it = 0; it < 3; ++it) {
        const double dens = student_t_density(t, df);
        if (!(dens > 0.0)) break;
        const double step = (student_t_cdf(t, df) - target) / dens;
        if (!std::isfinite(step)) break;
        t -= step;
        if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(t))) break;
    }
    return upper ? t : -t;
}

double two_sided_t_critical(double alpha, double df) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("two_sided_t_critical: alpha must lie in (0, 1)");
    return student_t_quantile(1.0 - 0.5 * alpha, df);
}

double f1_critical(double alpha, double df) {
    const double t = two_sided_t_critical(alpha, df);
    return t * t;
}

}  // namespace repdoe
