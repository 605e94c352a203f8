#pragma once

// Deterministic special functions: normal CDF/quantile, trigamma, the
// regularized incomplete beta function and Student t / F(1, df) quantiles.

namespace repdoe {

double normal_cdf(double x);

// Inverse standard normal CDF. Acklam's rational approximation followed by one
// Halley step against erfc; absolute error well below 1e-12 on (0, 1).
// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

// psi'(x) for x > 0: upward recurrence until x >= 10, then the asymptotic series
// through the B_12 term.
double trigamma(double x);

// I_x(a, b), continued fraction evaluated with the modified Lentz method.
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

// p-quantile of Student t with df > 0 degrees of freedom.
double student_t_quantile(double p, double df);

// t_{df, 1 - alpha/2}: the two-sided level-alpha cutoff. Tends to 0 as alpha -> 1.
double two_sided_t_critical(double alpha, double df);

// (1 - alpha) quantile of F(1, df), i.e. the squared two-sided t cutoff.
double f1_critical(double alpha, double df);

}  // namespace repdoe
