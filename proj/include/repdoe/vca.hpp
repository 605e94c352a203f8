#pragma once

// Variyath-Chenouri-Abraham jackknife F tests (IER only).
//
// The log-variance measure uses the plain delete-one jackknife. The small-n
// adjustment factor of the original method is not applied. The plain
// jackknife overstates the variance of log s^2 for small n, so the dispersion
// test runs below its nominal level there.

#include "repdoe/design.hpp"

#include <span>
#include <vector>

namespace repdoe {

enum class Measure { mean, log_variance };

// (n-1)/n * sum_j (c(y_(j)) - c_bar)^2 over the n delete-one subsamples.
double jackknife_variance(std::span<const double> row, Measure measure);

struct JackknifeResult {
    Measure measure = Measure::mean;
    std::vector<double> per_run;
    double pooled = 0.0;  // arithmetic mean of per_run
};

JackknifeResult pooled_jackknife(const ReplicatedData& data, Measure measure);

// F_l = m * theta_l^2 / V_pja for theta = alpha (location) or gamma (dispersion).
std::vector<double> vca_f_statistics(const ReplicatedData& data, const Design& design, Model model);

// (1 - alpha) quantile of F(1, m(n-1)).
double vca_critical(double alpha, std::size_t runs, std::size_t replicates);

}  // namespace repdoe
