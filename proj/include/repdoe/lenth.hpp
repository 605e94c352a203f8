#pragma once

// Lenth's pseudo standard error test. The same procedure applies to location
// and dispersion effect estimates; cutoffs come from simulating the null
// statistic under I iid N(0,1) estimates.

#include "repdoe/report.hpp"
#include "repdoe/rng.hpp"

#include <span>
#include <vector>

namespace repdoe {

inline constexpr std::size_t kDefaultLenthSamples = 100000;

struct PseResult {
    double s0 = 0.0;             // 1.5 * median |estimate|
    double pse = 0.0;            // 1.5 * median of |estimate| < 2.5 s0
    std::size_t retained = 0;
    std::vector<double> t;       // estimate / pse
};

// Median with the even-count convention (mean of the two central values).
double median(std::vector<double> values);

// Requires at least two estimates. DegenerateError when pse is zero or no
// estimate survives the 2.5 s0 trimming.
PseResult lenth_pse(std::span<const double> estimates);

// IER: (1 - alpha) quantile of |t_Lenth| pooled over all I coordinates.
// EER: (1 - alpha) quantile of max_l |t_Lenth,l|.
CriticalValue lenth_critical(double alpha, std::size_t effects, ErrorRate rate, RngState rng,
                             std::size_t samples = kDefaultLenthSamples, unsigned workers = 1);

}  // namespace repdoe
