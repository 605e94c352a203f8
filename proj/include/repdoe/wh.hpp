#pragma once

// Wu-Hamada tests: t-type statistics for the location model, z-type
// statistics for the dispersion model, with their classical cutoffs.

#include "repdoe/design.hpp"
#include "repdoe/report.hpp"
#include "repdoe/rng.hpp"

#include <vector>

namespace repdoe {

inline constexpr std::size_t kDefaultSmmSamples = 200000;

// t_l = alpha_l / sqrt(sum s_i^2 / (m^2 n)). DegenerateError if every s_i^2 is zero.
std::vector<double> wh_t_statistics(const ReplicatedData& data, const Design& design);

// z_l = gamma_l / sqrt(2 / (m (n - 1))). DegenerateError if any s_i^2 is zero.
std::vector<double> wh_z_statistics(const ReplicatedData& data, const Design& design);

// IER: t_{m(n-1), 1-alpha/2}, no randomness. EER: Monte Carlo studentized
// maximum modulus quantile M_{I, m(n-1), 1-alpha}.
CriticalValue wh_location_critical(double alpha, std::size_t runs, std::size_t replicates,
                                   std::size_t effects, ErrorRate rate, RngState rng,
                                   std::size_t samples = kDefaultSmmSamples);

// IER: Phi^{-1}(1 - alpha/2). EER: Monte Carlo SMM quantile with infinite df.
CriticalValue wh_dispersion_critical(double alpha, std::size_t effects, ErrorRate rate, RngState rng,
                                     std::size_t samples = kDefaultSmmSamples);

}  // namespace repdoe
