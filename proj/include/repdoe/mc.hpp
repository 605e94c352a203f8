#pragma once

// Critical values that hold up under heteroscedastic runs.
//
// Location model. Under H0 the t-type statistic is distributed as
//     N(0,1) / sqrt( sum_i rho_i^2 chi2_{n-1,i} / (n-1) ),
// with rho_i^2 = sigma_i^2 / sum_k sigma_k^2 and the m chi-square variables
// independent of each other and of the numerator. The IER cutoff is the
// (1 - alpha/2) quantile of that law, simulated with rho_i^2 replaced by
// s_i^2 / sum_k s_k^2 from the observed data. For the EER the numerator
// becomes max_l |U_l| with U ~ MVN(0, X^T diag(rho^2) X) and the cutoff is
// the (1 - alpha) quantile.
//
// Dispersion model. Var(log s_i^2) = psi'((n-1)/2) exactly, against the 2/(n-1)
// first-order value, so the z-type statistic is closer to N(0, a_n^2) with
// a_n = sqrt(psi'((n-1)/2) / (2/(n-1))). The cutoffs are closed form.

#include "repdoe/design.hpp"
#include "repdoe/report.hpp"
#include "repdoe/rng.hpp"

#include <span>
#include <vector>

namespace repdoe {

inline constexpr std::size_t kDefaultMcSamples = 100000;
inline constexpr std::size_t kMinMcSamples = 10000;

struct VarianceWeights {
    std::vector<double> rho2;  // non-negative, sums to one
};

// rho_i^2 = s_i^2 / sum_k s_k^2. Zero entries are allowed; an all-zero input
// throws DegenerateError.
VarianceWeights variance_weights(std::span<const double> variances);

struct McCriticalResult {
    double critical = 0.0;
    std::size_t samples = 0;
    RngState rng;
    double alpha = 0.05;
    ErrorRate error_rate = ErrorRate::ier;
    double standard_error = 0.0;  // quantile standard error, binomial approximation

    CriticalValue as_critical_value() const;
};

McCriticalResult mc_location_ier_critical(const VarianceWeights& weights, std::size_t replicates, double alpha,
                                          std::size_t samples, RngState rng, unsigned workers = 1);

McCriticalResult mc_location_eer_critical(const VarianceWeights& weights, const Design& design,
                                          std::size_t replicates, double alpha, std::size_t samples,
                                          RngState rng, unsigned workers = 1);

// Var(log chi2_{n-1}) = psi'((n-1)/2).
double exact_log_variance(unsigned replicates);

// First-order approximation 2/(n-1).
double approximate_log_variance(unsigned replicates);

double a_n(unsigned replicates);

// a_n * Phi^{-1}(1 - alpha/2)
double disp_ier_critical(double alpha, unsigned replicates);

// a_n * Phi^{-1}(0.5 + 0.5 (1 - alpha)^{1/I})
double disp_eer_critical(double alpha, unsigned replicates, std::size_t effects);

}  // namespace repdoe
