#pragma once

// Monte Carlo building blocks: chi-square draws, maxima of |MVN| vectors,
// empirical quantiles and studentized maximum modulus quantiles.

#include "repdoe/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace repdoe {

// Sorted sample of Monte Carlo draws. Values are sorted by finalize(); the
// quantile accessors require a finalized sample.
class EmpiricalSample {
public:
    EmpiricalSample() = default;
    explicit EmpiricalSample(std::vector<double> values, std::size_t declared_size = 0);

    void push_back(double v);
    void finalize();

    bool finalized() const noexcept { return finalized_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
    std::size_t declared_size_ = 0;
    bool finalized_ = false;
};

// 1-based order-statistic index used for the p-quantile of M draws: ceil(p*M)
// clamped to [1, M].
std::size_t quantile_rank(double p, std::size_t m);

// The ceil(p*M)-th order statistic. Throws StateError for an empty or
// unfinalized sample and DomainError unless 0 < p < 1.
double empirical_quantile(const EmpiricalSample& sample, double p);

// Same convention on an unsorted buffer; reorders `values` (nth_element).
double select_quantile(std::vector<double>& values, double p);

// Normal-approximation standard error of the p-quantile, read off the order
// statistics one binomial standard deviation either side of the target rank.
// Reorders `values`.
double quantile_standard_error(std::vector<double>& values, double p);

std::vector<double> sample_chi_square(RngState rng, unsigned df, std::size_t count);

// Draws U ~ MVN(0, C) through a factor L with L L^T = C. The covariance is
// symmetrized, eigen-decomposed, eigenvalues below -1e-8 * max|lambda| are
// rejected and the remaining negative ones clamped to zero. Diagonal matrices
// are factored directly as diag(sqrt(c_ii)).
class MvnSampler {
public:
    explicit MvnSampler(const Eigen::MatrixXd& covariance);

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(factor_.rows()); }

    // max_l |U_l| for one draw.
    double draw_max_abs(Rng& rng);

    const Eigen::MatrixXd& factor() const noexcept { return factor_; }

private:
    Eigen::MatrixXd factor_;  // I x r
    Eigen::VectorXd z_;
    Eigen::VectorXd u_;
};

std::vector<double> sample_mvn_max_abs(RngState rng, const Eigen::MatrixXd& covariance,
                                       std::size_t count);

// Degrees of freedom of the SMM denominator; std::nullopt means infinite
// (denominator identically one).
using SmmDof = std::optional<unsigned>;

inline constexpr std::size_t kMinSmmSamples = 10000;

// p-quantile of max_{l<=I} |Z_l| / sqrt(W/df), Z_l iid N(0,1) and a single
// W ~ chi2_df shared by all I numerators within a draw.
double smm_quantile(RngState rng, unsigned effects, SmmDof df, double p, std::size_t samples,
                    unsigned workers = 1);

}  // namespace repdoe
