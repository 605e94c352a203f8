#include "repdoe/sampling.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace repdoe {

EmpiricalSample::EmpiricalSample(std::vector<double> values, std::size_t declared_size)
    : values_(std::move(values)), declared_size_(declared_size) {}

void EmpiricalSample::push_back(double v) {
    if (finalized_) throw StateError("EmpiricalSample: push_back after finalize");
    values_.push_back(v);
}

void EmpiricalSample::finalize() {
    if (declared_size_ != 0 && values_.size() != declared_size_)
        throw StateError("EmpiricalSample: size differs from the declared Monte Carlo count");
    std::sort(values_.begin(), values_.end());
    finalized_ = true;
}

std::size_t quantile_rank(double p, std::size_t m) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    if (m == 0) throw StateError("quantile: empty sample");
    const double raw = std::ceil(p * static_cast<double>(m));
    if (raw < 1.0) return 1;
    if (raw > static_cast<double>(m)) return m;
    return static_cast<std::size_t>(raw);
}

double empirical_quantile(const EmpiricalSample& sample, double p) {
    if (sample.size() == 0) throw StateError("empirical_quantile: empty sample");
    if (!sample.finalized()) throw StateError("empirical_quantile: sample not finalized");
    return sample.values()[quantile_rank(p, sample.size()) - 1];
}

double select_quantile(std::vector<double>& values, double p) {
    const std::size_t k = quantile_rank(p, values.size()) - 1;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    return values[k];
}

double quantile_standard_error(std::vector<double>& values, double p) {
    const std::size_t m = values.size();
    if (m < 2) throw StateError("quantile_standard_error: need at least two draws");
    const double spread = std::sqrt(static_cast<double>(m) * p * (1.0 - p));
    const double centre = std::ceil(p * static_cast<double>(m));
    const auto clamp_rank = [m](double r) {
        return static_cast<std::size_t>(std::clamp(r, 1.0, static_cast<double>(m))) - 1;
    };
    const std::size_t lo = clamp_rank(std::floor(centre - spread));
    const std::size_t hi = clamp_rank(std::ceil(centre + spread));
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(hi), values.end());
    const double v_hi = values[hi];
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo),
                     values.begin() + static_cast<std::ptrdiff_t>(hi));
    const double v_lo = values[lo];
    return 0.5 * (v_hi - v_lo);
}

std::vector<double> sample_chi_square(RngState state, unsigned df, std::size_t count) {
    if (df == 0) throw DomainError("sample_chi_square: df must be >= 1");
    Rng rng(state);
    std::vector<double> out(count);
    for (auto& v : out) v = rng.chi_square(df);
    return out;
}

MvnSampler::MvnSampler(const Eigen::MatrixXd& covariance) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0)
        throw MatrixError("covariance matrix must be square and non-empty");
    if (!covariance.allFinite()) throw MatrixError("covariance matrix has non-finite entries");
    const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
    const auto dim = sym.rows();

    const Eigen::MatrixXd off = sym - Eigen::MatrixXd(sym.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() == 0.0) {
        const double scale = sym.diagonal().cwiseAbs().maxCoeff();
        factor_ = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double d = sym(i, i);
            if (d < -1e-8 * scale) throw MatrixError("covariance matrix is indefinite");
            factor_(i, i) = d > 0.0 ? std::sqrt(d) : 0.0;
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
        if (eig.info() != Eigen::Success) throw MatrixError("covariance eigen-decomposition failed");
        const Eigen::VectorXd& lambda = eig.eigenvalues();
        const double scale = lambda.cwiseAbs().maxCoeff();
        if (lambda.minCoeff() < -1e-8 * scale) throw MatrixError("covariance matrix is indefinite");
        // Keep only the directions with positive variance.
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < dim; ++k)
            if (lambda(k) > 0.0) keep.push_back(k);
        factor_ = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(std::max<std::size_t>(keep.size(), 1)));
        for (std::size_t c = 0; c < keep.size(); ++c)
            factor_.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]) * std::sqrt(lambda(keep[c]));
    }
    z_.resize(factor_.cols());
    u_.resize(factor_.rows());
}

double MvnSampler::draw_max_abs(Rng& rng) {
    for (Eigen::Index k = 0; k < z_.size(); ++k) z_(k) = rng.normal();
    u_.noalias() = factor_ * z_;
    return u_.cwiseAbs().maxCoeff();
}

std::vector<double> sample_mvn_max_abs(RngState state, const Eigen::MatrixXd& covariance,
                                       std::size_t count) {
    MvnSampler sampler(covariance);
    Rng rng(state);
    std::vector<double> out(count);
    for (auto& v : out) v = sampler.draw_max_abs(rng);
    return out;
}

double smm_quantile(RngState state, unsigned effects, SmmDof df, double p, std::size_t samples,
                    unsigned workers) {
    if (effects == 0) throw DomainError("smm_quantile: number of effects must be >= 1");
    if (df && *df == 0) throw DomainError("smm_quantile: df must be >= 1 or infinite");
    if (samples < kMinSmmSamples) throw DomainError("smm_quantile: at least 10^4 samples required");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("smm_quantile: p must lie in (0, 1)");
    std::vector<double> draws;
    fill_blocked(draws, samples, 1, state, workers, [&] {
        return [&](Rng& rng, double* dst) {
            double mx = 0.0;
            for (unsigned l = 0; l < effects; ++l) mx = std::max(mx, std::fabs(rng.normal()));
            if (df) mx /= std::sqrt(rng.chi_square(*df) / static_cast<double>(*df));
            *dst = mx;
        };
    });
    return select_quantile(draws, p);
}

}  // namespace repdoe
