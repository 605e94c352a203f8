#include "repdoe/mc.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/parallel.hpp"
#include "repdoe/sampling.hpp"
#include "repdoe/special.hpp"

#include <cmath>
#include <numeric>

namespace repdoe {

namespace {

void check_mc_args(const VarianceWeights& weights, std::size_t replicates, double alpha, std::size_t samples) {
    check_alpha(alpha);
    if (replicates < 2) throw DomainError("at least two replicates are required");
    if (samples < kMinMcSamples) throw DomainError("Monte Carlo critical values need at least 10^4 samples");
    if (weights.rho2.empty()) throw ValidationError("empty variance weights");
}

// sum_i rho_i^2 chi2_{n-1,i} / (n-1)
inline double weighted_chi_square(Rng& rng, const std::vector<double>& rho2, unsigned df) {
    double acc = 0.0;
    for (double w : rho2) acc += w * rng.chi_square(df);
    return acc / static_cast<double>(df);
}

McCriticalResult finish(std::vector<double>& draws, double p, double alpha, ErrorRate rate, RngState rng) {
    McCriticalResult out;
    out.critical = select_quantile(draws, p);
    out.standard_error = quantile_standard_error(draws, p);
    out.samples = draws.size();
    out.rng = rng;
    out.alpha = alpha;
    out.error_rate = rate;
    return out;
}

}  // namespace

CriticalValue McCriticalResult::as_critical_value() const {
    CriticalValue cv;
    cv.value = critical;
    cv.seed = rng.seed;
    cv.stream = rng.stream;
    cv.samples = samples;
    cv.standard_error = standard_error;
    return cv;
}

VarianceWeights variance_weights(std::span<const double> variances) {
    if (variances.empty()) throw ValidationError("variance_weights: no runs");
    double total = 0.0;
    for (double v : variances) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("variance_weights: variances must be finite and >= 0");
        total += v;
    }
    if (!(total > 0.0)) throw DegenerateError("all run variances are zero; variance weights undefined");
    VarianceWeights w;
    w.rho2.resize(variances.size());
    for (std::size_t i = 0; i < variances.size(); ++i) w.rho2[i] = variances[i] / total;
    return w;
}

McCriticalResult mc_location_ier_critical(const VarianceWeights& weights, std::size_t replicates, double alpha,
                                          std::size_t samples, RngState rng, unsigned workers) {
    check_mc_args(weights, replicates, alpha, samples);
    const auto df = static_cast<unsigned>(replicates - 1);
    std::vector<double> draws;
    fill_blocked(draws, samples, 1, rng, workers, [&] {
        return [&](Rng& g, double* dst) {
            const double u = g.normal();
            *dst = u / std::sqrt(weighted_chi_square(g, weights.rho2, df));
        };
    });
    return finish(draws, 1.0 - 0.5 * alpha, alpha, ErrorRate::ier, rng);
}

McCriticalResult mc_location_eer_critical(const VarianceWeights& weights, const Design& design,
                                          std::size_t replicates, double alpha, std::size_t samples,
                                          RngState rng, unsigned workers) {
    check_mc_args(weights, replicates, alpha, samples);
    const std::size_t m = design.runs();
    const std::size_t effects = design.effect_count();
    if (weights.rho2.size() != m) throw ValidationError("variance weights and design differ in run count");

    // X^T diag(rho^2) X
    Eigen::MatrixXd cov(effects, effects);
    for (std::size_t a = 0; a < effects; ++a) {
        const auto xa = design.column(a);
        for (std::size_t b = a; b < effects; ++b) {
            const auto xb = design.column(b);
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += xa[i] * weights.rho2[i] * xb[i];
            cov(a, b) = s;
            cov(b, a) = s;
        }
    }
    const MvnSampler prototype(cov);
    const auto df = static_cast<unsigned>(replicates - 1);
    std::vector<double> draws;
    fill_blocked(draws, samples, 1, rng, workers, [&] {
        return [&, sampler = prototype](Rng& g, double* dst) mutable {
            const double u = sampler.draw_max_abs(g);
            *dst = u / std::sqrt(weighted_chi_square(g, weights.rho2, df));
        };
    });
    return finish(draws, 1.0 - alpha, alpha, ErrorRate::eer, rng);
}

double exact_log_variance(unsigned replicates) {
    if (replicates < 2) throw DomainError("at least two replicates are required");
    return trigamma(0.5 * static_cast<double>(replicates - 1));
}

double approximate_log_variance(unsigned replicates) {
    if (replicates < 2) throw DomainError("at least two replicates are required");
    return 2.0 / static_cast<double>(replicates - 1);
}

double a_n(unsigned replicates) {
    return std::sqrt(exact_log_variance(replicates) / approximate_log_variance(replicates));
}

double disp_ier_critical(double alpha, unsigned replicates) {
    check_alpha(alpha);
    return a_n(replicates) * normal_quantile(1.0 - 0.5 * alpha);
}

double disp_eer_critical(double alpha, unsigned replicates, std::size_t effects) {
    check_alpha(alpha);
    if (effects == 0) throw DomainError("at least one effect is required");
    if (effects == 1) return disp_ier_critical(alpha, replicates);
    const double p = 0.5 + 0.5 * std::pow(1.0 - alpha, 1.0 / static_cast<double>(effects));
    return a_n(replicates) * normal_quantile(p);
}

}  // namespace repdoe
