#include "repdoe/wh.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/sampling.hpp"
#include "repdoe/special.hpp"

#include <cmath>
#include <numeric>

namespace repdoe {

std::vector<double> wh_t_statistics(const ReplicatedData& data, const Design& design) {
    const auto est = estimate_effects(design, data, Model::location);
    const double m = static_cast<double>(data.runs());
    const double n = static_cast<double>(data.replicates());
    const double pooled = std::accumulate(data.variances().begin(), data.variances().end(), 0.0);
    if (!(pooled > 0.0)) throw DegenerateError("all run variances are zero; the t statistic is undefined");
    const double se = std::sqrt(pooled / (m * m * n));
    std::vector<double> t(est.coefficients.size());
    for (std::size_t l = 0; l < t.size(); ++l) t[l] = est.coefficients[l] / se;
    return t;
}

std::vector<double> wh_z_statistics(const ReplicatedData& data, const Design& design) {
    const auto est = estimate_effects(design, data, Model::dispersion);
    const double m = static_cast<double>(data.runs());
    const double n = static_cast<double>(data.replicates());
    const double se = std::sqrt(2.0 / (m * (n - 1.0)));
    std::vector<double> z(est.coefficients.size());
    for (std::size_t l = 0; l < z.size(); ++l) z[l] = est.coefficients[l] / se;
    return z;
}

CriticalValue wh_location_critical(double alpha, std::size_t runs, std::size_t replicates,
                                   std::size_t effects, ErrorRate rate, RngState rng, std::size_t samples) {
    check_alpha(alpha);
    if (replicates < 2) throw DomainError("at least two replicates are required");
    const std::size_t df = runs * (replicates - 1);
    CriticalValue cv;
    if (rate == ErrorRate::ier) {
        cv.value = two_sided_t_critical(alpha, static_cast<double>(df));
        return cv;
    }
    cv.value = smm_quantile(rng, static_cast<unsigned>(effects), static_cast<unsigned>(df), 1.0 - alpha, samples);
    cv.seed = rng.seed;
    cv.stream = rng.stream;
    cv.samples = samples;
    return cv;
}

CriticalValue wh_dispersion_critical(double alpha, std::size_t effects, ErrorRate rate, RngState rng,
                                     std::size_t samples) {
    check_alpha(alpha);
    CriticalValue cv;
    if (rate == ErrorRate::ier) {
        cv.value = normal_quantile(1.0 - 0.5 * alpha);
        return cv;
    }
    cv.value = smm_quantile(rng, static_cast<unsigned>(effects), std::nullopt, 1.0 - alpha, samples);
    cv.seed = rng.seed;
    cv.stream = rng.stream;
    cv.samples = samples;
    return cv;
}

}  // namespace repdoe
