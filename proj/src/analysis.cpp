#include "repdoe/analysis.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/lenth.hpp"
#include "repdoe/mc.hpp"
#include "repdoe/vca.hpp"
#include "repdoe/wh.hpp"

namespace repdoe {

void validate_config(const AnalysisConfig& config) {
    check_alpha(config.alpha);
    if (config.method == Method::vca && config.error_rate == ErrorRate::eer)
        throw ValidationError(
            "the VCA jackknife method defines no experimentwise (EER) procedure; use --error-rate ier "
            "or choose wh, lenth or mc");
}

bool critical_depends_on_data(const AnalysisConfig& config) {
    return config.method == Method::mc && config.model == Model::location;
}

std::size_t default_samples(const AnalysisConfig& config) {
    if (config.mc_samples != 0) return config.mc_samples;
    switch (config.method) {
        case Method::wh: return kDefaultSmmSamples;
        case Method::lenth: return kDefaultLenthSamples;
        default: return kDefaultMcSamples;
    }
}

Screening compute_statistics(const AnalysisConfig& config, const Design& design, const ReplicatedData& data) {
    validate_config(config);
    Screening out;
    out.estimates = estimate_effects(design, data, config.model);
    switch (config.method) {
        case Method::wh:
        case Method::mc:
            out.statistics = config.model == Model::location ? wh_t_statistics(data, design)
                                                             : wh_z_statistics(data, design);
            break;
        case Method::vca:
            out.statistics = vca_f_statistics(data, design, config.model);
            break;
        case Method::lenth:
            out.statistics = lenth_pse(out.estimates.coefficients).t;
            break;
    }
    return out;
}

CriticalValue data_free_critical(const AnalysisConfig& config, std::size_t runs, std::size_t replicates,
                                 std::size_t effects) {
    validate_config(config);
    const std::size_t samples = default_samples(config);
    CriticalValue cv;
    switch (config.method) {
        case Method::wh:
            if (config.model == Model::location)
                return wh_location_critical(config.alpha, runs, replicates, effects, config.error_rate,
                                            RngState{config.seed, kStreamSmm}, samples);
            return wh_dispersion_critical(config.alpha, effects, config.error_rate,
                                          RngState{config.seed, kStreamSmm}, samples);
        case Method::vca:
            cv.value = vca_critical(config.alpha, runs, replicates);
            return cv;
        case Method::lenth:
            return lenth_critical(config.alpha, effects, config.error_rate, RngState{config.seed, kStreamLenth},
                                  samples, config.workers);
        case Method::mc:
            if (config.model == Model::location)
                throw ValidationError("Monte Carlo location cutoffs need variance weights from the data");
            cv.value = config.error_rate == ErrorRate::ier
                           ? disp_ier_critical(config.alpha, static_cast<unsigned>(replicates))
                           : disp_eer_critical(config.alpha, static_cast<unsigned>(replicates), effects);
            return cv;
    }
    return cv;
}

CriticalValue compute_critical(const AnalysisConfig& config, const Design& design, const ReplicatedData& data) {
    if (!critical_depends_on_data(config))
        return data_free_critical(config, design.runs(), data.replicates(), design.effect_count());
    validate_config(config);
    const auto weights = variance_weights(data.variances());
    const RngState rng{config.seed, kStreamMcLocation};
    const std::size_t samples = default_samples(config);
    const auto result =
        config.error_rate == ErrorRate::ier
            ? mc_location_ier_critical(weights, data.replicates(), config.alpha, samples, rng, config.workers)
            : mc_location_eer_critical(weights, design, data.replicates(), config.alpha, samples, rng,
                                       config.workers);
    return result.as_critical_value();
}

TestReport analyze(const AnalysisConfig& config, const Design& design, const ReplicatedData& data) {
    validate_config(config);
    if (data.runs() != design.runs())
        throw ValidationError("data has " + std::to_string(data.runs()) + " runs, design has " +
                              std::to_string(design.runs()));
    auto screening = compute_statistics(config, design, data);
    const auto critical = compute_critical(config, design, data);
    std::string note;
    if (critical_depends_on_data(config))
        note = "variance weights estimated from the observed run variances";
    else if (config.method == Method::vca && config.model == Model::dispersion)
        note = "unadjusted jackknife of log s^2 (no small-n adjustment factor)";
    return make_report(config.model, config.method, config.error_rate, config.alpha, screening.estimates,
                       screening.statistics, critical, data.runs(), data.replicates(), std::move(note));
}

}  // namespace repdoe
