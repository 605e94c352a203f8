#pragma once

// One entry point that runs any (model, method, error rate) combination on a
// dataset and produces a TestReport.

#include "repdoe/design.hpp"
#include "repdoe/report.hpp"

#include <cstdint>

namespace repdoe {

// Stream ids used for the Monte Carlo cutoffs of a single analysis.
inline constexpr std::uint64_t kStreamMcLocation = 1;
inline constexpr std::uint64_t kStreamSmm = 2;
inline constexpr std::uint64_t kStreamLenth = 3;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct AnalysisConfig {
    Model model = Model::location;
    Method method = Method::mc;
    ErrorRate error_rate = ErrorRate::ier;
    double alpha = 0.05;
    std::size_t mc_samples = 0;  // 0: the method's default sample count
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
};

// Throws ValidationError for combinations no method defines (VCA with EER).
void validate_config(const AnalysisConfig& config);

// Only the Monte Carlo location cutoffs depend on the observed data.
bool critical_depends_on_data(const AnalysisConfig& config);

struct Screening {
    EffectEstimates estimates;
    std::vector<double> statistics;
};

// Effect estimates and the method's test statistic (t, z, F or t_Lenth).
Screening compute_statistics(const AnalysisConfig& config, const Design& design, const ReplicatedData& data);

// Cutoff that does not depend on the responses. Throws ValidationError for the
// Monte Carlo location method, which needs variance weights.
CriticalValue data_free_critical(const AnalysisConfig& config, std::size_t runs, std::size_t replicates,
                                 std::size_t effects);

CriticalValue compute_critical(const AnalysisConfig& config, const Design& design, const ReplicatedData& data);

TestReport analyze(const AnalysisConfig& config, const Design& design, const ReplicatedData& data);

std::size_t default_samples(const AnalysisConfig& config);

}  // namespace repdoe
