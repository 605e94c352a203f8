#pragma once

// Two-level designs coded +-1, per-run summaries and effect estimation.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace repdoe {

enum class Model { location, dispersion };

// m runs x I effect columns, every entry +-1, each column balanced and the
// columns mutually orthogonal (X^T X = m I). The factor-level matrix the
// columns were built from (m x k) is kept for export.
class Design {
public:
    // Builds effect columns as elementwise products of factor columns.
    // `levels` is row-major m x k; `effects` lists factor-index sets.
    Design(std::vector<std::string> factor_names, std::vector<int> levels,
           std::vector<std::vector<std::size_t>> effects);

    std::size_t runs() const noexcept { return runs_; }
    std::size_t factor_count() const noexcept { return factor_names_.size(); }
    std::size_t effect_count() const noexcept { return effect_names_.size(); }

    const std::vector<std::string>& factor_names() const noexcept { return factor_names_; }
    const std::vector<std::string>& effect_names() const noexcept { return effect_names_; }
    const std::vector<std::vector<std::size_t>>& effect_factors() const noexcept { return effect_factors_; }

    // Column x_l (length m).
    std::span<const int> column(std::size_t effect) const;
    int level(std::size_t run, std::size_t effect) const { return columns_[effect * runs_ + run]; }
    int factor_level(std::size_t run, std::size_t factor) const {
        return levels_[run * factor_names_.size() + factor];
    }

    std::optional<std::size_t> find_effect(const std::string& name) const;

private:
    std::vector<std::string> factor_names_;
    std::vector<std::string> effect_names_;
    std::vector<std::vector<std::size_t>> effect_factors_;
    std::vector<int> levels_;   // row-major m x k
    std::vector<int> columns_;  // column-major m x I
    std::size_t runs_ = 0;
};

// Full 2^k factorial in standard order (first factor alternates fastest).
// Effects: main effects, then two-factor interactions, ... up to
// `max_order` (all orders when empty), lexicographic within an order.
Design build_full_factorial(const std::vector<std::string>& factor_names,
                            std::optional<std::size_t> max_order = std::nullopt);

// Design from a user-supplied factor-level matrix. `effects_spec` is "full"
// (every interaction), "order=<k>", or a comma-separated list of effect
// names such as "A,B,AB" (or "temp*speed" for multi-character factor names).
Design design_from_levels(const std::vector<std::string>& factor_names, std::vector<int> levels,
                          const std::string& effects_spec);

// Name of the interaction over the given factors: letters are concatenated
// when every factor name is a single character, joined with '*' otherwise.
std::string effect_label(const std::vector<std::string>& factor_names,
                         const std::vector<std::size_t>& factors);

struct RunSummary {
    std::vector<double> means;
    std::vector<double> variances;  // divisor n - 1
};

// Row-wise sample means and variances of a row-major m x n matrix.
RunSummary summarize(std::span<const double> responses, std::size_t runs, std::size_t replicates);

// Responses y_ij for m runs and n >= 2 replicates with derived summaries.
class ReplicatedData {
public:
    ReplicatedData(std::vector<double> responses, std::size_t runs, std::size_t replicates);

    std::size_t runs() const noexcept { return runs_; }
    std::size_t replicates() const noexcept { return replicates_; }
    std::span<const double> row(std::size_t run) const;
    const std::vector<double>& responses() const noexcept { return responses_; }
    const std::vector<double>& means() const noexcept { return summary_.means; }
    const std::vector<double>& variances() const noexcept { return summary_.variances; }

private:
    std::vector<double> responses_;
    std::size_t runs_ = 0;
    std::size_t replicates_ = 0;
    RunSummary summary_;
};

struct EffectEstimates {
    Model model = Model::location;
    double intercept = 0.0;
    std::vector<double> coefficients;
    std::vector<std::string> names;
};

// intercept = mean(z), coefficient_l = x_l^T z / m. z must be finite.
EffectEstimates estimate_effects(const Design& design, std::span<const double> z, Model model);

// z_1 = run means, or z_2 = log run variances. The dispersion response throws
// DegenerateError naming every run with s_i^2 = 0.
std::vector<double> model_response(const ReplicatedData& data, Model model);

EffectEstimates estimate_effects(const Design& design, const ReplicatedData& data, Model model);

struct HalfNormalPoint {
    std::string effect;
    double quantile = 0.0;  // Phi^{-1}(0.5 + 0.5 (i - 0.5) / I)
    double abs_estimate = 0.0;
};

// Sorted by |estimate| ascending, ties by effect name.
std::vector<HalfNormalPoint> half_normal_points(const EffectEstimates& estimates);

const char* to_string(Model model);
Model parse_model(const std::string& text);

}  // namespace repdoe
