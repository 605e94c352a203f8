#pragma once

// Error-rate studies: repeat (generate data, test every effect) N times per
// replicate count and tabulate rejection percentages.
//
// Seeds. Repetition r at replicate count n draws its data from stream
// (n << 40) ^ r of the scenario seed; the per-repetition Monte Carlo location
// cutoff uses that stream xor a fixed high bit. Data-free cutoffs (t, F,
// normal, SMM, Lenth, closed forms) are computed once per n and reused.
// Counts are integers summed per repetition block, so the table does not
// depend on the number of threads.

#include "repdoe/design.hpp"
#include "repdoe/report.hpp"
#include "repdoe/rng.hpp"
#include "repdoe/scenario.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace repdoe {

struct Cell {
    std::size_t rejections = 0;
    std::size_t trials = 0;
    double percent = 0.0;
    double se = 0.0;  // binomial standard error, percentage points
};

struct TableColumn {
    Method method = Method::mc;
    unsigned replicates = 3;
};

struct TableRow {
    std::string label;  // effect name, or "I=7" for an experimentwise row
    ErrorRate rate = ErrorRate::ier;
    bool null_effect = true;
    std::vector<Cell> cells;  // parallel to ErrorRateTable::columns
};

struct ErrorRateTable {
    std::string title;
    Model model = Model::location;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::size_t repetitions = 0;
    std::size_t inner_samples = 0;
    std::vector<TableColumn> columns;
    std::vector<TableRow> rows;
    std::size_t degenerate = 0;  // resampled repetitions, all columns

    // Throws ValidationError if the row or column does not exist.
    const Cell& cell(const std::string& row_label, Method method, unsigned replicates) const;
    std::optional<std::size_t> column_index(Method method, unsigned replicates) const;
    std::optional<std::size_t> row_index(const std::string& label) const;
};

// Repetition stream for replicate count n.
std::uint64_t repetition_stream(unsigned replicates, std::size_t repetition);

// y_ij ~ N(mu_i, sigma_i^2), filled run by run.
ReplicatedData generate_dataset(const RunModel& model, unsigned replicates, Rng& rng);
ReplicatedData generate_dataset(const Scenario& scenario, const Design& design, unsigned replicates, Rng& rng);
ReplicatedData generate_dataset(const Scenario& scenario, const Design& design, unsigned replicates,
                                std::size_t repetition);

struct SimulationOptions {
    unsigned threads = 1;                    // 0: one per hardware thread
    std::optional<std::size_t> repetitions;  // overrides the scenario's N
    std::function<void(std::size_t done, std::size_t total)> progress;
};

// Throws ValidationError for an invalid scenario and DegenerateError when more
// than 1% of the repetitions had to be resampled.
ErrorRateTable estimate_error_rates(const Scenario& scenario, const SimulationOptions& options = {});

}  // namespace repdoe
