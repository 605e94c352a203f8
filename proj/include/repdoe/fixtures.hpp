#pragma once

// Expected-value manifests. Each manifest is a CSV with header
//     check_id,expected,tolerance,provenance
// and every row is recomputed and compared as |actual - expected| <= tolerance.
// Check ids are '/'-separated, e.g. "a_n/3" or "table/table8/B/wh/3"; the
// grammar is listed in docs/scenario-format.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repdoe {

struct ManifestEntry {
    std::string manifest;  // file stem
    std::size_t line = 0;
    std::string id;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string provenance;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct FixtureCheck {
    ManifestEntry entry;
    std::optional<double> actual;
    double tolerance = 0.0;  // the tolerance actually applied
    bool passed = false;
    bool skipped = false;
    std::string message;
};

struct VerifyOptions {
    bool include_tables = false;                // "table/..." checks run full simulations
    std::optional<std::size_t> repetitions;     // overrides each scenario's N
    double se_multiplier = 0.0;                 // > 0: table tolerance = multiplier * binomial SE
    unsigned threads = 1;
    std::vector<std::string> only_manifests;    // empty: every *.csv in manifests/
};

struct VerifyReport {
    std::vector<FixtureCheck> checks;

    std::size_t failed() const;
    std::size_t passed() const;
    std::size_t skipped() const;
};

// Reads every manifest under `dir`/manifests. Scenario checks resolve files
// in `dir`/scenarios. A missing directory, manifest or scenario is reported
// as a failed check.
VerifyReport verify_fixtures(const std::filesystem::path& dir, const VerifyOptions& options = {});

// Evaluates one non-table check id. Throws ValidationError for unknown ids.
double evaluate_check(const std::string& id);

// Largest relative difference |F_l - t_l^2| / t_l^2 over `count` random
// location datasets with m in {8, 16} and n in 3..6.
double proposition_max_relative_error(std::size_t count, std::uint64_t seed);

}  // namespace repdoe
