#pragma once

// CSV files for replicated two-level experiments.
//
//   design.csv     header = factor names, one row per run, entries -1 / +1
//   responses.csv  header = replicate labels (any text), one row per run,
//                  n real columns
//
// Comma separated, '.' decimal point, UTF-8, header row required. Blank
// lines and lines starting with '#' are ignored.

#include "repdoe/design.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace repdoe {

struct FactorTable {
    std::vector<std::string> factor_names;
    std::vector<int> levels;  // row-major runs x factors
    std::size_t runs = 0;
};

FactorTable read_design_csv(std::istream& in, const std::string& source = "design");
FactorTable read_design_csv(const std::filesystem::path& path);

ReplicatedData read_responses_csv(std::istream& in, const std::string& source = "responses");
ReplicatedData read_responses_csv(const std::filesystem::path& path);

struct Dataset {
    Design design;
    ReplicatedData data;
};

// Reads both files, builds the design for `effects_spec` and checks that the
// run counts agree.
Dataset read_dataset(const std::filesystem::path& design_path, const std::filesystem::path& responses_path,
                     const std::string& effects_spec = "full");

// Writers emit 17 significant digits so a re-read reproduces every value.
void write_design_csv(std::ostream& out, const Design& design);
void write_responses_csv(std::ostream& out, const ReplicatedData& data);

// Run variances for Monte Carlo cutoffs: a single column (header e.g. "s2").
std::vector<double> read_variances_csv(const std::filesystem::path& path);

// Splits one CSV line on commas and trims whitespace around each field.
std::vector<std::string> split_csv_line(const std::string& line);

// Strict full-field parse; throws ValidationError naming `where`.
double parse_real(const std::string& field, const std::string& where);

}  // namespace repdoe
