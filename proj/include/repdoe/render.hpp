#pragma once

// Text and CSV output for test reports, half-normal points and error-rate
// tables. Numbers are printed with fixed printf formats so repeated runs give
// byte-identical files.

#include "repdoe/design.hpp"
#include "repdoe/report.hpp"
#include "repdoe/simulation.hpp"

#include <iosfwd>
#include <vector>

namespace repdoe {

void render_report_text(std::ostream& out, const TestReport& report);

// Columns: model,method,error_rate,alpha,effect,estimate,statistic,critical,significant
void render_report_csv(std::ostream& out, const TestReport& report);

// Columns: effect,abs_estimate,quantile
void render_half_normal_csv(std::ostream& out, const std::vector<HalfNormalPoint>& points);

// Effect rows, one column per n grouped by method, then the standard errors.
void render_table_text(std::ostream& out, const ErrorRateTable& table);

// Long format, one line per (row, method, n).
void render_table_csv(std::ostream& out, const ErrorRateTable& table);

}  // namespace repdoe
