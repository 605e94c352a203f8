#pragma once

#include "repdoe/design.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repdoe {

enum class Method { wh, vca, lenth, mc };
enum class ErrorRate { ier, eer };

const char* to_string(Method method);
const char* to_string(ErrorRate rate);
Method parse_method(const std::string& text);
ErrorRate parse_error_rate(const std::string& text);

// A cutoff plus the Monte Carlo provenance when it was simulated.
struct CriticalValue {
    double value = 0.0;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> stream;
    std::optional<std::size_t> samples;
    std::optional<double> standard_error;
};

struct EffectTest {
    std::string effect;
    double estimate = 0.0;
    double statistic = 0.0;
    double critical = 0.0;
    bool significant = false;
};

struct TestReport {
    Model model = Model::location;
    Method method = Method::wh;
    ErrorRate error_rate = ErrorRate::ier;
    double alpha = 0.05;
    std::vector<EffectTest> rows;
    std::size_t runs = 0;
    std::size_t replicates = 0;
    std::size_t effects = 0;
    CriticalValue critical;
    std::string note;
};

// Assembles per-effect rows with significant = |statistic| > critical.
TestReport make_report(Model model, Method method, ErrorRate rate, double alpha,
                       const EffectEstimates& estimates, const std::vector<double>& statistics,
                       const CriticalValue& critical, std::size_t runs, std::size_t replicates,
                       std::string note = {});

void check_alpha(double alpha);

}  // namespace repdoe
