#include "repdoe/report.hpp"

#include "repdoe/errors.hpp"

#include <cmath>

namespace repdoe {

const char* to_string(Method method) {
    switch (method) {
        case Method::wh: return "wh";
        case Method::vca: return "vca";
        case Method::lenth: return "lenth";
        case Method::mc: return "mc";
    }
    return "?";
}

const char* to_string(ErrorRate rate) { return rate == ErrorRate::ier ? "ier" : "eer"; }

Method parse_method(const std::string& text) {
    if (text == "wh") return Method::wh;
    if (text == "vca") return Method::vca;
    if (text == "lenth") return Method::lenth;
    if (text == "mc" || text == "ours") return Method::mc;
    throw ValidationError("unknown method '" + text + "' (expected wh, vca, lenth or mc)");
}

ErrorRate parse_error_rate(const std::string& text) {
    if (text == "ier" || text == "IER") return ErrorRate::ier;
    if (text == "eer" || text == "EER") return ErrorRate::eer;
    throw ValidationError("unknown error rate '" + text + "' (expected ier or eer)");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

TestReport make_report(Model model, Method method, ErrorRate rate, double alpha,
                       const EffectEstimates& estimates, const std::vector<double>& statistics,
                       const CriticalValue& critical, std::size_t runs, std::size_t replicates,
                       std::string note) {
    if (statistics.size() != estimates.coefficients.size())
        throw ValidationError("statistics and estimates differ in length");
    TestReport report;
    report.model = model;
    report.method = method;
    report.error_rate = rate;
    report.alpha = alpha;
    report.runs = runs;
    report.replicates = replicates;
    report.effects = statistics.size();
    report.critical = critical;
    report.note = std::move(note);
    for (std::size_t l = 0; l < statistics.size(); ++l) {
        EffectTest row;
        row.effect = l < estimates.names.size() ? estimates.names[l] : std::to_string(l + 1);
        row.estimate = estimates.coefficients[l];
        row.statistic = statistics[l];
        row.critical = critical.value;
        row.significant = std::fabs(statistics[l]) > critical.value;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace repdoe
