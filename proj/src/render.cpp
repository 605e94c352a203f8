#include "repdoe/render.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace repdoe {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

const char* method_label(Method m) {
    switch (m) {
        case Method::wh: return "WH";
        case Method::vca: return "VCA";
        case Method::lenth: return "Lenth";
        case Method::mc: return "MC";
    }
    return "?";
}

}  // namespace

void render_report_text(std::ostream& out, const TestReport& report) {
    out << to_string(report.model) << " model, method " << to_string(report.method) << ", "
        << to_string(report.error_rate) << " at alpha = " << fmt("%g", report.alpha) << '\n';
    out << "m = " << report.runs << " runs, n = " << report.replicates << " replicates, I = " << report.effects
        << " effects\n";
    out << "critical value " << fmt("%.6f", report.critical.value);
    if (report.critical.samples) {
        out << " (Monte Carlo, M = " << *report.critical.samples;
        if (report.critical.seed) out << ", seed " << *report.critical.seed;
        if (report.critical.stream) out << ", stream " << *report.critical.stream;
        if (report.critical.standard_error) out << ", se " << fmt("%.4f", *report.critical.standard_error);
        out << ')';
    }
    out << '\n';
    if (!report.note.empty()) out << "note: " << report.note << '\n';

    std::size_t w = 6;
    for (const auto& r : report.rows) w = std::max(w, r.effect.size());
    out << '\n'
        << pad_right("effect", w) << "  " << pad_left("estimate", 12) << "  " << pad_left("statistic", 12) << "  "
        << "significant\n";
    for (const auto& r : report.rows) {
        out << pad_right(r.effect, w) << "  " << pad_left(fmt("%.6f", r.estimate), 12) << "  "
            << pad_left(fmt("%.4f", r.statistic), 12) << "  " << (r.significant ? "yes" : "no") << '\n';
    }
}

void render_report_csv(std::ostream& out, const TestReport& report) {
    out << "model,method,error_rate,alpha,effect,estimate,statistic,critical,significant\n";
    for (const auto& r : report.rows) {
        out << to_string(report.model) << ',' << to_string(report.method) << ',' << to_string(report.error_rate)
            << ',' << fmt("%.10g", report.alpha) << ',' << r.effect << ',' << fmt("%.10g", r.estimate) << ','
            << fmt("%.10g", r.statistic) << ',' << fmt("%.10g", r.critical) << ','
            << (r.significant ? "true" : "false") << '\n';
    }
}

void render_half_normal_csv(std::ostream& out, const std::vector<HalfNormalPoint>& points) {
    out << "effect,abs_estimate,quantile\n";
    for (const auto& p : points)
        out << p.effect << ',' << fmt("%.10g", p.abs_estimate) << ',' << fmt("%.10g", p.quantile) << '\n';
}

void render_table_text(std::ostream& out, const ErrorRateTable& table) {
    out << table.title << '\n';
    out << to_string(table.model) << " model, alpha = " << fmt("%g", table.alpha) << ", N = " << table.repetitions
        << ", seed " << table.seed << ", inner M = " << table.inner_samples << '\n';
    out << "percentage of rejections; * marks an active effect\n\n";

    std::size_t w = 6;
    for (const auto& r : table.rows) w = std::max(w, r.label.size() + 1);
    constexpr std::size_t cw = 7;

    const auto header = [&] {
        // method groups
        out << pad_right("", w);
        for (std::size_t c = 0; c < table.columns.size();) {
            std::size_t span = 1;
            while (c + span < table.columns.size() && table.columns[c + span].method == table.columns[c].method)
                ++span;
            out << "  " << pad_right(method_label(table.columns[c].method), span * cw);
            c += span;
        }
        out << '\n' << pad_right("effect", w);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c == 0 || table.columns[c].method != table.columns[c - 1].method) out << "  ";
            out << pad_left("n=" + std::to_string(table.columns[c].replicates), cw);
        }
        out << '\n';
    };
    const auto body = [&](bool se) {
        for (const auto& r : table.rows) {
            out << pad_right(r.label + (r.null_effect ? "" : "*"), w);
            for (std::size_t c = 0; c < table.columns.size(); ++c) {
                if (c == 0 || table.columns[c].method != table.columns[c - 1].method) out << "  ";
                const Cell& cell = r.cells[c];
                out << pad_left(cell.trials == 0 ? "-" : fmt("%.1f", se ? cell.se : cell.percent), cw);
            }
            out << '\n';
        }
    };
    header();
    body(false);
    out << "\nstandard errors (percentage points)\n";
    header();
    body(true);
    if (table.degenerate > 0) out << "\nresampled degenerate repetitions: " << table.degenerate << '\n';
}

void render_table_csv(std::ostream& out, const ErrorRateTable& table) {
    out << "table,model,error_rate,row,null_effect,method,n,rejections,trials,percent,se\n";
    for (const auto& r : table.rows) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const Cell& cell = r.cells[c];
            if (cell.trials == 0) continue;
            out << table.title << ',' << to_string(table.model) << ',' << to_string(r.rate) << ',' << r.label << ','
                << (r.null_effect ? "true" : "false") << ',' << to_string(table.columns[c].method) << ','
                << table.columns[c].replicates << ',' << cell.rejections << ',' << cell.trials << ','
                << fmt("%.4f", cell.percent) << ',' << fmt("%.4f", cell.se) << '\n';
        }
    }
}

}  // namespace repdoe
