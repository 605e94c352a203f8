#include "repdoe/dataset_io.hpp"

#include "repdoe/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace repdoe {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct CsvLine {
    std::size_t number = 0;
    std::vector<std::string> fields;
};

std::vector<CsvLine> read_csv(std::istream& in, const std::string& source) {
    std::vector<CsvLine> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        lines.push_back({number, split_csv_line(t)});
    }
    if (lines.empty()) throw ValidationError(source + ": file is empty (a header row is required)");
    return lines;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    return in;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_real(const std::string& field, const std::string& where) {
    const auto b = field.find_first_not_of(" \t\r");
    std::string s = b == std::string::npos ? std::string() : field.substr(b, field.find_last_not_of(" \t\r") - b + 1);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ValidationError(where + ": '" + field + "' is not a number");
    if (!std::isfinite(v)) throw ValidationError(where + ": '" + field + "' is not finite");
    return v;
}

FactorTable read_design_csv(std::istream& in, const std::string& source) {
    const auto lines = read_csv(in, source);
    FactorTable table;
    table.factor_names = lines.front().fields;
    for (const auto& name : table.factor_names)
        if (name.empty()) throw ValidationError(source + " line " + std::to_string(lines.front().number) + ": empty factor name");
    const std::size_t k = table.factor_names.size();
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& ln = lines[r];
        const std::string where = source + " line " + std::to_string(ln.number);
        if (ln.fields.size() != k)
            throw ValidationError(where + ": expected " + std::to_string(k) + " columns, found " +
                                  std::to_string(ln.fields.size()));
        for (const auto& f : ln.fields) {
            const double v = parse_real(f, where);
            if (v != 1.0 && v != -1.0) throw ValidationError(where + ": design entry '" + f + "' is not -1 or +1");
            table.levels.push_back(static_cast<int>(v));
        }
        ++table.runs;
    }
    if (table.runs == 0) throw ValidationError(source + ": no design rows");
    return table;
}

FactorTable read_design_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_design_csv(in, path.string());
}

ReplicatedData read_responses_csv(std::istream& in, const std::string& source) {
    const auto lines = read_csv(in, source);
    const std::size_t n = lines.front().fields.size();
    if (n < 2) throw ValidationError(source + ": at least two replicate columns are required");
    std::vector<double> y;
    std::size_t runs = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& ln = lines[r];
        const std::string where = source + " line " + std::to_string(ln.number);
        if (ln.fields.size() != n)
            throw ValidationError(where + ": expected " + std::to_string(n) + " replicate columns, found " +
                                  std::to_string(ln.fields.size()));
        for (const auto& f : ln.fields) y.push_back(parse_real(f, where));
        ++runs;
    }
    if (runs == 0) throw ValidationError(source + ": no response rows");
    return ReplicatedData(std::move(y), runs, n);
}

ReplicatedData read_responses_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_responses_csv(in, path.string());
}

Dataset read_dataset(const std::filesystem::path& design_path, const std::filesystem::path& responses_path,
                     const std::string& effects_spec) {
    auto table = read_design_csv(design_path);
    auto data = read_responses_csv(responses_path);
    if (table.runs != data.runs())
        throw ValidationError("design has " + std::to_string(table.runs) + " runs but responses have " +
                              std::to_string(data.runs()));
    auto design = design_from_levels(table.factor_names, std::move(table.levels), effects_spec);
    return Dataset{std::move(design), std::move(data)};
}

void write_design_csv(std::ostream& out, const Design& design) {
    const auto& names = design.factor_names();
    for (std::size_t f = 0; f < names.size(); ++f) out << (f ? "," : "") << names[f];
    out << '\n';
    for (std::size_t i = 0; i < design.runs(); ++i) {
        for (std::size_t f = 0; f < names.size(); ++f) out << (f ? "," : "") << design.factor_level(i, f);
        out << '\n';
    }
}

void write_responses_csv(std::ostream& out, const ReplicatedData& data) {
    for (std::size_t j = 0; j < data.replicates(); ++j) out << (j ? "," : "") << 'y' << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < data.runs(); ++i) {
        const auto row = data.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_real(row[j]);
        out << '\n';
    }
}

std::vector<double> read_variances_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    const auto lines = read_csv(in, path.string());
    if (lines.front().fields.size() != 1)
        throw ValidationError(path.string() + ": expected a single column of run variances");
    std::vector<double> out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& ln = lines[r];
        const std::string where = path.string() + " line " + std::to_string(ln.number);
        if (ln.fields.size() != 1) throw ValidationError(where + ": expected one value");
        const double v = parse_real(ln.fields[0], where);
        if (v < 0.0) throw ValidationError(where + ": variance must be >= 0");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError(path.string() + ": no variances");
    return out;
}

}  // namespace repdoe
