#include "repdoe/scenario.hpp"

#include "repdoe/dataset_io.hpp"
#include "repdoe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace repdoe {

namespace {

// Prefixes a parse failure with the file and line it came from.
template <typename F>
auto with_location(const std::string& where, F&& parse) {
    try {
        return parse();
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Items separated by whitespace and/or commas.
std::vector<std::string> split_list(const std::string& s) {
    std::string flat = s;
    std::replace(flat.begin(), flat.end(), ',', ' ');
    std::istringstream in(flat);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::uint64_t parse_unsigned(const std::string& value, const std::string& where) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError(where + ": '" + value + "' is not a non-negative integer");
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw ValidationError(where + ": '" + value + "' is out of range");
    }
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source) {
    Scenario sc;
    enum class Section { top, location, dispersion } section = Section::top;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string where = source + " line " + std::to_string(number);
        const auto hash = line.find('#');
        const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ValidationError(where + ": unterminated section header");
            const std::string name = trim(t.substr(1, t.size() - 2));
            if (name == "location") section = Section::location;
            else if (name == "dispersion") section = Section::dispersion;
            else throw ValidationError(where + ": unknown section [" + name + "]");
            continue;
        }
        std::string key, value;
        if (const auto eq = t.find('='); eq != std::string::npos) {
            key = trim(t.substr(0, eq));
            value = trim(t.substr(eq + 1));
        } else if (section != Section::top) {
            // "A 0.5" is accepted inside coefficient tables.
            std::istringstream row(t);
            row >> key;
            std::getline(row, value);
            value = trim(value);
        } else {
            throw ValidationError(where + ": expected 'key = value'");
        }
        if (key.empty()) throw ValidationError(where + ": missing key");

        if (section != Section::top) {
            const double v = parse_real(value, where);
            const bool loc = section == Section::location;
            if (key == "intercept") {
                (loc ? sc.location_intercept : sc.dispersion_intercept) = v;
            } else {
                auto& table = loc ? sc.location : sc.dispersion;
                if (table.count(key)) throw ValidationError(where + ": effect '" + key + "' listed twice");
                table[key] = v;
            }
            continue;
        }

        if (key == "title") sc.title = value;
        else if (key == "factors") sc.factors = split_list(value);
        else if (key == "effects") sc.effects = value;
        else if (key == "model") sc.model = parse_model(value);
        else if (key == "replicates") {
            sc.replicates.clear();
            for (const auto& tok : split_list(value))
                sc.replicates.push_back(static_cast<unsigned>(parse_unsigned(tok, where)));
        } else if (key == "repetitions") sc.repetitions = parse_unsigned(value, where);
        else if (key == "alpha") sc.alpha = parse_real(value, where);
        else if (key == "methods") {
            sc.methods.clear();
            for (const auto& tok : split_list(value)) sc.methods.push_back(with_location(where, [&] { return parse_method(tok); }));
        } else if (key == "error_rates") {
            sc.error_rates.clear();
            for (const auto& tok : split_list(value))
                sc.error_rates.push_back(with_location(where, [&] { return parse_error_rate(tok); }));
        } else if (key == "seed") sc.seed = parse_unsigned(value, where);
        else if (key == "inner_samples") sc.inner_samples = parse_unsigned(value, where);
        else if (key == "smm_samples") sc.smm_samples = parse_unsigned(value, where);
        else if (key == "lenth_samples") sc.lenth_samples = parse_unsigned(value, where);
        else throw ValidationError(where + ": unknown key '" + key + "'");
    }
    if (sc.factors.empty()) throw ValidationError(source + ": 'factors' is required");
    if (sc.replicates.empty()) throw ValidationError(source + ": 'replicates' must list at least one n");
    if (sc.methods.empty()) throw ValidationError(source + ": 'methods' must list at least one method");
    if (sc.error_rates.empty()) throw ValidationError(source + ": 'error_rates' must list ier and/or eer");
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario '" + path.string() + "'");
    auto sc = parse_scenario(in, path.filename().string());
    if (sc.title.empty()) sc.title = path.stem().string();
    return sc;
}

Design scenario_design(const Scenario& scenario) {
    auto full = build_full_factorial(scenario.factors);
    if (scenario.effects.empty() || scenario.effects == "full") return full;
    std::vector<int> levels(full.runs() * full.factor_count());
    for (std::size_t i = 0; i < full.runs(); ++i)
        for (std::size_t f = 0; f < full.factor_count(); ++f)
            levels[i * full.factor_count() + f] = full.factor_level(i, f);
    return design_from_levels(scenario.factors, std::move(levels), scenario.effects);
}

RunModel scenario_run_model(const Scenario& scenario, const Design& design) {
    RunModel rm;
    rm.means.assign(design.runs(), scenario.location_intercept);
    rm.variances.assign(design.runs(), 0.0);
    std::vector<double> log_var(design.runs(), scenario.dispersion_intercept);
    const auto apply = [&](const std::map<std::string, double>& coefs, std::vector<double>& target) {
        for (const auto& [name, value] : coefs) {
            const auto idx = design.find_effect(name);
            if (!idx) throw ValidationError("scenario effect '" + name + "' is not in the design");
            const auto x = design.column(*idx);
            for (std::size_t i = 0; i < design.runs(); ++i) target[i] += value * x[i];
        }
    };
    apply(scenario.location, rm.means);
    apply(scenario.dispersion, log_var);
    for (std::size_t i = 0; i < design.runs(); ++i) {
        rm.variances[i] = std::exp(log_var[i]);
        if (!std::isfinite(rm.variances[i]) || !(rm.variances[i] > 0.0) || !std::isfinite(rm.means[i]))
            throw ValidationError("scenario implies a non-finite mean or variance in run " + std::to_string(i + 1));
    }
    return rm;
}

void validate_scenario(const Scenario& scenario, const Design& design) {
    if (scenario.repetitions < kMinRepetitions)
        throw ValidationError("scenario needs at least " + std::to_string(kMinRepetitions) + " repetitions");
    if (!(scenario.alpha > 0.0 && scenario.alpha < 1.0)) throw ValidationError("scenario alpha must lie in (0, 1)");
    for (unsigned n : scenario.replicates) {
        if (n < 2) throw ValidationError("scenario replicates must be >= 2");
        const bool vca_disp = scenario.model == Model::dispersion &&
                              std::find(scenario.methods.begin(), scenario.methods.end(), Method::vca) !=
                                  scenario.methods.end();
        if (vca_disp && n < 3) throw ValidationError("the VCA dispersion test needs n >= 3");
    }
    if (scenario.inner_samples < 10000) throw ValidationError("inner_samples must be >= 10000");
    if (scenario.smm_samples < 10000) throw ValidationError("smm_samples must be >= 10000");
    if (scenario.lenth_samples < 1000) throw ValidationError("lenth_samples must be >= 1000");
    const bool lenth = std::find(scenario.methods.begin(), scenario.methods.end(), Method::lenth) !=
                       scenario.methods.end();
    if (lenth && design.effect_count() < 2) throw ValidationError("Lenth's method needs at least two effects");
    (void)scenario_run_model(scenario, design);
}

}  // namespace repdoe
