#include "repdoe/design.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace repdoe {

namespace {

bool all_single_char(const std::vector<std::string>& names) {
    return std::all_of(names.begin(), names.end(), [](const std::string& s) { return s.size() == 1; });
}

// Distinct rows and m = 2^k: distinct effect columns are then orthogonal.
bool is_full_factorial(const std::vector<int>& levels, std::size_t runs, std::size_t k) {
    if (k >= 63 || runs != (std::size_t{1} << k)) return false;
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < runs; ++i) {
        std::uint64_t code = 0;
        for (std::size_t f = 0; f < k; ++f)
            if (levels[i * k + f] > 0) code |= std::uint64_t{1} << f;
        if (!seen.insert(code).second) return false;
    }
    return true;
}

void combinations(std::size_t k, std::size_t order, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == order) {
        out.push_back(cur);
        return;
    }
    for (std::size_t f = start; f < k; ++f) {
        cur.push_back(f);
        combinations(k, order, f + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<std::size_t>> effects_up_to(std::size_t k, std::size_t max_order) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    for (std::size_t order = 1; order <= max_order; ++order) combinations(k, order, 0, cur, out);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::size_t> parse_effect_name(const std::vector<std::string>& factor_names,
                                           const std::string& name) {
    std::vector<std::string> parts;
    if (name.find_first_of("*:") != std::string::npos) {
        std::string part;
        std::istringstream in(name);
        while (std::getline(in, part, name.find('*') != std::string::npos ? '*' : ':'))
            parts.push_back(trim(part));
    } else if (all_single_char(factor_names)) {
        for (char c : name) parts.emplace_back(1, c);
    } else {
        parts.push_back(name);
    }
    std::vector<std::size_t> idx;
    for (const auto& p : parts) {
        const auto it = std::find(factor_names.begin(), factor_names.end(), p);
        if (it == factor_names.end())
            throw ValidationError("effect '" + name + "' refers to unknown factor '" + p + "'");
        idx.push_back(static_cast<std::size_t>(it - factor_names.begin()));
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw ValidationError("effect '" + name + "' repeats a factor");
    return idx;
}

}  // namespace

std::string effect_label(const std::vector<std::string>& factor_names,
                         const std::vector<std::size_t>& factors) {
    const bool compact = all_single_char(factor_names);
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0 && !compact) out += '*';
        out += factor_names.at(factors[i]);
    }
    return out;
}

Design::Design(std::vector<std::string> factor_names, std::vector<int> levels,
               std::vector<std::vector<std::size_t>> effects)
    : factor_names_(std::move(factor_names)), effect_factors_(std::move(effects)), levels_(std::move(levels)) {
    const std::size_t k = factor_names_.size();
    if (k == 0) throw ValidationError("design needs at least one factor");
    {
        std::set<std::string> uniq;
        for (const auto& f : factor_names_) {
            if (f.empty()) throw ValidationError("factor names must be non-empty");
            if (!uniq.insert(f).second) throw ValidationError("duplicate factor name '" + f + "'");
        }
    }
    if (levels_.empty() || levels_.size() % k != 0)
        throw ValidationError("factor-level matrix size is not a multiple of the factor count");
    runs_ = levels_.size() / k;
    if (runs_ < 2 || runs_ % 2 != 0) throw ValidationError("design needs an even number of runs >= 2");
    for (std::size_t i = 0; i < levels_.size(); ++i)
        if (levels_[i] != 1 && levels_[i] != -1)
            throw ValidationError("design entry in run " + std::to_string(i / k + 1) + " is not -1 or +1");
    if (effect_factors_.empty()) throw ValidationError("design needs at least one effect");

    std::set<std::vector<std::size_t>> seen;
    columns_.assign(runs_ * effect_factors_.size(), 1);
    for (std::size_t l = 0; l < effect_factors_.size(); ++l) {
        auto& fs = effect_factors_[l];
        std::sort(fs.begin(), fs.end());
        if (fs.empty()) throw ValidationError("empty effect");
        for (auto f : fs)
            if (f >= k) throw ValidationError("effect refers to a factor index out of range");
        if (std::adjacent_find(fs.begin(), fs.end()) != fs.end())
            throw ValidationError("effect repeats a factor");
        if (!seen.insert(fs).second) throw ValidationError("duplicate effect " + effect_label(factor_names_, fs));
        effect_names_.push_back(effect_label(factor_names_, fs));
        int minus = 0;
        for (std::size_t i = 0; i < runs_; ++i) {
            int v = 1;
            for (auto f : fs) v *= levels_[i * k + f];
            columns_[l * runs_ + i] = v;
            minus += v < 0;
        }
        if (static_cast<std::size_t>(minus) * 2 != runs_)
            throw ValidationError("effect " + effect_names_.back() + " is not balanced");
    }

    if (!is_full_factorial(levels_, runs_, k)) {
        const std::size_t ne = effect_factors_.size();
        for (std::size_t a = 0; a < ne; ++a)
            for (std::size_t b = a + 1; b < ne; ++b) {
                long dot = 0;
                for (std::size_t i = 0; i < runs_; ++i)
                    dot += columns_[a * runs_ + i] * columns_[b * runs_ + i];
                if (dot != 0)
                    throw ValidationError("effects " + effect_names_[a] + " and " + effect_names_[b] +
                                          " are not orthogonal (aliased or unbalanced design)");
            }
    }
}

std::span<const int> Design::column(std::size_t effect) const {
    if (effect >= effect_names_.size()) throw ValidationError("effect index out of range");
    return {columns_.data() + effect * runs_, runs_};
}

std::optional<std::size_t> Design::find_effect(const std::string& name) const {
    const auto it = std::find(effect_names_.begin(), effect_names_.end(), name);
    if (it != effect_names_.end()) return static_cast<std::size_t>(it - effect_names_.begin());
    // Accept any spelling that resolves to the same factor set ("BA" for "AB").
    try {
        const auto fs = parse_effect_name(factor_names_, name);
        const auto jt = std::find(effect_factors_.begin(), effect_factors_.end(), fs);
        if (jt != effect_factors_.end()) return static_cast<std::size_t>(jt - effect_factors_.begin());
    } catch (const ValidationError&) {
    }
    return std::nullopt;
}

Design build_full_factorial(const std::vector<std::string>& factor_names, std::optional<std::size_t> max_order) {
    const std::size_t k = factor_names.size();
    if (k < 2 || k > 12) throw ValidationError("full factorial supports 2 to 12 factors");
    const std::size_t order = max_order.value_or(k);
    if (order == 0 || order > k) throw ValidationError("interaction order must lie in [1, k]");
    const std::size_t m = std::size_t{1} << k;
    std::vector<int> levels(m * k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t f = 0; f < k; ++f) levels[i * k + f] = ((i >> f) & 1U) ? 1 : -1;
    return Design(factor_names, std::move(levels), effects_up_to(k, order));
}

Design design_from_levels(const std::vector<std::string>& factor_names, std::vector<int> levels,
                          const std::string& effects_spec) {
    const std::string spec = trim(effects_spec);
    const std::size_t k = factor_names.size();
    std::vector<std::vector<std::size_t>> effects;
    if (spec.empty() || spec == "full") {
        effects = effects_up_to(k, k);
    } else if (spec.rfind("order=", 0) == 0) {
        std::size_t order = 0;
        try {
            order = static_cast<std::size_t>(std::stoul(spec.substr(6)));
        } catch (const std::exception&) {
            throw ValidationError("bad effects spec '" + spec + "'");
        }
        if (order == 0 || order > k) throw ValidationError("interaction order must lie in [1, k]");
        effects = effects_up_to(k, order);
    } else {
        std::istringstream in(spec);
        std::string token;
        while (std::getline(in, token, ',')) {
            token = trim(token);
            if (!token.empty()) effects.push_back(parse_effect_name(factor_names, token));
        }
    }
    return Design(factor_names, std::move(levels), std::move(effects));
}

RunSummary summarize(std::span<const double> responses, std::size_t runs, std::size_t replicates) {
    if (replicates < 2) throw ValidationError("at least two replicates per run are required");
    if (responses.size() != runs * replicates) throw ValidationError("response matrix has the wrong size");
    RunSummary out;
    out.means.resize(runs);
    out.variances.resize(runs);
    const double n = static_cast<double>(replicates);
    for (std::size_t i = 0; i < runs; ++i) {
        const auto row = responses.subspan(i * replicates, replicates);
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / n;
        double ss = 0.0;
        for (double y : row) ss += (y - mean) * (y - mean);
        out.means[i] = mean;
        out.variances[i] = ss / (n - 1.0);
    }
    return out;
}

ReplicatedData::ReplicatedData(std::vector<double> responses, std::size_t runs, std::size_t replicates)
    : responses_(std::move(responses)), runs_(runs), replicates_(replicates) {
    if (runs == 0) throw ValidationError("data needs at least one run");
    for (std::size_t i = 0; i < responses_.size(); ++i)
        if (!std::isfinite(responses_[i]))
            throw ValidationError("non-finite response in run " + std::to_string(i / std::max<std::size_t>(replicates, 1) + 1));
    summary_ = summarize(responses_, runs_, replicates_);
}

std::span<const double> ReplicatedData::row(std::size_t run) const {
    return std::span<const double>(responses_).subspan(run * replicates_, replicates_);
}

EffectEstimates estimate_effects(const Design& design, std::span<const double> z, Model model) {
    const std::size_t m = design.runs();
    if (z.size() != m) throw ValidationError("response vector length differs from the number of runs");
    for (double v : z)
        if (!std::isfinite(v)) throw DegenerateError("response vector has non-finite entries");
    EffectEstimates est;
    est.model = model;
    est.names = design.effect_names();
    est.intercept = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(m);
    est.coefficients.resize(design.effect_count());
    for (std::size_t l = 0; l < design.effect_count(); ++l) {
        const auto x = design.column(l);
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += x[i] * z[i];
        est.coefficients[l] = dot / static_cast<double>(m);
    }
    return est;
}

std::vector<double> model_response(const ReplicatedData& data, Model model) {
    if (model == Model::location) return data.means();
    std::vector<std::size_t> zero_runs;
    std::vector<double> z(data.runs());
    for (std::size_t i = 0; i < data.runs(); ++i) {
        const double s2 = data.variances()[i];
        if (!(s2 > 0.0)) zero_runs.push_back(i);
        else z[i] = std::log(s2);
    }
    if (!zero_runs.empty())
        throw DegenerateError("zero sample variance in " + describe_runs(zero_runs) +
                                  "; the dispersion model needs log s^2",
                              zero_runs);
    return z;
}

EffectEstimates estimate_effects(const Design& design, const ReplicatedData& data, Model model) {
    if (data.runs() != design.runs())
        throw ValidationError("data has " + std::to_string(data.runs()) + " runs, design has " +
                              std::to_string(design.runs()));
    const auto z = model_response(data, model);
    return estimate_effects(design, z, model);
}

std::vector<HalfNormalPoint> half_normal_points(const EffectEstimates& estimates) {
    const std::size_t count = estimates.coefficients.size();
    std::vector<HalfNormalPoint> pts(count);
    for (std::size_t l = 0; l < count; ++l) {
        pts[l].effect = l < estimates.names.size() ? estimates.names[l] : std::to_string(l + 1);
        pts[l].abs_estimate = std::fabs(estimates.coefficients[l]);
    }
    std::sort(pts.begin(), pts.end(), [](const HalfNormalPoint& a, const HalfNormalPoint& b) {
        if (a.abs_estimate != b.abs_estimate) return a.abs_estimate < b.abs_estimate;
        return a.effect < b.effect;
    });
    for (std::size_t i = 0; i < count; ++i)
        pts[i].quantile = normal_quantile(0.5 + 0.5 * (static_cast<double>(i) + 0.5) / static_cast<double>(count));
    return pts;
}

const char* to_string(Model model) { return model == Model::location ? "location" : "dispersion"; }

Model parse_model(const std::string& text) {
    if (text == "location" || text == "loc" || text == "mean") return Model::location;
    if (text == "dispersion" || text == "disp" || text == "variance") return Model::dispersion;
    throw ValidationError("unknown model '" + text + "' (expected location or dispersion)");
}

}  // namespace repdoe
