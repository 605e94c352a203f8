#include "repdoe/fixtures.hpp"

#include "repdoe/dataset_io.hpp"
#include "repdoe/errors.hpp"
#include "repdoe/mc.hpp"
#include "repdoe/sampling.hpp"
#include "repdoe/scenario.hpp"
#include "repdoe/simulation.hpp"
#include "repdoe/special.hpp"
#include "repdoe/vca.hpp"
#include "repdoe/wh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace repdoe {

namespace {

std::vector<std::string> split_id(const std::string& id) {
    std::vector<std::string> parts;
    std::stringstream in(id);
    for (std::string p; std::getline(in, p, '/');) parts.push_back(p);
    return parts;
}

unsigned to_uint(const std::string& s, const std::string& id) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("check '" + id + "': '" + s + "' is not an integer");
    return static_cast<unsigned>(std::stoul(s));
}

std::uint64_t to_u64(const std::string& s, const std::string& id) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("check '" + id + "': '" + s + "' is not an integer");
    return std::stoull(s);
}

void expect_parts(const std::vector<std::string>& parts, std::size_t count, const std::string& id) {
    if (parts.size() != count)
        throw ValidationError("check '" + id + "' expects " + std::to_string(count - 1) + " arguments");
}

// Full factorial with all interactions for k factors named A, B, ...
Design letters_design(unsigned k) {
    std::vector<std::string> names;
    for (unsigned f = 0; f < k; ++f) names.push_back(std::string(1, static_cast<char>('A' + f)));
    return build_full_factorial(names);
}

unsigned log2_runs(unsigned m, const std::string& id) {
    for (unsigned k = 2; k <= 12; ++k)
        if ((1u << k) == m) return k;
    throw ValidationError("check '" + id + "': m must be a power of two between 4 and 4096");
}

}  // namespace

std::size_t VerifyReport::failed() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.skipped && !c.passed; }));
}

std::size_t VerifyReport::passed() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.skipped && c.passed; }));
}

std::size_t VerifyReport::skipped() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.skipped; }));
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open manifest '" + path.string() + "'");
    std::vector<ManifestEntry> out;
    std::string line;
    std::size_t number = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        const std::string where = path.filename().string() + " line " + std::to_string(number);
        if (header) {
            if (fields.size() != 4 || fields[0] != "check_id")
                throw ValidationError(where + ": expected header check_id,expected,tolerance,provenance");
            header = false;
            continue;
        }
        if (fields.size() != 4) throw ValidationError(where + ": expected 4 fields");
        ManifestEntry e;
        e.manifest = path.stem().string();
        e.line = number;
        e.id = fields[0];
        e.expected = parse_real(fields[1], where);
        e.tolerance = parse_real(fields[2], where);
        e.provenance = fields[3];
        if (e.tolerance < 0.0) throw ValidationError(where + ": negative tolerance");
        if (e.provenance.empty()) throw ValidationError(where + ": missing provenance");
        out.push_back(std::move(e));
    }
    if (header) throw ValidationError(path.string() + ": empty manifest");
    return out;
}

double proposition_max_relative_error(std::size_t count, std::uint64_t seed) {
    Rng rng(RngState{seed, 0x70726f70ULL});
    const Design d8 = letters_design(3);
    const Design d16 = letters_design(4);
    double worst = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        const Design& design = (rng.next_u64() & 1) ? d16 : d8;
        const auto n = static_cast<std::size_t>(3 + rng.next_u64() % 4);
        const std::size_t m = design.runs();
        std::vector<double> y(m * n);
        for (std::size_t i = 0; i < m; ++i) {
            const double mu = 20.0 * (rng.uniform() - 0.5);
            const double sd = std::exp(2.0 * (rng.uniform() - 0.5));
            for (std::size_t j = 0; j < n; ++j) y[i * n + j] = mu + sd * rng.normal();
        }
        const ReplicatedData data(std::move(y), m, n);
        const auto t = wh_t_statistics(data, design);
        const auto f = vca_f_statistics(data, design, Model::location);
        for (std::size_t l = 0; l < t.size(); ++l) {
            const double t2 = t[l] * t[l];
            const double scale = std::max(t2, std::numeric_limits<double>::min());
            worst = std::max(worst, std::fabs(f[l] - t2) / scale);
        }
    }
    return worst;
}

double evaluate_check(const std::string& id) {
    const auto p = split_id(id);
    if (p.empty()) throw ValidationError("empty check id");
    const std::string& kind = p[0];
    if (kind == "a_n") {
        expect_parts(p, 2, id);
        return a_n(to_uint(p[1], id));
    }
    if (kind == "exact_log_variance") {
        expect_parts(p, 2, id);
        return exact_log_variance(to_uint(p[1], id));
    }
    if (kind == "approx_log_variance") {
        expect_parts(p, 2, id);
        return approximate_log_variance(to_uint(p[1], id));
    }
    if (kind == "disp_ier_critical") {
        expect_parts(p, 3, id);
        return disp_ier_critical(parse_real(p[1], id), to_uint(p[2], id));
    }
    if (kind == "disp_eer_critical") {
        expect_parts(p, 4, id);
        return disp_eer_critical(parse_real(p[1], id), to_uint(p[2], id), to_uint(p[3], id));
    }
    if (kind == "t_critical") {
        expect_parts(p, 3, id);
        return two_sided_t_critical(parse_real(p[1], id), to_uint(p[2], id));
    }
    if (kind == "trigamma") {
        expect_parts(p, 2, id);
        return trigamma(parse_real(p[1], id));
    }
    if (kind == "proposition") {
        expect_parts(p, 3, id);
        return proposition_max_relative_error(to_uint(p[1], id), to_u64(p[2], id));
    }
    if (kind == "remark1_ier" || kind == "remark1_eer") {
        // remark1_*/m/n/M/seed with equal weights 1/m
        expect_parts(p, 5, id);
        const unsigned m = to_uint(p[1], id);
        const unsigned n = to_uint(p[2], id);
        const std::size_t samples = to_uint(p[3], id);
        const std::uint64_t seed = to_u64(p[4], id);
        const Design design = letters_design(log2_runs(m, id));
        const VarianceWeights w{std::vector<double>(m, 1.0 / m)};
        if (kind == "remark1_ier") return mc_location_ier_critical(w, n, 0.05, samples, {seed, 11}).critical;
        // difference from an SMM(I, m(n-1)) quantile drawn on an unrelated stream
        const double mc = mc_location_eer_critical(w, design, n, 0.05, samples, {seed, 12}).critical;
        const double smm = smm_quantile({seed, 13}, static_cast<unsigned>(design.effect_count()), m * (n - 1), 0.95,
                                        samples);
        return mc - smm;
    }
    if (kind == "smm") {
        // smm/I/df-or-inf/p/M/seed
        expect_parts(p, 6, id);
        const SmmDof df = p[2] == "inf" ? SmmDof{} : SmmDof{to_uint(p[2], id)};
        return smm_quantile({to_u64(p[5], id), 14}, to_uint(p[1], id), df, parse_real(p[3], id), to_uint(p[4], id));
    }
    throw ValidationError("unknown check id '" + id + "'");
}

VerifyReport verify_fixtures(const std::filesystem::path& dir, const VerifyOptions& options) {
    namespace fs = std::filesystem;
    VerifyReport report;
    const auto fail_missing = [&](const std::string& what) {
        FixtureCheck c;
        c.entry.id = what;
        c.message = "missing fixture: " + what;
        report.checks.push_back(std::move(c));
    };
    const fs::path manifest_dir = dir / "manifests";
    if (!fs::is_directory(manifest_dir)) {
        fail_missing(manifest_dir.string());
        return report;
    }
    std::vector<fs::path> manifests;
    if (options.only_manifests.empty()) {
        for (const auto& e : fs::directory_iterator(manifest_dir))
            if (e.path().extension() == ".csv") manifests.push_back(e.path());
        std::sort(manifests.begin(), manifests.end());
    } else {
        for (const auto& name : options.only_manifests) {
            fs::path p = manifest_dir / name;
            if (p.extension() != ".csv") p += ".csv";
            if (!fs::exists(p)) fail_missing(p.string());
            else manifests.push_back(p);
        }
    }

    std::map<std::string, std::optional<ErrorRateTable>> tables;  // by scenario stem; nullopt = failed to load
    std::map<std::string, std::string> table_errors;

    for (const auto& path : manifests) {
        std::vector<ManifestEntry> entries;
        try {
            entries = read_manifest(path);
        } catch (const std::exception& e) {
            FixtureCheck c;
            c.entry.manifest = path.stem().string();
            c.entry.id = path.filename().string();
            c.message = e.what();
            report.checks.push_back(std::move(c));
            continue;
        }
        for (auto& entry : entries) {
            FixtureCheck c;
            c.entry = entry;
            c.tolerance = entry.tolerance;
            try {
                const auto parts = split_id(entry.id);
                if (!parts.empty() && parts[0] == "table") {
                    // table/<scenario>/<row>/<method>/<n>
                    expect_parts(parts, 5, entry.id);
                    if (!options.include_tables) {
                        c.skipped = true;
                        c.message = "simulation check (enable tables to run)";
                        report.checks.push_back(std::move(c));
                        continue;
                    }
                    const std::string& stem = parts[1];
                    if (!tables.count(stem)) {
                        const fs::path scn = dir / "scenarios" / (stem + ".scn");
                        try {
                            if (!fs::exists(scn)) throw ValidationError("missing fixture: " + scn.string());
                            SimulationOptions so;
                            so.threads = options.threads;
                            so.repetitions = options.repetitions;
                            tables[stem] = estimate_error_rates(load_scenario(scn), so);
                        } catch (const std::exception& e) {
                            tables[stem] = std::nullopt;
                            table_errors[stem] = e.what();
                        }
                    }
                    if (!tables[stem]) throw ValidationError(table_errors[stem]);
                    const Cell& cell =
                        tables[stem]->cell(parts[2], parse_method(parts[3]), to_uint(parts[4], entry.id));
                    c.actual = cell.percent;
                    if (options.se_multiplier > 0.0) {
                        // binomial SE at the expected rate, so a 0% cell still gets a usable band
                        const double q = std::clamp(entry.expected / 100.0, 0.0, 1.0);
                        const double se = 100.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(cell.trials));
                        c.tolerance = options.se_multiplier * std::max(se, cell.se);
                    }
                } else {
                    c.actual = evaluate_check(entry.id);
                }
                c.passed = std::fabs(*c.actual - entry.expected) <= c.tolerance;
                if (!c.passed) c.message = "outside tolerance";
            } catch (const std::exception& e) {
                c.passed = false;
                c.message = e.what();
            }
            report.checks.push_back(std::move(c));
        }
    }
    return report;
}

}  // namespace repdoe
