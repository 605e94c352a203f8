// repdoe: screening tests for replicated two-level factorial experiments.
//
// Exit codes: 0 success, 2 usage / validation / domain errors, 3 degenerate
// data, 4 numerical or internal failure.

#include "repdoe/analysis.hpp"
#include "repdoe/dataset_io.hpp"
#include "repdoe/errors.hpp"
#include "repdoe/fixtures.hpp"
#include "repdoe/mc.hpp"
#include "repdoe/render.hpp"
#include "repdoe/scenario.hpp"
#include "repdoe/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace repdoe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInternal = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("REPDOE_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
        throw ValidationError(std::string("REPDOE_SEED='") + env + "' is not a non-negative integer");
    }
    return kDefaultSeed;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Options shared by analyze / critical / halfnormal.
struct MethodArgs {
    std::string model = "location";
    std::string method = "mc";
    std::string error_rate = "ier";
    double alpha = 0.05;
    std::size_t mc_samples = 0;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;

    AnalysisConfig config() const {
        AnalysisConfig c;
        c.model = parse_model(model);
        c.method = parse_method(method);
        c.error_rate = parse_error_rate(error_rate);
        c.alpha = alpha;
        c.mc_samples = mc_samples;
        c.seed = seed ? *seed : default_seed();
        c.workers = threads;
        return c;
    }
};

void add_method_options(CLI::App* cmd, MethodArgs& a) {
    cmd->add_option("--model", a.model, "location or dispersion")->check(CLI::IsMember({"location", "dispersion"}));
    cmd->add_option("--method", a.method, "wh, vca, lenth or mc")->check(CLI::IsMember({"wh", "vca", "lenth", "mc", "ours"}));
    cmd->add_option("--error-rate", a.error_rate, "ier or eer")->check(CLI::IsMember({"ier", "eer"}));
    cmd->add_option("--alpha", a.alpha, "test level");
    cmd->add_option("--mc-samples", a.mc_samples, "Monte Carlo sample count M (0: method default)");
    cmd->add_option("--seed", a.seed, "random seed (default: $REPDOE_SEED or built in)");
    cmd->add_option("--threads", a.threads, "worker threads for Monte Carlo cutoffs (0: all cores)");
}

struct DatasetArgs {
    std::string design;
    std::string responses;
    std::string effects = "full";
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& d) {
    cmd->add_option("--design", d.design, "design CSV (factor columns of -1/+1)")->required();
    cmd->add_option("--responses", d.responses, "responses CSV (one column per replicate)")->required();
    cmd->add_option("--effects", d.effects, "\"full\", \"order=k\" or a list such as A,B,AB");
}

int cmd_analyze(const MethodArgs& m, const DatasetArgs& d, const std::string& out_path) {
    const auto config = m.config();
    validate_config(config);
    const auto ds = read_dataset(d.design, d.responses, d.effects);
    const auto report = analyze(config, ds.design, ds.data);
    render_report_text(std::cout, report);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        render_report_csv(out, report);
        std::cout << "\nwrote " << out_path << '\n';
    }
    return kExitOk;
}

struct CriticalArgs {
    std::size_t runs = 0;
    std::size_t replicates = 0;
    std::size_t effects = 0;
    std::string variances;
    std::string design;
    std::string effects_spec = "full";
};

int cmd_critical(const MethodArgs& m, const CriticalArgs& c) {
    const auto config = m.config();
    validate_config(config);
    if (c.replicates < 2) throw ValidationError("--replicates (n) must be at least 2");
    CriticalValue cv;
    if (critical_depends_on_data(config)) {
        if (c.variances.empty())
            throw ValidationError("Monte Carlo location cutoffs need run variances: pass --variances FILE");
        const auto s2 = read_variances_csv(c.variances);
        if (c.runs != 0 && c.runs != s2.size())
            throw ValidationError("--runs " + std::to_string(c.runs) + " disagrees with " +
                                  std::to_string(s2.size()) + " variances in " + c.variances);
        const auto weights = variance_weights(s2);
        const std::size_t samples = default_samples(config);
        const RngState rng{config.seed, kStreamMcLocation};
        if (config.error_rate == ErrorRate::ier) {
            cv = mc_location_ier_critical(weights, c.replicates, config.alpha, samples, rng, config.workers)
                     .as_critical_value();
        } else {
            std::optional<Design> design;
            if (!c.design.empty()) {
                auto table = read_design_csv(fs::path(c.design));
                design.emplace(design_from_levels(table.factor_names, std::move(table.levels), c.effects_spec));
            } else {
                std::size_t k = 0;
                while ((std::size_t{1} << k) < s2.size()) ++k;
                if ((std::size_t{1} << k) != s2.size() || k < 2 || k > 12)
                    throw ValidationError("pass --design for a run count that is not a power of two");
                std::vector<std::string> names;
                for (std::size_t f = 0; f < k; ++f) names.push_back(std::string(1, static_cast<char>('A' + f)));
                design.emplace(build_full_factorial(names));
            }
            if (design->runs() != s2.size())
                throw ValidationError("design has " + std::to_string(design->runs()) + " runs but " +
                                      std::to_string(s2.size()) + " variances were given");
            cv = mc_location_eer_critical(weights, *design, c.replicates, config.alpha, samples, rng, config.workers)
                     .as_critical_value();
        }
    } else {
        const bool needs_runs = config.method == Method::wh || config.method == Method::vca;
        if (needs_runs && c.runs < 2) throw ValidationError("--runs (m) is required for this method");
        const std::size_t effects = c.effects != 0 ? c.effects : (c.runs >= 2 ? c.runs - 1 : 0);
        const bool needs_effects = config.error_rate == ErrorRate::eer || config.method == Method::lenth;
        if (needs_effects && effects == 0) throw ValidationError("--effects-count (I) or --runs (m) is required");
        cv = data_free_critical(config, c.runs, c.replicates, effects == 0 ? 1 : effects);
    }
    std::cout << "critical " << fixed(cv.value, 6) << '\n';
    if (cv.samples) {
        std::cout << "seed " << *cv.seed << '\n'
                  << "stream " << *cv.stream << '\n'
                  << "samples " << *cv.samples << '\n';
        if (cv.standard_error) std::cout << "standard_error " << fixed(*cv.standard_error, 6) << '\n';
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string scenario;
    bool full = false;
    std::optional<std::size_t> repetitions;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out_dir;
    bool quiet = false;
};

int cmd_simulate(const SimulateArgs& a) {
    Scenario sc = load_scenario(a.scenario);
    if (a.seed) sc.seed = *a.seed;
    SimulationOptions opts;
    opts.threads = a.threads;
    if (a.full) opts.repetitions = 20000;
    if (a.repetitions) opts.repetitions = a.repetitions;
    if (!a.quiet) {
        opts.progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 25 == 0) std::cerr << "\r" << done << "/" << total << " blocks" << std::flush;
            if (done == total) std::cerr << '\n';
        };
    }
    const auto table = estimate_error_rates(sc, opts);
    render_table_text(std::cout, table);
    if (!a.out_dir.empty()) {
        const fs::path stem = fs::path(a.scenario).stem();
        const fs::path csv = fs::path(a.out_dir) / (stem.string() + ".csv");
        const fs::path txt = fs::path(a.out_dir) / (stem.string() + ".txt");
        auto c = open_output(csv);
        render_table_csv(c, table);
        auto t = open_output(txt);
        render_table_text(t, table);
        std::cout << "\nwrote " << csv.string() << " and " << txt.string() << '\n';
    }
    return kExitOk;
}

int cmd_halfnormal(const std::string& model, const DatasetArgs& d, const std::string& out_path) {
    const auto ds = read_dataset(d.design, d.responses, d.effects);
    const auto est = estimate_effects(ds.design, ds.data, parse_model(model));
    const auto points = half_normal_points(est);
    if (out_path.empty()) {
        render_half_normal_csv(std::cout, points);
    } else {
        auto out = open_output(out_path);
        render_half_normal_csv(out, points);
        std::cout << "wrote " << points.size() << " points to " << out_path << '\n';
    }
    return kExitOk;
}

struct GenerateArgs {
    std::string scenario;
    unsigned replicates = 0;
    std::size_t repetition = 0;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& a) {
    Scenario sc = load_scenario(a.scenario);
    if (a.seed) sc.seed = *a.seed;
    const Design design = scenario_design(sc);
    const unsigned n = a.replicates != 0 ? a.replicates : sc.replicates.front();
    if (n < 2) throw ValidationError("--replicates must be at least 2");
    (void)scenario_run_model(sc, design);
    const auto data = generate_dataset(sc, design, n, a.repetition);
    const fs::path dir(a.out_dir);
    auto dout = open_output(dir / "design.csv");
    write_design_csv(dout, design);
    auto rout = open_output(dir / "responses.csv");
    write_responses_csv(rout, data);
    std::cout << "wrote " << (dir / "design.csv").string() << " and " << (dir / "responses.csv").string() << '\n';
    return kExitOk;
}

struct VerifyArgs {
    std::string dir = REPDOE_DEFAULT_FIXTURES;
    bool tables = false;
    bool full = false;
    std::optional<std::size_t> repetitions;
    unsigned threads = 1;
    std::vector<std::string> manifests;
};

int cmd_verify(const VerifyArgs& a) {
    VerifyOptions opts;
    opts.include_tables = a.tables || a.full;
    opts.threads = a.threads;
    opts.only_manifests = a.manifests;
    if (a.repetitions) opts.repetitions = a.repetitions;
    if (a.full) {
        opts.repetitions = 20000;
        opts.se_multiplier = 3.0;
    }
    const auto report = verify_fixtures(a.dir, opts);
    for (const auto& c : report.checks) {
        const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
        std::cout << status << "  " << c.entry.manifest << (c.entry.manifest.empty() ? "" : ":") << c.entry.id;
        if (c.actual)
            std::cout << "  actual " << fixed(*c.actual, 6) << "  expected " << fixed(c.entry.expected, 6) << " +- "
                      << fixed(c.tolerance, 6);
        if (!c.entry.provenance.empty()) std::cout << "  [" << c.entry.provenance << "]";
        if (!c.message.empty() && !c.skipped) std::cout << "  " << c.message;
        std::cout << '\n';
    }
    std::cout << report.passed() << " passed, " << report.failed() << " failed, " << report.skipped()
              << " skipped\n";
    return report.failed() == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Screening tests for replicated two-level factorial experiments"};
    app.require_subcommand(1);

    MethodArgs method_args;
    DatasetArgs dataset_args;
    std::string out_path;

    auto* analyze_cmd = app.add_subcommand("analyze", "test every effect of a dataset");
    add_method_options(analyze_cmd, method_args);
    add_dataset_options(analyze_cmd, dataset_args);
    analyze_cmd->add_option("--out", out_path, "write the per-effect report as CSV");

    CriticalArgs critical_args;
    auto* critical_cmd = app.add_subcommand("critical", "print a critical value");
    add_method_options(critical_cmd, method_args);
    critical_cmd->add_option("--runs,-m", critical_args.runs, "number of runs m");
    critical_cmd->add_option("--replicates,-n", critical_args.replicates, "replicates per run n")->required();
    critical_cmd->add_option("--effects-count,-I", critical_args.effects, "number of effects I (default m - 1)");
    critical_cmd->add_option("--variances", critical_args.variances, "CSV of run variances s^2 (mc location)");
    critical_cmd->add_option("--design", critical_args.design, "design CSV for mc location eer");
    critical_cmd->add_option("--effects", critical_args.effects_spec, "effects of --design");

    SimulateArgs sim_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "run an error-rate study from a scenario file");
    simulate_cmd->add_option("scenario", sim_args.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_flag("--full", sim_args.full, "use N = 20000 repetitions (long)");
    simulate_cmd->add_option("--repetitions,-N", sim_args.repetitions, "override the scenario's N");
    simulate_cmd->add_option("--seed", sim_args.seed, "override the scenario's seed");
    simulate_cmd->add_option("--threads", sim_args.threads, "worker threads (0: all cores)");
    simulate_cmd->add_option("--out-dir", sim_args.out_dir, "write <scenario>.csv and <scenario>.txt here");
    simulate_cmd->add_flag("--quiet,-q", sim_args.quiet, "no progress output");

    std::string hn_model = "location";
    DatasetArgs hn_args;
    std::string hn_out;
    auto* halfnormal_cmd = app.add_subcommand("halfnormal", "export half-normal plot coordinates");
    halfnormal_cmd->add_option("--model", hn_model, "location or dispersion")
        ->check(CLI::IsMember({"location", "dispersion"}));
    add_dataset_options(halfnormal_cmd, hn_args);
    halfnormal_cmd->add_option("--out", hn_out, "output CSV (default: stdout)");

    GenerateArgs gen_args;
    auto* generate_cmd = app.add_subcommand("generate", "write one simulated dataset from a scenario");
    generate_cmd->add_option("scenario", gen_args.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    generate_cmd->add_option("--replicates,-n", gen_args.replicates, "replicates per run (default: first in file)");
    generate_cmd->add_option("--repetition", gen_args.repetition, "repetition index r");
    generate_cmd->add_option("--seed", gen_args.seed, "override the scenario's seed");
    generate_cmd->add_option("--out-dir", gen_args.out_dir, "directory for design.csv and responses.csv");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "recompute every manifest check under a fixtures directory");
    verify_cmd->add_option("--fixtures", verify_args.dir, "fixtures directory");
    verify_cmd->add_flag("--tables", verify_args.tables, "also run the simulation table checks");
    verify_cmd->add_flag("--full", verify_args.full, "table checks at N = 20000 with 3-SE tolerances");
    verify_cmd->add_option("--repetitions,-N", verify_args.repetitions, "override N for table checks");
    verify_cmd->add_option("--threads", verify_args.threads, "worker threads for table checks");
    verify_cmd->add_option("--manifest", verify_args.manifests, "only these manifests (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(method_args, dataset_args, out_path);
        if (*critical_cmd) return cmd_critical(method_args, critical_args);
        if (*simulate_cmd) return cmd_simulate(sim_args);
        if (*halfnormal_cmd) return cmd_halfnormal(hn_model, hn_args, hn_out);
        if (*generate_cmd) return cmd_generate(gen_args);
        if (*verify_cmd) return cmd_verify(verify_args);
    } catch (const DegenerateError& e) {
        std::cerr << "error: degenerate data: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MatrixError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
