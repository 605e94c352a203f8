#include "repdoe/simulation.hpp"

#include "repdoe/analysis.hpp"
#include "repdoe/errors.hpp"
#include "repdoe/lenth.hpp"
#include "repdoe/mc.hpp"
#include "repdoe/parallel.hpp"
#include "repdoe/vca.hpp"
#include "repdoe/wh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace repdoe {

namespace {

constexpr std::uint64_t kInnerOffset = 1ULL << 63;
constexpr std::uint64_t kEerOffset = 1ULL << 62;
constexpr std::uint64_t kCacheOffset = 1ULL << 61;
constexpr std::size_t kRepBlock = 16;
constexpr std::size_t kMaxAttempts = 100;

std::uint64_t cache_stream(unsigned n, std::uint64_t purpose) {
    return (static_cast<std::uint64_t>(n) << 40) ^ kCacheOffset ^ purpose;
}

struct Plan {
    const Scenario* scenario = nullptr;
    const Design* design = nullptr;
    RunModel truth;
    std::vector<std::size_t> null_effects;
    bool want_ier = false;
    bool want_eer = false;
};

// Cutoffs that do not depend on the data, for one n.
struct CachedCutoffs {
    // [method][rate]; nan where per-repetition or undefined
    double value[4][2];
};

CachedCutoffs cache_cutoffs(const Plan& plan, unsigned n, unsigned workers) {
    const auto& sc = *plan.scenario;
    const std::size_t m = plan.design->runs();
    const std::size_t effects = plan.design->effect_count();
    CachedCutoffs c;
    for (auto& row : c.value) row[0] = row[1] = std::nan("");
    for (Method method : sc.methods) {
        const auto mi = static_cast<std::size_t>(method);
        for (ErrorRate rate : sc.error_rates) {
            const auto ri = static_cast<std::size_t>(rate);
            const std::uint64_t purpose = mi * 2 + ri;
            switch (method) {
                case Method::wh:
                    c.value[mi][ri] =
                        sc.model == Model::location
                            ? wh_location_critical(sc.alpha, m, n, effects, rate, {sc.seed, cache_stream(n, purpose)},
                                                   sc.smm_samples)
                                  .value
                            : wh_dispersion_critical(sc.alpha, effects, rate, {sc.seed, cache_stream(n, purpose)},
                                                     sc.smm_samples)
                                  .value;
                    break;
                case Method::vca:
                    if (rate == ErrorRate::ier) c.value[mi][ri] = vca_critical(sc.alpha, m, n);
                    break;
                case Method::lenth:
                    c.value[mi][ri] = lenth_critical(sc.alpha, effects, rate, {sc.seed, cache_stream(n, purpose)},
                                                     sc.lenth_samples, workers)
                                          .value;
                    break;
                case Method::mc:
                    if (sc.model == Model::dispersion)
                        c.value[mi][ri] = rate == ErrorRate::ier ? disp_ier_critical(sc.alpha, n)
                                                                 : disp_eer_critical(sc.alpha, n, effects);
                    break;
            }
        }
    }
    return c;
}

// Rejection counts for one n, laid out [method slot][effect] for the IER and
// [method slot] for the EER.
struct Counts {
    std::vector<std::size_t> ier;
    std::vector<std::size_t> eer;
    std::size_t degenerate = 0;

    void add(const Counts& o) {
        for (std::size_t i = 0; i < ier.size(); ++i) ier[i] += o.ier[i];
        for (std::size_t i = 0; i < eer.size(); ++i) eer[i] += o.eer[i];
        degenerate += o.degenerate;
    }
};

struct RepOutcome {
    std::vector<char> ier;  // [method slot][effect]
    std::vector<char> eer;  // [method slot]
};

// Runs every requested test on one dataset. Throws DegenerateError.
void test_dataset(const Plan& plan, unsigned n, std::size_t r, const ReplicatedData& data,
                  const CachedCutoffs& cached, RepOutcome& out) {
    const auto& sc = *plan.scenario;
    const auto& design = *plan.design;
    const std::size_t effects = design.effect_count();
    const std::uint64_t inner = repetition_stream(n, r) ^ kInnerOffset;
    for (std::size_t slot = 0; slot < sc.methods.size(); ++slot) {
        const Method method = sc.methods[slot];
        AnalysisConfig cfg;
        cfg.model = sc.model;
        cfg.method = method;
        cfg.alpha = sc.alpha;
        const auto screening = compute_statistics(cfg, design, data);
        const auto& stat = screening.statistics;
        const auto mi = static_cast<std::size_t>(method);
        const bool per_rep = method == Method::mc && sc.model == Model::location;
        std::optional<VarianceWeights> weights;
        if (per_rep) weights = variance_weights(data.variances());
        for (ErrorRate rate : sc.error_rates) {
            if (method == Method::vca && rate == ErrorRate::eer) continue;
            double crit = cached.value[mi][static_cast<std::size_t>(rate)];
            if (per_rep) {
                crit = rate == ErrorRate::ier
                           ? mc_location_ier_critical(*weights, n, sc.alpha, sc.inner_samples, {sc.seed, inner})
                                 .critical
                           : mc_location_eer_critical(*weights, design, n, sc.alpha, sc.inner_samples,
                                                      {sc.seed, inner ^ kEerOffset})
                                 .critical;
            }
            if (rate == ErrorRate::ier) {
                for (std::size_t l = 0; l < effects; ++l)
                    out.ier[slot * effects + l] = std::fabs(stat[l]) > crit;
            } else {
                bool any = false;
                for (std::size_t l : plan.null_effects) any = any || std::fabs(stat[l]) > crit;
                out.eer[slot] = any;
            }
        }
    }
}

Counts run_replicate_count(const Plan& plan, unsigned n, std::size_t repetitions, unsigned workers,
                           const std::function<void()>& tick) {
    const auto& sc = *plan.scenario;
    const std::size_t effects = plan.design->effect_count();
    const std::size_t slots = sc.methods.size();
    const CachedCutoffs cached = cache_cutoffs(plan, n, workers);

    Counts total;
    total.ier.assign(slots * effects, 0);
    total.eer.assign(slots, 0);

    const std::size_t blocks = (repetitions + kRepBlock - 1) / kRepBlock;
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::exception_ptr error;

    const auto worker = [&] {
        try {
            RepOutcome outcome;
            outcome.ier.assign(slots * effects, 0);
            outcome.eer.assign(slots, 0);
            for (std::size_t b = next++; b < blocks; b = next++) {
                Counts local;
                local.ier.assign(slots * effects, 0);
                local.eer.assign(slots, 0);
                const std::size_t end = std::min(repetitions, (b + 1) * kRepBlock);
                for (std::size_t r = b * kRepBlock; r < end; ++r) {
                    Rng rng(RngState{sc.seed, repetition_stream(n, r)});
                    for (std::size_t attempt = 0;; ++attempt) {
                        const auto data = generate_dataset(plan.truth, n, rng);
                        try {
                            test_dataset(plan, n, r, data, cached, outcome);
                            break;
                        } catch (const DegenerateError&) {
                            ++local.degenerate;
                            if (attempt + 1 >= kMaxAttempts)
                                throw DegenerateError("repetition " + std::to_string(r + 1) + " at n = " +
                                                      std::to_string(n) + " stayed degenerate after " +
                                                      std::to_string(kMaxAttempts) + " attempts");
                        }
                    }
                    for (std::size_t i = 0; i < outcome.ier.size(); ++i) local.ier[i] += outcome.ier[i];
                    for (std::size_t i = 0; i < outcome.eer.size(); ++i) local.eer[i] += outcome.eer[i];
                }
                std::lock_guard<std::mutex> lock(mutex);
                total.add(local);
                if (tick) tick();
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(mutex);
            if (!error) error = std::current_exception();
            next = blocks;
        }
    };

    workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(blocks, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return total;
}

Cell make_cell(std::size_t rejections, std::size_t trials) {
    Cell c;
    c.rejections = rejections;
    c.trials = trials;
    const double p = static_cast<double>(rejections) / static_cast<double>(trials);
    c.percent = 100.0 * p;
    c.se = 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return c;
}

}  // namespace

std::optional<std::size_t> ErrorRateTable::column_index(Method method, unsigned replicates) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].method == method && columns[c].replicates == replicates) return c;
    return std::nullopt;
}

std::optional<std::size_t> ErrorRateTable::row_index(const std::string& label) const {
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].label == label) return r;
    return std::nullopt;
}

const Cell& ErrorRateTable::cell(const std::string& row_label, Method method, unsigned replicates) const {
    const auto r = row_index(row_label);
    if (!r) throw ValidationError("no row '" + row_label + "' in table '" + title + "'");
    const auto c = column_index(method, replicates);
    if (!c)
        throw ValidationError(std::string("no column for method ") + to_string(method) + " and n = " +
                              std::to_string(replicates) + " in table '" + title + "'");
    if (*c >= rows[*r].cells.size() || rows[*r].cells[*c].trials == 0)
        throw ValidationError("cell '" + row_label + "' has no data for method " + to_string(method));
    return rows[*r].cells[*c];
}

std::uint64_t repetition_stream(unsigned replicates, std::size_t repetition) {
    return (static_cast<std::uint64_t>(replicates) << 40) ^ static_cast<std::uint64_t>(repetition);
}

ReplicatedData generate_dataset(const RunModel& model, unsigned replicates, Rng& rng) {
    const std::size_t m = model.means.size();
    std::vector<double> y(m * replicates);
    for (std::size_t i = 0; i < m; ++i) {
        const double sd = std::sqrt(model.variances[i]);
        for (unsigned j = 0; j < replicates; ++j) y[i * replicates + j] = model.means[i] + sd * rng.normal();
    }
    return ReplicatedData(std::move(y), m, replicates);
}

ReplicatedData generate_dataset(const Scenario& scenario, const Design& design, unsigned replicates, Rng& rng) {
    return generate_dataset(scenario_run_model(scenario, design), replicates, rng);
}

ReplicatedData generate_dataset(const Scenario& scenario, const Design& design, unsigned replicates,
                                std::size_t repetition) {
    Rng rng(RngState{scenario.seed, repetition_stream(replicates, repetition)});
    return generate_dataset(scenario, design, replicates, rng);
}

ErrorRateTable estimate_error_rates(const Scenario& input, const SimulationOptions& options) {
    Scenario sc = input;
    if (options.repetitions) sc.repetitions = *options.repetitions;
    const Design design = scenario_design(sc);
    validate_scenario(sc, design);

    Plan plan;
    plan.scenario = &sc;
    plan.design = &design;
    plan.truth = scenario_run_model(sc, design);
    const auto& coefs = sc.model == Model::location ? sc.location : sc.dispersion;
    std::vector<bool> active(design.effect_count(), false);
    for (const auto& [name, value] : coefs)
        if (value != 0.0) active[*design.find_effect(name)] = true;
    for (std::size_t l = 0; l < design.effect_count(); ++l)
        if (!active[l]) plan.null_effects.push_back(l);
    plan.want_ier = std::count(sc.error_rates.begin(), sc.error_rates.end(), ErrorRate::ier) > 0;
    plan.want_eer = std::count(sc.error_rates.begin(), sc.error_rates.end(), ErrorRate::eer) > 0;
    if (plan.want_eer && plan.null_effects.empty())
        throw ValidationError("an experimentwise study needs at least one null effect");

    ErrorRateTable table;
    table.title = sc.title;
    table.model = sc.model;
    table.alpha = sc.alpha;
    table.seed = sc.seed;
    table.repetitions = sc.repetitions;
    table.inner_samples = sc.inner_samples;
    for (Method method : sc.methods)
        for (unsigned n : sc.replicates) table.columns.push_back({method, n});

    const std::size_t effects = design.effect_count();
    if (plan.want_ier)
        for (std::size_t l = 0; l < effects; ++l)
            table.rows.push_back({design.effect_names()[l], ErrorRate::ier, !active[l],
                                  std::vector<Cell>(table.columns.size())});
    if (plan.want_eer)
        table.rows.push_back({"I=" + std::to_string(effects), ErrorRate::eer, true,
                              std::vector<Cell>(table.columns.size())});

    const std::size_t blocks_per_n = (sc.repetitions + kRepBlock - 1) / kRepBlock;
    const std::size_t total_blocks = blocks_per_n * sc.replicates.size();
    std::atomic<std::size_t> done{0};
    const std::function<void()> tick = [&] {
        if (options.progress) options.progress(++done, total_blocks);
    };

    for (unsigned n : sc.replicates) {
        const Counts counts = run_replicate_count(plan, n, sc.repetitions, options.threads, tick);
        table.degenerate += counts.degenerate;
        if (static_cast<double>(counts.degenerate) > 0.01 * static_cast<double>(sc.repetitions))
            throw DegenerateError(std::to_string(counts.degenerate) + " of " + std::to_string(sc.repetitions) +
                                  " repetitions at n = " + std::to_string(n) +
                                  " produced degenerate data (limit 1%)");
        for (std::size_t slot = 0; slot < sc.methods.size(); ++slot) {
            const auto col = *table.column_index(sc.methods[slot], n);
            std::size_t row = 0;
            if (plan.want_ier) {
                for (std::size_t l = 0; l < effects; ++l, ++row)
                    table.rows[row].cells[col] = make_cell(counts.ier[slot * effects + l], sc.repetitions);
            }
            if (plan.want_eer && sc.methods[slot] != Method::vca)
                table.rows[row].cells[col] = make_cell(counts.eer[slot], sc.repetitions);
        }
    }
    return table;
}

}  // namespace repdoe
