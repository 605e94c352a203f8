#include "repdoe/vca.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/report.hpp"
#include "repdoe/special.hpp"

#include <cmath>
#include <numeric>

namespace repdoe {

double jackknife_variance(std::span<const double> row, Measure measure) {
    const std::size_t n = row.size();
    if (measure == Measure::mean && n < 2) throw ValidationError("jackknife of the mean needs n >= 2");
    if (measure == Measure::log_variance && n < 3)
        throw ValidationError("jackknife of the log-variance needs n >= 3");

    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    std::vector<double> loo(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double mean = (total - row[j]) / static_cast<double>(n - 1);
        if (measure == Measure::mean) {
            loo[j] = mean;
            continue;
        }
        double ss = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) ss += (row[k] - mean) * (row[k] - mean);
        const double var = ss / static_cast<double>(n - 2);
        if (!(var > 0.0)) throw DegenerateError("leave-one-out subsample with zero variance");
        loo[j] = std::log(var);
    }
    const double centre = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double c : loo) ss += (c - centre) * (c - centre);
    return static_cast<double>(n - 1) / static_cast<double>(n) * ss;
}

JackknifeResult pooled_jackknife(const ReplicatedData& data, Measure measure) {
    JackknifeResult out;
    out.measure = measure;
    out.per_run.resize(data.runs());
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < data.runs(); ++i) {
        try {
            out.per_run[i] = jackknife_variance(data.row(i), measure);
        } catch (const DegenerateError&) {
            bad.push_back(i);
        }
    }
    if (!bad.empty())
        throw DegenerateError("leave-one-out subsample with zero variance in " + describe_runs(bad), bad);
    out.pooled = std::accumulate(out.per_run.begin(), out.per_run.end(), 0.0) / static_cast<double>(data.runs());
    return out;
}

std::vector<double> vca_f_statistics(const ReplicatedData& data, const Design& design, Model model) {
    const auto est = estimate_effects(design, data, model);
    const auto jk = pooled_jackknife(data, model == Model::location ? Measure::mean : Measure::log_variance);
    if (!(jk.pooled > 0.0)) throw DegenerateError("pooled jackknife variance is zero");
    const double m = static_cast<double>(design.runs());
    std::vector<double> f(est.coefficients.size());
    for (std::size_t l = 0; l < f.size(); ++l)
        f[l] = m * est.coefficients[l] * est.coefficients[l] / jk.pooled;
    return f;
}

double vca_critical(double alpha, std::size_t runs, std::size_t replicates) {
    check_alpha(alpha);
    if (replicates < 2) throw DomainError("at least two replicates are required");
    return f1_critical(alpha, static_cast<double>(runs * (replicates - 1)));
}

}  // namespace repdoe
