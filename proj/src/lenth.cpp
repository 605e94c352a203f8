#include "repdoe/lenth.hpp"

#include "repdoe/errors.hpp"
#include "repdoe/parallel.hpp"
#include "repdoe/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace repdoe {

namespace {

// Median of the first `count` entries of `buf`; reorders them.
double median_in_place(double* buf, std::size_t count) {
    const std::size_t mid = count / 2;
    std::nth_element(buf, buf + mid, buf + count);
    const double upper = buf[mid];
    if (count % 2 == 1) return upper;
    const double lower = *std::max_element(buf, buf + mid);
    return 0.5 * (lower + upper);
}

// pse for |estimates| held in `abs_vals` (left untouched); `scratch` has the same size.
double pse_of(double* abs_vals, double* scratch, std::size_t count, double& s0, std::size_t& retained) {
    std::copy(abs_vals, abs_vals + count, scratch);
    s0 = 1.5 * median_in_place(scratch, count);
    const double cut = 2.5 * s0;
    retained = 0;
    for (std::size_t l = 0; l < count; ++l)
        if (abs_vals[l] < cut) scratch[retained++] = abs_vals[l];
    if (retained == 0) return 0.0;
    return 1.5 * median_in_place(scratch, retained);
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw StateError("median of an empty set");
    return median_in_place(values.data(), values.size());
}

PseResult lenth_pse(std::span<const double> estimates) {
    const std::size_t count = estimates.size();
    if (count < 2) throw ValidationError("Lenth's method needs at least two effects");
    std::vector<double> abs_vals(count), scratch(count);
    for (std::size_t l = 0; l < count; ++l) abs_vals[l] = std::fabs(estimates[l]);
    PseResult out;
    out.pse = pse_of(abs_vals.data(), scratch.data(), count, out.s0, out.retained);
    if (out.retained == 0)
        throw DegenerateError("Lenth PSE undefined: no estimate below 2.5 s0 (s0 = " + std::to_string(out.s0) + ")");
    if (!(out.pse > 0.0)) throw DegenerateError("Lenth PSE is zero: all retained estimates are zero");
    out.t.resize(count);
    for (std::size_t l = 0; l < count; ++l) out.t[l] = estimates[l] / out.pse;
    return out;
}

CriticalValue lenth_critical(double alpha, std::size_t effects, ErrorRate rate, RngState rng,
                             std::size_t samples, unsigned workers) {
    check_alpha(alpha);
    if (effects < 2) throw DomainError("Lenth's method needs at least two effects");
    if (samples < 2) throw DomainError("lenth_critical: need at least two samples");
    const bool pooled = rate == ErrorRate::ier;
    const std::size_t per_draw = pooled ? effects : 1;
    std::vector<double> draws;
    fill_blocked(draws, samples, per_draw, rng, workers, [&] {
        return [&, abs_vals = std::vector<double>(effects), scratch = std::vector<double>(effects)](
                   Rng& g, double* dst) mutable {
            // Retry the (probability-zero) degenerate draw with fresh normals.
            for (;;) {
                for (auto& v : abs_vals) v = std::fabs(g.normal());
                double s0 = 0.0;
                std::size_t retained = 0;
                const double pse = pse_of(abs_vals.data(), scratch.data(), effects, s0, retained);
                if (!(pse > 0.0)) continue;
                if (pooled) {
                    for (std::size_t l = 0; l < effects; ++l) dst[l] = abs_vals[l] / pse;
                } else {
                    *dst = *std::max_element(abs_vals.begin(), abs_vals.end()) / pse;
                }
                return;
            }
        };
    });
    CriticalValue cv;
    cv.value = select_quantile(draws, 1.0 - alpha);
    cv.standard_error = quantile_standard_error(draws, 1.0 - alpha);
    cv.seed = rng.seed;
    cv.stream = rng.stream;
    cv.samples = samples;
    return cv;
}

}  // namespace repdoe
