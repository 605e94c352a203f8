#pragma once

// Simulation scenarios: a generative normal model over a full factorial,
//     y_ij ~ N(mu_i, sigma_i^2),
//     mu_i = alpha_0 + sum_l alpha_l x_il,  log sigma_i^2 = gamma_0 + sum_l gamma_l x_il,
// plus the controls of an error-rate study. File grammar: docs/scenario-format.md.

#include "repdoe/design.hpp"
#include "repdoe/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace repdoe {

struct Scenario {
    std::string title;
    std::vector<std::string> factors;
    std::string effects = "full";
    double location_intercept = 0.0;
    std::map<std::string, double> location;
    double dispersion_intercept = 0.0;
    std::map<std::string, double> dispersion;
    Model model = Model::location;  // which model's tests are tabulated
    std::vector<unsigned> replicates{3};
    std::size_t repetitions = 4000;
    double alpha = 0.05;
    std::vector<Method> methods{Method::mc};
    std::vector<ErrorRate> error_rates{ErrorRate::ier};
    std::uint64_t seed = 1;
    std::size_t inner_samples = 20000;  // per-repetition Monte Carlo location cutoffs
    std::size_t smm_samples = 200000;
    std::size_t lenth_samples = 100000;
};

inline constexpr std::size_t kMinRepetitions = 100;

Scenario parse_scenario(std::istream& in, const std::string& source = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

Design scenario_design(const Scenario& scenario);

// Throws ValidationError for unknown effect names, N < 100, alpha outside
// (0,1), n < 2 (n < 3 with VCA on the dispersion model), non-finite variances.
void validate_scenario(const Scenario& scenario, const Design& design);

// True run means and variances implied by the coefficient maps.
struct RunModel {
    std::vector<double> means;
    std::vector<double> variances;
};
RunModel scenario_run_model(const Scenario& scenario, const Design& design);

}  // namespace repdoe
