#pragma once

// Exception types shared by every module. The CLI maps each family onto a
// stable exit code (see tools/repdoe.cpp).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace repdoe {

// Argument outside the mathematical domain of an operation (p outside (0,1), df = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed input: bad design, wrong shapes, unparseable files, forbidden option combinations.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Data that is well formed but statistically degenerate (zero variances, zero PSE, ...).
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what, std::vector<std::size_t> runs = {})
        : std::runtime_error(what), runs_(std::move(runs)) {}

    // Zero-based indices of the offending runs, when the failure is run specific.
    const std::vector<std::size_t>& runs() const noexcept { return runs_; }

private:
    std::vector<std::size_t> runs_;
};

// Covariance matrix that is not square/symmetric or is indefinite beyond tolerance.
class MatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Object used in the wrong state (e.g. quantile of an empty sample).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Run indices rendered 1-based for messages: "runs 3, 7".
std::string describe_runs(const std::vector<std::size_t>& runs);

}  // namespace repdoe
