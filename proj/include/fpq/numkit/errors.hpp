#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fpq {

// Dimension or structural mismatch between arguments.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Caller violated a documented precondition (unsorted means, K = 1 where
// K >= 2 is required, index out of range, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap. Carries the best iterate seen
// and the residual it achieved so callers can decide what to do with it.
class SolverStall : public std::runtime_error {
public:
    SolverStall(const std::string& what, std::vector<double> best, double residual)
        : std::runtime_error(what), best_iterate_(std::move(best)), residual_(residual) {}

    const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> best_iterate_;
    double residual_;
};

}  // namespace fpq
