#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace multimin {

// Base class for all library errors so callers can catch multimin failures
// separately from std exceptions raised by programming mistakes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A coordinate lies outside the box domain it is used with.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// numerical_gradient called too close to a bound for its central stencil.
class BoundaryStepError : public Error {
public:
    explicit BoundaryStepError(const std::string& msg) : Error(msg) {}
};

// The optimizer saw a non-finite value or gradient. Carries the last iterate
// that still had a finite objective so callers can salvage it.
class NumericFailureError : public Error {
public:
    NumericFailureError(const std::string& msg, std::vector<double> last_x, double last_f)
        : Error(msg), last_x_(std::move(last_x)), last_f_(last_f) {}
    const std::vector<double>& last_x() const { return last_x_; }
    double last_f() const { return last_f_; }

private:
    std::vector<double> last_x_;
    double last_f_;
};

// Correlation matrix stayed numerically singular after nugget escalation.
class FitFailureError : public Error {
public:
    explicit FitFailureError(const std::string& msg) : Error(msg) {}
};

// The infill criterion was non-finite at every candidate.
class ProposalFailureError : public Error {
public:
    explicit ProposalFailureError(const std::string& msg) : Error(msg) {}
};

// Bad CLI arguments or config file contents (including unknown keys).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Refusal to overwrite existing output without --force.
class RefusalError : public Error {
public:
    explicit RefusalError(const std::string& msg) : Error(msg) {}
};

}  // namespace multimin
