#pragma once

#include <stdexcept>
#include <string>

namespace primediff {

/// Input outside the mathematical domain of an operation (bad modulus, range
/// beyond the sieve, grid too coarse).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A request that would exceed a configured capacity.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-side contract violation (e.g. an exceptional modulus that does not
/// divide the progression step).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when re-verification of a driver trace fails.
class CertificationError : public std::runtime_error {
public:
    CertificationError(std::size_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace primediff
