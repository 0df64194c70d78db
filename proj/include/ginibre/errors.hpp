#pragma once

#include <stdexcept>
#include <string>

namespace ginibre {

/// Argument outside the mathematical domain of an operation (non-positive
/// argument of Gamma, z <= 0 for a Meijer G-function, N or M out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, eigensolver, root finder) failed to
/// reach its tolerance. Carries the best error estimate that was achieved.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

} // namespace ginibre
