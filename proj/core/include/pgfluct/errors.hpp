#pragma once

#include <stdexcept>
#include <string>

namespace pgfluct {

/// Bad numeric input to a library entry point (negative temperature, |u| > 1, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// The GLW and HW kernels carry an explicit 1/m^2; they have no massless limit.
class MassRequiredForGauge : public DomainError {
public:
    explicit MassRequiredForGauge(const std::string& what) : DomainError(what) {}
};

/// Quadrature configuration violates its invariants.
class InvalidConfig : public std::invalid_argument {
public:
    explicit InvalidConfig(const std::string& what) : std::invalid_argument(what) {}
};

/// A lattice reference sum would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}
