#pragma once

#include <cstddef>
#include <string>

#include "pgfluct/errors.hpp"

namespace pgfluct {

/// Choice of energy-momentum tensor entering the smeared-density variance.
enum class PseudoGauge { Canonical, BelinfanteRosenfeld, GLW, HW };

/// The Belinfante-Rosenfeld improvement terms drop out of the space-averaged
/// density, so BR shares the Canonical kernel exactly. Resolve before dispatch;
/// everything downstream of this call is a single code path for the two.
constexpr PseudoGauge resolve_alias(PseudoGauge g) noexcept {
    return g == PseudoGauge::BelinfanteRosenfeld ? PseudoGauge::Canonical : g;
}

/// Short token used on the command line and in CSV output.
const char* gauge_token(PseudoGauge g) noexcept;

/// Inverse of gauge_token; throws DomainError on unknown input.
PseudoGauge gauge_from_token(const std::string& token);

/// Physical state of the gas plus the smearing radius. Natural units
/// (energies in E, lengths in 1/E).
struct SystemParams {
    double mass = 0.0;         ///< particle mass [E], >= 0
    double temperature = 1.0;  ///< [E], > 0
    double radius_a = 1.0;     ///< Gaussian smearing radius [1/E], > 0
    double degeneracy = 4.0;   ///< internal dof; 4 = spin-1/2 particle + antiparticle

    void validate() const;     ///< throws DomainError
};

struct FluctuationResult {
    double epsilon = 0.0;       ///< mean energy density [E^4]
    double sigma2 = 0.0;        ///< smeared-density variance [E^8]
    double sigma_n = 0.0;       ///< sqrt(sigma2)/epsilon, dimensionless
    double epsilon_err = 0.0;   ///< absolute error estimate on epsilon
    double sigma2_err = 0.0;    ///< absolute error estimate on sigma2
    std::size_t evaluations = 0;
    bool converged = false;
};

}
