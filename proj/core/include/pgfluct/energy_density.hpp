#pragma once

#include "pgfluct/quadrature.hpp"
#include "pgfluct/system_params.hpp"

namespace pgfluct {

/// Radial integrand (g / 2 pi^2) k^2 omega f(omega): the angular part of
/// g * Integral d^3k/(2 pi)^3 omega f is already folded in.
double energy_density_integrand(double k, const SystemParams& params);

/// Mean energy density epsilon = (g / 2 pi^2) Integral_0^inf k^2 omega f dk.
/// Every pseudo-gauge shares this one implementation; the result depends on
/// neither the smearing radius nor the gauge choice.
IntegralResult energy_density(const SystemParams& params, const QuadratureConfig& cfg);

}  // namespace pgfluct
