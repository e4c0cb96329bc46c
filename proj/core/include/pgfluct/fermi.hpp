#pragma once

#include <cmath>

namespace pgfluct {

/// Fermi-Dirac occupancy at zero chemical potential.
/// Precondition: omega >= 0, temperature > 0 (not checked; hot path).
/// Beyond x ~ 45 the direct form equals exp(-x) to double precision; the
/// switched branch cannot overflow and underflows to exact 0.0 past x ~ 745.
inline double fermi_dirac(double omega, double temperature) {
    const double x = omega / temperature;
    if (x > 45.0) return std::exp(-x);
    return 1.0 / (std::exp(x) + 1.0);
}

/// On-shell energy sqrt(k^2 + m^2). hypot keeps full precision for k << m
/// and returns k exactly at m = 0.
inline double on_shell_energy(double k, double mass) {
    return std::hypot(k, mass);
}

}
