#include "pgfluct/energy_density.hpp"

#include <cmath>

#include "pgfluct/fermi.hpp"

namespace pgfluct {

double energy_density_integrand(double k, const SystemParams& params) {
    const double omega = on_shell_energy(k, params.mass);
    const double norm = params.degeneracy / (2.0 * M_PI * M_PI);
    return norm * k * k * omega * fermi_dirac(omega, params.temperature);
}

IntegralResult energy_density(const SystemParams& params, const QuadratureConfig& cfg) {
    params.validate();
    const double upper = momentum_cutoff(cfg, params.temperature);
    return integrate_radial(
        [&](double k) { return energy_density_integrand(k, params); }, upper, cfg);
}

}  // namespace pgfluct
