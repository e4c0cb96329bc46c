#pragma once

#include "pgfluct/quadrature.hpp"
#include "pgfluct/system_params.hpp"

namespace pgfluct {

/// Reduced variance integrand for one pseudo-gauge at fixed SystemParams.
///
/// The variance of the Gaussian-smeared energy density is
///
///   sigma^2 = Int_0^inf dk Int_0^inf dk' Int_{-1}^{1} du  W(k, k', u),
///
///   W = pref * (k^2 k'^2) / (32 pi^4 w w') * f(w) (1 - f(w'))
///       * [ P+(u) e^{-(a^2/2)(k^2+k'^2-2kk'u)} - P-(u) e^{-(a^2/2)(k^2+k'^2+2kk'u)} ],
///
/// with w = omega(k), w' = omega(k'), and per-gauge weights
///
///   Canonical/BR: pref = 2,        P+ = (w+w')^2 (ww'+kk'u+m^2),   P- = (w-w')^2 (ww'+kk'u-m^2)
///   GLW:          pref = 1/(2m^2), P+ = (w+w')^4 (ww'-kk'u+m^2),   P- = (w-w')^4 (ww'-kk'u-m^2)
///   HW:           pref = 2/m^2,    P+ = (ww'+kk'u+m^2)^2 (ww'-kk'u+m^2),
///                                  P- = (ww'+kk'u-m^2)^2 (ww'-kk'u-m^2)
///
/// (derivation of the 1/(32 pi^4) azimuthal measure: NOTES.md). The direct
/// weight obeys pref*P+ = 16 w^4 at (k'=k, u=1) for every gauge, and P-
/// vanishes at (k'=k, u=-1).
///
/// Internally each factor ww' +- kk'u +- m^2 is rewritten through the exact
/// on-shell identities
///
///   ww' - kk'        = m^2 (k^2 + k'^2 + m^2) / (ww' + kk')
///   ww' - kk' - m^2  = m^2 ((k-k')^2 + (w-w')^2) / (2 (ww' + kk'))
///   w - w'           = (k-k')(k+k') / (w + w')
///
/// so no difference of nearly equal terms is ever formed; the coincidence
/// identity then holds to a few ulp instead of drowning in cancellation at
/// k >> m, and the antipodal zero of P- is exact (NOTES.md). Both angular
/// exponents are assembled as -(a^2/2)[(k-k')^2 + 2kk'(1 -+ u)], manifestly
/// <= 0, so no overflow is possible at any smearing radius.
class VarianceKernel {
public:
    /// Throws MassRequiredForGauge for GLW/HW at mass zero and InvalidConfig
    /// for invalid params. BelinfanteRosenfeld resolves to Canonical here,
    /// once, which makes the two gauges bitwise-identical downstream.
    VarianceKernel(PseudoGauge gauge, const SystemParams& params);

    PseudoGauge requested_gauge() const { return requested_; }
    PseudoGauge resolved_gauge() const { return resolved_; }
    const SystemParams& params() const { return params_; }
    double prefactor() const { return pref_; }

    /// The u-independent parts plus the angular polynomial coefficients at one
    /// (k, k') point, consumed by integrate_variance_3d. outer excludes the
    /// pure-gauge degeneracy rescaling (applied once in variance()).
    VariancePointCtx prepare(double k, double kp) const;

    /// pref * [P+ e^{direct} - P- e^{exchange}]: the bracketed weight alone,
    /// without measure or occupation factors. Throws DomainError for |u| > 1.
    double bracket_value(double k, double kp, double u) const;

    /// Full W(k, k', u) in the g=4 normalization.
    double reduced_integrand(double k, double kp, double u) const;

private:
    struct Blocks {
        double w, wp;    // on-shell energies
        double b;        // k k'
        double sw, dw;   // w + w', w - w' (the latter in factored form)
        double q;        // ww' - kk'        >= 0
        double bm0;      // ww' - kk' - m^2  >= 0
    };
    Blocks blocks(double k, double kp) const;

    PseudoGauge requested_;
    PseudoGauge resolved_;
    SystemParams params_;
    double pref_;
    double m2_;
    double a2_;
};

VarianceKernel make_variance_kernel(PseudoGauge gauge, const SystemParams& params);

/// sigma^2 for the given gauge: the 3D integral above times degeneracy/4
/// (the kernel weights carry the g=4 normalization). A tiny negative value
/// within the error estimate is clamped to zero; a negative value beyond it
/// clears the converged flag.
IntegralResult variance(PseudoGauge gauge, const SystemParams& params,
                        const QuadratureConfig& cfg);

/// epsilon, sigma^2, and sigma_n = sqrt(sigma^2)/epsilon in one record.
/// sigma_n is NaN when epsilon is zero (T -> 0 limit); emitted as null in
/// JSON output. converged covers both integrals.
FluctuationResult sigma_normalized(PseudoGauge gauge, const SystemParams& params,
                                   const QuadratureConfig& cfg);

}  // namespace pgfluct
