#include "pgfluct/kernels.hpp"

#include <cmath>

#include "pgfluct/energy_density.hpp"
#include "pgfluct/errors.hpp"
#include "pgfluct/fermi.hpp"

namespace pgfluct {

namespace {
// 8 pi^2 / ((2 pi)^6 * 4): azimuthal solid angles over the (2 pi)^3-per-mode
// phase-space measure and the 1/(2 omega) normalizations (NOTES.md).
const double measure_const = 1.0 / (32.0 * M_PI * M_PI * M_PI * M_PI);
}  // namespace

VarianceKernel::VarianceKernel(PseudoGauge gauge, const SystemParams& params)
    : requested_(gauge), resolved_(resolve_alias(gauge)), params_(params) {
    params_.validate();
    m2_ = params_.mass * params_.mass;
    a2_ = params_.radius_a * params_.radius_a;
    switch (resolved_) {
        case PseudoGauge::Canonical:
            pref_ = 2.0;
            break;
        case PseudoGauge::GLW:
            if (params_.mass == 0.0)
                throw MassRequiredForGauge(
                    "GLW kernel has a 1/(2m^2) prefactor; mass must be > 0");
            pref_ = 1.0 / (2.0 * m2_);
            break;
        case PseudoGauge::HW:
            if (params_.mass == 0.0)
                throw MassRequiredForGauge(
                    "HW kernel has a 2/m^2 prefactor; mass must be > 0");
            pref_ = 2.0 / m2_;
            break;
        case PseudoGauge::BelinfanteRosenfeld:
            throw DomainError("unreachable: BR resolves to Canonical");
    }
}

VarianceKernel::Blocks VarianceKernel::blocks(double k, double kp) const {
    Blocks bl;
    bl.w = on_shell_energy(k, params_.mass);
    bl.wp = on_shell_energy(kp, params_.mass);
    bl.b = k * kp;
    bl.sw = bl.w + bl.wp;
    const double dk = k - kp;
    // w - w' = (k - k')(k + k') / (w + w'): exact zero at k = k', no
    // cancellation elsewhere. sw = 0 only for two massless rest modes.
    bl.dw = bl.sw > 0.0 ? dk * (k + kp) / bl.sw : 0.0;
    if (m2_ == 0.0) {
        bl.q = 0.0;    // ww' - kk' = kk' - kk'
        bl.bm0 = 0.0;  // and the m^2 shift is absent
        return bl;
    }
    const double denom = bl.w * bl.wp + bl.b;  // > 0 whenever m > 0
    bl.q = m2_ * (k * k + kp * kp + m2_) / denom;
    bl.bm0 = m2_ * (dk * dk + bl.dw * bl.dw) / (2.0 * denom);
    return bl;
}

VariancePointCtx VarianceKernel::prepare(double k, double kp) const {
    VariancePointCtx ctx;
    if (k <= 0.0 || kp <= 0.0) return ctx;  // measure factor k^2 k'^2 / (ww')
    const Blocks bl = blocks(k, kp);
    const double f = fermi_dirac(bl.w, params_.temperature);
    const double fbar = 1.0 - fermi_dirac(bl.wp, params_.temperature);
    ctx.outer = pref_ * measure_const * (k * k) * (kp * kp) / (bl.w * bl.wp) * f * fbar;
    ctx.c = a2_ * bl.b;
    const double dk = k - kp;
    ctx.dir_exp = -0.5 * a2_ * dk * dk;
    // P+-(u) as explicit u polynomials, built from S + b u and R +- b u with
    // S = (ww'-kk') + m^2 + kk' and R = (ww'-kk'-m^2) + kk' =>
    //   ww' + kk'u + m^2 = S + bu,   ww' - kk'u + m^2 = S - bu,
    //   ww' + kk'u - m^2 = R + bu,   ww' - kk'u - m^2 = R - bu.
    const double b = bl.b;
    const double S = bl.q + m2_ + b;
    const double R = bl.bm0 + b;
    switch (resolved_) {
        case PseudoGauge::Canonical: {
            const double sw2 = bl.sw * bl.sw;
            const double dw2 = bl.dw * bl.dw;
            ctx.degree = 1;
            ctx.pplus = {sw2 * S, sw2 * b, 0.0, 0.0};
            ctx.pminus = {dw2 * R, dw2 * b, 0.0, 0.0};
            break;
        }
        case PseudoGauge::GLW: {
            const double sw4 = bl.sw * bl.sw * bl.sw * bl.sw;
            const double dw4 = bl.dw * bl.dw * bl.dw * bl.dw;
            ctx.degree = 1;
            ctx.pplus = {sw4 * S, -sw4 * b, 0.0, 0.0};
            ctx.pminus = {dw4 * R, -dw4 * b, 0.0, 0.0};
            break;
        }
        case PseudoGauge::HW: {
            // (S + bu)^2 (S - bu) and (R + bu)^2 (R - bu), expanded.
            ctx.degree = 3;
            ctx.pplus = {S * S * S, S * S * b, -S * b * b, -b * b * b};
            ctx.pminus = {R * R * R, R * R * b, -R * b * b, -b * b * b};
            break;
        }
        case PseudoGauge::BelinfanteRosenfeld:
            break;  // unreachable; resolved in the constructor
    }
    return ctx;
}

double VarianceKernel::bracket_value(double k, double kp, double u) const {
    if (!(u >= -1.0 && u <= 1.0))
        throw DomainError("bracket_value: u must lie in [-1, 1]");
    if (!(k >= 0.0) || !(kp >= 0.0))
        throw DomainError("bracket_value: momenta must be >= 0");
    const Blocks bl = blocks(k, kp);
    const double b = bl.b;
    // 1 -+ u computed directly so b*(1 -+ u) is exactly zero at the antipodal
    // and coincidence endpoints.
    const double aplus = bl.q + m2_ + b * (1.0 + u);
    const double aminus = bl.q + m2_ + b * (1.0 - u);
    const double bplus = bl.bm0 + b * (1.0 + u);
    const double bminus = bl.bm0 + b * (1.0 - u);
    double pplus = 0.0, pminus = 0.0;
    switch (resolved_) {
        case PseudoGauge::Canonical:
            pplus = bl.sw * bl.sw * aplus;
            pminus = bl.dw * bl.dw * bplus;
            break;
        case PseudoGauge::GLW: {
            const double sw4 = bl.sw * bl.sw * bl.sw * bl.sw;
            const double dw4 = bl.dw * bl.dw * bl.dw * bl.dw;
            pplus = sw4 * aminus;
            pminus = dw4 * bminus;
            break;
        }
        case PseudoGauge::HW:
            pplus = aplus * aplus * aminus;
            pminus = bplus * bplus * bminus;
            break;
        case PseudoGauge::BelinfanteRosenfeld:
            break;  // unreachable
    }
    const double dk = k - kp;
    const double e_direct = std::exp(-0.5 * a2_ * (dk * dk + 2.0 * b * (1.0 - u)));
    const double e_exch = std::exp(-0.5 * a2_ * (dk * dk + 2.0 * b * (1.0 + u)));
    return pref_ * (pplus * e_direct - pminus * e_exch);
}

double VarianceKernel::reduced_integrand(double k, double kp, double u) const {
    if (k <= 0.0 || kp <= 0.0) return 0.0;
    const double w = on_shell_energy(k, params_.mass);
    const double wp = on_shell_energy(kp, params_.mass);
    const double f = fermi_dirac(w, params_.temperature);
    const double fbar = 1.0 - fermi_dirac(wp, params_.temperature);
    return measure_const * (k * k) * (kp * kp) / (w * wp) * f * fbar *
           bracket_value(k, kp, u);
}

VarianceKernel make_variance_kernel(PseudoGauge gauge, const SystemParams& params) {
    return VarianceKernel(gauge, params);
}

IntegralResult variance(PseudoGauge gauge, const SystemParams& params,
                        const QuadratureConfig& cfg) {
    const VarianceKernel kernel(gauge, params);
    const double upper = momentum_cutoff(cfg, params.temperature);
    IntegralResult res = integrate_variance_3d(kernel, upper, params.radius_a, cfg);
    const double gscale = params.degeneracy / 4.0;
    res.value *= gscale;
    res.error *= gscale;
    if (res.value < 0.0) {
        // The integrand is not pointwise positive (the exchange term wins for
        // u < 0), only the integral is; a tiny negative result is quadrature
        // noise around zero, anything larger is a real failure.
        if (-res.value <= std::max(res.error, cfg.abs_tol))
            res.value = 0.0;
        else
            res.converged = false;
    }
    return res;
}

FluctuationResult sigma_normalized(PseudoGauge gauge, const SystemParams& params,
                                   const QuadratureConfig& cfg) {
    const IntegralResult eps = energy_density(params, cfg);
    const IntegralResult var = variance(gauge, params, cfg);
    FluctuationResult out;
    out.epsilon = eps.value;
    out.epsilon_err = eps.error;
    out.sigma2 = var.value;
    out.sigma2_err = var.error;
    out.sigma_n = std::sqrt(var.value) / eps.value;  // NaN at epsilon = 0
    out.evaluations = eps.evaluations + var.evaluations;
    out.converged = eps.converged && var.converged;
    return out;
}

}  // namespace pgfluct
