#include "pgfluct/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "pgfluct/energy_density.hpp"
#include "pgfluct/fermi.hpp"
#include "pgfluct/kernels.hpp"
#include "pgfluct/oracle.hpp"

namespace pgfluct::checks {

namespace {

std::string format_detail(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

// Four separately written transcriptions of the same radial energy-density
// integrand, one per pseudo-gauge presentation of T^{00}. They differ in how
// omega and the occupation are arranged so a shared slip cannot cancel out.
double eps_transcription_can(double k, const SystemParams& p) {
    const double omega = std::sqrt(k * k + p.mass * p.mass);
    return p.degeneracy / (2.0 * M_PI * M_PI) * k * k * omega /
           (std::exp(omega / p.temperature) + 1.0);
}

double eps_transcription_br(double k, const SystemParams& p) {
    // k^2 omega = (k^4 + k^2 m^2) / omega, occupation via the stable
    // e^{-x}/(1+e^{-x}) form.
    const double omega = std::hypot(k, p.mass);
    const double ex = std::exp(-omega / p.temperature);
    const double k2 = k * k;
    return p.degeneracy * (k2 * k2 + k2 * p.mass * p.mass) / omega * ex /
           (1.0 + ex) / (2.0 * M_PI * M_PI);
}

double eps_transcription_glw(double k, const SystemParams& p) {
    // occupation as (1 - tanh(x/2)) / 2
    const double omega = std::sqrt(std::fma(k, k, p.mass * p.mass));
    const double occ = 0.5 * (1.0 - std::tanh(0.5 * omega / p.temperature));
    return 0.5 / (M_PI * M_PI) * p.degeneracy * k * k * omega * occ;
}

double eps_transcription_hw(double k, const SystemParams& p) {
    return energy_density_integrand(k, p);
}

using EpsIntegrand = double (*)(double, const SystemParams&);

}  // namespace

AngularWeightsFn default_angular_weights() {
    return [](PseudoGauge gauge, const SystemParams& params, double k, double kp,
              double u) {
        const VarianceKernel kernel(gauge, params);
        const VariancePointCtx ctx = kernel.prepare(k, kp);
        auto horner = [&](const std::array<double, 4>& c) {
            double acc = c[ctx.degree];
            for (int n = ctx.degree - 1; n >= 0; --n) acc = acc * u + c[n];
            return acc;
        };
        const double pref = kernel.prefactor();
        return std::make_pair(pref * horner(ctx.pplus), pref * horner(ctx.pminus));
    };
}

CheckOutcome check_gauge_equal_epsilon(const CheckOptions& opt) {
    CheckOutcome out;
    out.name = "gauge_equal_epsilon";
    out.allowed = 1e-10;
    QuadratureConfig cfg = opt.cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-30;
    const EpsIntegrand forms[4] = {eps_transcription_can, eps_transcription_br,
                                   eps_transcription_glw, eps_transcription_hw};
    const double masses[] = {0.0, 0.5, 1.0, 2.0, 5.0};
    for (double m : masses) {
        SystemParams p;
        p.mass = m;
        const double upper = momentum_cutoff(cfg, p.temperature);
        double eps[4];
        for (int i = 0; i < 4; ++i) {
            const EpsIntegrand f = forms[i];
            eps[i] = integrate_radial([&](double k) { return f(k, p); }, upper, cfg).value;
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double dev = std::abs(eps[i] / eps[j] - 1.0);
                if (dev > out.observed) {
                    out.observed = dev;
                    out.detail = format_detail("worst pairwise dev %.3g at m=%.1f", dev, m);
                }
            }
    }
    out.passed = out.observed <= out.allowed;
    return out;
}

CheckOutcome check_coincidence_identity(const CheckOptions& opt,
                                        const AngularWeightsFn& weights) {
    CheckOutcome out;
    out.name = "coincidence_identity";
    out.allowed = 1e-12;
    const int draws = opt.quick ? 200 : 1000;
    std::mt19937_64 rng(20240612u);
    std::uniform_real_distribution<double> kdist(1e-3, 10.0);
    std::uniform_real_distribution<double> mdist(0.1, 10.0);
    const PseudoGauge gauges[] = {PseudoGauge::Canonical, PseudoGauge::BelinfanteRosenfeld,
                                  PseudoGauge::GLW, PseudoGauge::HW};
    for (int i = 0; i < draws; ++i) {
        const double k = kdist(rng);
        SystemParams p;
        p.mass = mdist(rng);
        const double w2 = k * k + p.mass * p.mass;
        const double expected = 16.0 * w2 * w2;
        for (PseudoGauge g : gauges) {
            const double direct = weights(g, p, k, k, 1.0).first;
            const double dev = std::abs(direct / expected - 1.0);
            if (dev > out.observed) {
                out.observed = dev;
                out.detail = format_detail("worst dev %.3g at k=%.4f", dev, k) +
                             " gauge=" + gauge_token(g);
            }
        }
    }
    if (out.detail.empty())
        out.detail = "identity exact at every sampled point";
    out.passed = out.observed <= out.allowed;
    return out;
}

CheckOutcome check_exchange_vanishing(const CheckOptions& opt,
                                      const AngularWeightsFn& weights) {
    CheckOutcome out;
    out.name = "exchange_vanishing";
    out.allowed = 1e-12;
    const int draws = opt.quick ? 200 : 1000;
    std::mt19937_64 rng(77003171u);
    std::uniform_real_distribution<double> kdist(1e-3, 10.0);
    std::uniform_real_distribution<double> mdist(0.1, 10.0);
    const PseudoGauge gauges[] = {PseudoGauge::Canonical, PseudoGauge::BelinfanteRosenfeld,
                                  PseudoGauge::GLW, PseudoGauge::HW};
    for (int i = 0; i < draws; ++i) {
        const double k = kdist(rng);
        SystemParams p;
        p.mass = mdist(rng);
        const double w2 = k * k + p.mass * p.mass;
        const double scale = 16.0 * w2 * w2;
        for (PseudoGauge g : gauges) {
            const double exch = weights(g, p, k, k, -1.0).second;
            const double dev = std::abs(exch) / scale;
            if (dev > out.observed) {
                out.observed = dev;
                out.detail = format_detail("worst |P-|/scale %.3g at k=%.4f", dev, k) +
                             " gauge=" + gauge_token(g);
            }
        }
    }
    if (out.detail.empty())
        out.detail = "exchange weight identically zero at every sampled point";
    out.passed = out.observed <= out.allowed;
    return out;
}

CheckOutcome check_cross_mode_equivalence(const CheckOptions& opt) {
    CheckOutcome out;
    out.name = "cross_mode_equivalence";
    out.allowed = 3.0 * opt.cfg.rel_tol;
    const PseudoGauge gauges_full[] = {PseudoGauge::Canonical, PseudoGauge::GLW,
                                       PseudoGauge::HW};
    const PseudoGauge gauges_quick[] = {PseudoGauge::Canonical, PseudoGauge::HW};
    const double radii_full[] = {0.5, 2.0, 5.0};
    const double radii_quick[] = {1.0};
    const auto* gauges = opt.quick ? gauges_quick : gauges_full;
    const int ngauges = opt.quick ? 2 : 3;
    const auto* radii = opt.quick ? radii_quick : radii_full;
    const int nradii = opt.quick ? 1 : 3;
    for (int ig = 0; ig < ngauges; ++ig)
        for (int ia = 0; ia < nradii; ++ia) {
            SystemParams p;
            p.mass = 1.0;
            p.radius_a = radii[ia];
            QuadratureConfig cfg = opt.cfg;
            cfg.angular_mode = AngularMode::AnalyticMoments;
            const IntegralResult va = variance(gauges[ig], p, cfg);
            cfg.angular_mode = AngularMode::Numeric;
            cfg.max_evals = std::max<std::size_t>(cfg.max_evals, 200'000'000);
            const IntegralResult vn = variance(gauges[ig], p, cfg);
            const double dev = std::abs(vn.value / va.value - 1.0);
            if (dev > out.observed) {
                out.observed = dev;
                out.detail = format_detail("worst mode dev %.3g at a=%.1f", dev, radii[ia]) +
                             " gauge=" + gauge_token(gauges[ig]);
            }
        }
    out.passed = out.observed <= out.allowed;
    return out;
}

CheckOutcome check_bessel_epsilon(const CheckOptions& opt) {
    CheckOutcome out;
    out.name = "bessel_epsilon";
    out.allowed = 1e-8;
    QuadratureConfig cfg = opt.cfg;
    cfg.rel_tol = 1e-10;
    const double masses[] = {0.5, 1.0, 5.0};
    for (double m : masses) {
        SystemParams p;
        p.mass = m;
        const double quad = energy_density(p, cfg).value;
        const double series = oracle::epsilon_bessel_series(p, 60);
        const double dev = std::abs(quad / series - 1.0);
        if (dev > out.observed) {
            out.observed = dev;
            out.detail = format_detail("worst dev %.3g at m/T=%.1f", dev, m);
        }
    }
    out.passed = out.observed <= out.allowed;
    return out;
}

CheckOutcome check_lattice_sigma2(const CheckOptions& opt) {
    CheckOutcome out;
    out.name = "lattice_sigma2";
    out.allowed = opt.quick ? 0.02 : 0.01;
    SystemParams p;
    p.mass = 1.0;
    const double box = opt.quick ? 10.0 : 16.0;
    const oracle::LatticeSpec spec = oracle::LatticeSpec::for_box(box, p);
    const double lat = oracle::variance_lattice_sum(PseudoGauge::Canonical, p, spec);
    const IntegralResult cont = variance(PseudoGauge::Canonical, p, opt.cfg);
    out.observed = std::abs(lat / cont.value - 1.0);
    out.detail = format_detail("lattice %.8g vs quadrature %.8g", lat, cont.value);
    out.passed = out.observed <= out.allowed;
    return out;
}

CheckOutcome check_large_a_ratio_convergence(const CheckOptions& opt) {
    CheckOutcome out;
    out.name = "large_a_ratio_convergence";
    out.allowed = 0.05;
    const double radii_full[] = {2.0, 4.0, 6.0, 8.0, 10.0};
    const double radii_quick[] = {2.0, 6.0, 10.0};
    const double* radii = opt.quick ? radii_quick : radii_full;
    const int n = opt.quick ? 3 : 5;
    bool monotone = true;
    double prev_glw = 0.0, prev_hw = 0.0;
    double final_glw = 0.0, final_hw = 0.0;
    for (int i = 0; i < n; ++i) {
        SystemParams p;
        p.mass = 1.0;
        p.radius_a = radii[i];
        const double vcan = variance(PseudoGauge::Canonical, p, opt.cfg).value;
        const double dev_glw = std::abs(variance(PseudoGauge::GLW, p, opt.cfg).value / vcan - 1.0);
        const double dev_hw = std::abs(variance(PseudoGauge::HW, p, opt.cfg).value / vcan - 1.0);
        if (i > 0 && (dev_glw >= prev_glw || dev_hw >= prev_hw)) monotone = false;
        prev_glw = dev_glw;
        prev_hw = dev_hw;
        final_glw = dev_glw;
        final_hw = dev_hw;
    }
    out.observed = std::max(final_glw, final_hw);
    out.detail = format_detail("|ratio-1| at aT=10: glw %.3g, hw %.3g", final_glw, final_hw) +
                 (monotone ? ", monotone" : ", NOT monotone");
    out.passed = monotone && out.observed <= out.allowed;
    return out;
}

CheckOutcome check_rescaling_collapse(const CheckOptions& opt) {
    CheckOutcome out;
    out.name = "rescaling_collapse";
    out.allowed = 1e-8;
    const PseudoGauge gauges_full[] = {PseudoGauge::Canonical, PseudoGauge::HW};
    const int n = opt.quick ? 1 : 2;
    for (int i = 0; i < n; ++i) {
        SystemParams p;
        p.mass = 1.0;
        const FluctuationResult base = sigma_normalized(gauges_full[i], p, opt.cfg);
        SystemParams q;
        q.mass = 2.0;
        q.temperature = 2.0;
        q.radius_a = 0.5;
        const FluctuationResult scaled = sigma_normalized(gauges_full[i], q, opt.cfg);
        const double dev = std::abs(scaled.sigma_n / base.sigma_n - 1.0);
        if (dev >= out.observed) {
            out.observed = dev;
            out.detail = format_detail("sigma_n %.8g vs rescaled %.8g", base.sigma_n,
                                       scaled.sigma_n) +
                         " gauge=" + gauge_token(gauges_full[i]);
        }
    }
    out.passed = out.observed <= out.allowed;
    return out;
}

std::vector<CheckOutcome> run_all_checks(const CheckOptions& opt) {
    return {
        check_gauge_equal_epsilon(opt),
        check_coincidence_identity(opt),
        check_exchange_vanishing(opt),
        check_cross_mode_equivalence(opt),
        check_bessel_epsilon(opt),
        check_lattice_sigma2(opt),
        check_large_a_ratio_convergence(opt),
        check_rescaling_collapse(opt),
    };
}

}  // namespace pgfluct::checks
