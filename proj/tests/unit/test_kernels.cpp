#include <array>
#include <cmath>
#include <initializer_list>
#include <random>

#include "doctest.h"
#include "pgfluct/energy_density.hpp"
#include "pgfluct/errors.hpp"
#include "pgfluct/fermi.hpp"
#include "pgfluct/kernels.hpp"
#include "pgfluct/oracle.hpp"
#include "pgfluct/system_params.hpp"

using namespace pgfluct;

namespace {

QuadratureConfig cfg_rel(double rel) {
    QuadratureConfig cfg;
    cfg.rel_tol = rel;
    cfg.abs_tol = 1e-30;
    return cfg;
}

double horner(const VariancePointCtx& ctx, const std::array<double, 4>& p, double u) {
    double acc = p[ctx.degree];
    for (int n = ctx.degree - 1; n >= 0; --n) acc = acc * u + p[n];
    return acc;
}

SystemParams unit_params(double mass) {
    SystemParams p;
    p.mass = mass;
    return p;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("frozen regression values of the reduced integrand") {
    // W(k=1, k'=2, u=0.3) at m = T = a = 1, g = 4
    const double expected_can = 0.0013489269199240602;
    const double expected_glw = 0.0033900804395126957;
    const double expected_hw = 0.0016557661026725628;
    CHECK(VarianceKernel(PseudoGauge::Canonical, unit_params(1.0))
              .reduced_integrand(1.0, 2.0, 0.3) ==
          doctest::Approx(expected_can).epsilon(1e-12));
    CHECK(VarianceKernel(PseudoGauge::GLW, unit_params(1.0)).reduced_integrand(1.0, 2.0, 0.3) ==
          doctest::Approx(expected_glw).epsilon(1e-12));
    CHECK(VarianceKernel(PseudoGauge::HW, unit_params(1.0)).reduced_integrand(1.0, 2.0, 0.3) ==
          doctest::Approx(expected_hw).epsilon(1e-12));
}

TEST_CASE("alias gauge is the canonical evaluation, bit for bit") {
    const VarianceKernel can(PseudoGauge::Canonical, unit_params(0.5));
    const VarianceKernel br(PseudoGauge::BelinfanteRosenfeld, unit_params(0.5));
    CHECK(br.requested_gauge() == PseudoGauge::BelinfanteRosenfeld);
    CHECK(br.resolved_gauge() == PseudoGauge::Canonical);
    CHECK(can.requested_gauge() == PseudoGauge::Canonical);
    CHECK(can.resolved_gauge() == PseudoGauge::Canonical);
    for (double u : {-1.0, -0.3, 0.0, 0.9, 1.0})
        CHECK(br.bracket_value(1.3, 2.1, u) == can.bracket_value(1.3, 2.1, u));
    const VariancePointCtx a = can.prepare(0.8, 1.7);
    const VariancePointCtx b = br.prepare(0.8, 1.7);
    CHECK(a.outer == b.outer);
    CHECK(a.pplus == b.pplus);
    CHECK(a.pminus == b.pminus);
}

TEST_CASE("bracket_value equals the expanded polynomial form") {
    std::mt19937_64 rng(7u);
    std::uniform_real_distribution<double> uk(0.01, 8.0), uu(-1.0, 1.0);
    for (PseudoGauge g : {PseudoGauge::Canonical, PseudoGauge::GLW, PseudoGauge::HW}) {
        const VarianceKernel kern(g, unit_params(1.3));
        for (int i = 0; i < 200; ++i) {
            const double k = uk(rng), kp = uk(rng), u = uu(rng);
            const VariancePointCtx ctx = kern.prepare(k, kp);
            const double a2 = 1.0;  // radius_a = 1
            const double dk2 = (k - kp) * (k - kp);
            const double expanded =
                kern.prefactor() *
                (horner(ctx, ctx.pplus, u) * std::exp(-0.5 * a2 * dk2 - ctx.c * (1.0 - u)) -
                 horner(ctx, ctx.pminus, u) * std::exp(-0.5 * a2 * dk2 - ctx.c * (1.0 + u)));
            const double direct = kern.bracket_value(k, kp, u);
            CHECK(direct == doctest::Approx(expanded).epsilon(1e-13));
        }
    }
}

TEST_CASE("polynomial coefficients are symmetric under k <-> k'") {
    std::mt19937_64 rng(8u);
    std::uniform_real_distribution<double> uk(0.01, 8.0);
    for (PseudoGauge g : {PseudoGauge::Canonical, PseudoGauge::GLW, PseudoGauge::HW}) {
        const VarianceKernel kern(g, unit_params(0.9));
        for (int i = 0; i < 100; ++i) {
            const double k = uk(rng), kp = uk(rng);
            const VariancePointCtx a = kern.prepare(k, kp);
            const VariancePointCtx b = kern.prepare(kp, k);
            CHECK(a.pplus == b.pplus);    // dw enters squared; sign cancels
            CHECK(a.pminus == b.pminus);
            CHECK(a.c == b.c);
            CHECK(a.dir_exp == b.dir_exp);
            // outer is NOT symmetric: it carries f(w) (1 - f(w'))
        }
    }
}

TEST_CASE("coincidence identity holds to a few ulp") {
    std::mt19937_64 rng(9u);
    std::uniform_real_distribution<double> uk(1e-3, 50.0), um(1e-3, 10.0);
    for (int i = 0; i < 300; ++i) {
        const double k = uk(rng), m = um(rng);
        for (PseudoGauge g : {PseudoGauge::Canonical, PseudoGauge::GLW, PseudoGauge::HW}) {
            const VarianceKernel kern(g, unit_params(m));
            const double w = on_shell_energy(k, m);
            const double direct = kern.bracket_value(k, k, 1.0);
            CHECK(direct == doctest::Approx(16.0 * w * w * w * w).epsilon(1e-12));
        }
    }
}

TEST_CASE("exchange weight vanishes exactly at the antipodal point") {
    // at k' = k the factored w - w' is exactly zero, and the Horner evaluation
    // of the exchange polynomial cancels term by term; no tolerance needed
    for (double k : {0.3, 1.0, 4.7, 21.0}) {
        for (PseudoGauge g : {PseudoGauge::Canonical, PseudoGauge::GLW, PseudoGauge::HW}) {
            const VarianceKernel kern(g, unit_params(1.1));
            const VariancePointCtx ctx = kern.prepare(k, k);
            CHECK(horner(ctx, ctx.pminus, -1.0) == 0.0);
        }
    }
}

TEST_CASE("massless canonical bracket agrees with the naive transcription") {
    std::mt19937_64 rng(10u);
    std::uniform_real_distribution<double> uk(0.01, 5.0), uu(-1.0, 1.0);
    const SystemParams p = unit_params(0.0);
    const VarianceKernel kern(PseudoGauge::Canonical, p);
    for (int i = 0; i < 200; ++i) {
        const double k = uk(rng), kp = uk(rng), u = uu(rng);
        const double fast = kern.bracket_value(k, kp, u);
        const double naive = oracle::bracket_transcription(PseudoGauge::Canonical, k, kp, u, p);
        const double scale = 16.0 * std::pow(std::max(k, kp), 4) + 1e-300;
        CHECK(std::fabs(fast - naive) / scale < 1e-13);
    }
}

TEST_CASE("huge smearing radius stays finite") {
    SystemParams p = unit_params(1.0);
    p.radius_a = 100.0;
    const VarianceKernel kern(PseudoGauge::HW, p);
    const double v = kern.bracket_value(3.0, 3.1, 0.5);
    CHECK(std::isfinite(v));
    const VariancePointCtx ctx = kern.prepare(3.0, 3.1);
    CHECK(ctx.dir_exp <= 0.0);
    CHECK(ctx.c >= 0.0);
    CHECK(std::isfinite(ctx.outer));
}

TEST_CASE("zero-momentum factor zeroes the context") {
    const VarianceKernel kern(PseudoGauge::Canonical, unit_params(1.0));
    CHECK(kern.prepare(0.0, 2.0).outer == 0.0);
    CHECK(kern.prepare(2.0, 0.0).outer == 0.0);
    CHECK(kern.prepare(-1.0, 2.0).outer == 0.0);
}

TEST_CASE("mass-required gauges reject massless input with a named prefactor") {
    CHECK_THROWS_AS(VarianceKernel(PseudoGauge::GLW, unit_params(0.0)), MassRequiredForGauge);
    CHECK_THROWS_AS(VarianceKernel(PseudoGauge::HW, unit_params(0.0)), MassRequiredForGauge);
    try {
        VarianceKernel(PseudoGauge::GLW, unit_params(0.0));
    } catch (const MassRequiredForGauge& e) {
        const std::string msg = e.what();
        CHECK(msg.find("m^2") != std::string::npos);
        CHECK(msg.find("mass") != std::string::npos);
    }
    CHECK_NOTHROW(VarianceKernel(PseudoGauge::Canonical, unit_params(0.0)));
    CHECK_NOTHROW(VarianceKernel(PseudoGauge::BelinfanteRosenfeld, unit_params(0.0)));
}

TEST_CASE("bracket_value rejects out-of-domain arguments") {
    const VarianceKernel kern(PseudoGauge::Canonical, unit_params(1.0));
    CHECK_THROWS_AS(kern.bracket_value(1.0, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(kern.bracket_value(1.0, 1.0, -1.0000001), DomainError);
    CHECK_THROWS_AS(kern.bracket_value(1.0, 1.0, std::nan("")), DomainError);
    CHECK_THROWS_AS(kern.bracket_value(-1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(kern.bracket_value(1.0, -2.0, 0.5), DomainError);
}

TEST_CASE("parameter validation happens at construction") {
    SystemParams p;
    p.temperature = -1.0;
    CHECK_THROWS_AS(VarianceKernel(PseudoGauge::Canonical, p), DomainError);
    p = SystemParams{};
    p.radius_a = 0.0;
    CHECK_THROWS_AS(VarianceKernel(PseudoGauge::Canonical, p), DomainError);
    p = SystemParams{};
    p.degeneracy = 0.5;
    CHECK_THROWS_AS(VarianceKernel(PseudoGauge::Canonical, p), DomainError);
}

TEST_CASE("gauge tokens round-trip and reject junk") {
    for (PseudoGauge g : {PseudoGauge::Canonical, PseudoGauge::BelinfanteRosenfeld,
                          PseudoGauge::GLW, PseudoGauge::HW})
        CHECK(gauge_from_token(gauge_token(g)) == g);
    CHECK(gauge_from_token("canonical") == PseudoGauge::Canonical);
    CHECK(gauge_from_token("belinfante") == PseudoGauge::BelinfanteRosenfeld);
    CHECK_THROWS_AS(gauge_from_token("nope"), DomainError);
    CHECK_THROWS_AS(gauge_from_token(""), DomainError);
    CHECK(resolve_alias(PseudoGauge::BelinfanteRosenfeld) == PseudoGauge::Canonical);
    CHECK(resolve_alias(PseudoGauge::GLW) == PseudoGauge::GLW);
}

TEST_CASE("sigma_normalized ties its fields together") {
    SystemParams p = unit_params(1.0);
    const QuadratureConfig cfg = cfg_rel(1e-6);
    const FluctuationResult r = sigma_normalized(PseudoGauge::Canonical, p, cfg);
    CHECK(r.converged);
    CHECK(r.sigma_n == std::sqrt(r.sigma2) / r.epsilon);
    const IntegralResult veps = energy_density(p, cfg);
    const IntegralResult vsig = variance(PseudoGauge::Canonical, p, cfg);
    CHECK(r.epsilon == veps.value);
    CHECK(r.sigma2 == vsig.value);
    CHECK(r.epsilon_err == veps.error);
    CHECK(r.sigma2_err == vsig.error);
}

TEST_CASE("variance against independently computed anchors") {
    // 3D integrals evaluated with an adaptive cubature from a separate
    // numerical stack (tests/tools/compute_reference_values.py)
    struct Anchor {
        PseudoGauge g;
        double a;
        double sigma2;
    };
    const Anchor anchors[] = {
        {PseudoGauge::Canonical, 1.0, 0.296455168242},
        {PseudoGauge::GLW, 1.0, 0.469394509835},
        {PseudoGauge::HW, 1.0, 0.415553551072},
        {PseudoGauge::Canonical, 2.0, 0.0356448432906},
        {PseudoGauge::GLW, 2.0, 0.0407247342451},
    };
    for (const Anchor& an : anchors) {
        CAPTURE(gauge_token(an.g));
        CAPTURE(an.a);
        SystemParams p = unit_params(1.0);
        p.radius_a = an.a;
        const IntegralResult r = variance(an.g, p, cfg_rel(1e-8));
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(an.sigma2).epsilon(2e-8));
    }
}

}
