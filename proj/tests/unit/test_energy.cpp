#include <cmath>
#include <initializer_list>

#include "doctest.h"
#include "pgfluct/energy_density.hpp"
#include "pgfluct/errors.hpp"
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

double eps(const SystemParams& p, double rel = 1e-12) {
    const IntegralResult r = energy_density(p, cfg_rel(rel));
    REQUIRE(r.converged);
    return r.value;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("massless gas closed form at several temperatures") {
    for (double t : {0.5, 1.0, 3.0}) {
        CAPTURE(t);
        SystemParams p;
        p.temperature = t;
        const double exact = 7.0 * M_PI * M_PI / 60.0 * t * t * t * t;  // g = 4
        CHECK(eps(p) == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("frozen regression anchors at T = 1") {
    // pinned from the alternating Bessel-sum closed form evaluated at 40
    // digits (tests/tools/compute_reference_values.py)
    const double refs[][2] = {
        {0.5, 1.1297997264197585},
        {1.0, 1.0628256988782119},
        {5.0, 0.18282064821922355},
    };
    for (const auto& r : refs) {
        CAPTURE(r[0]);
        SystemParams p;
        p.mass = r[0];
        CHECK(eps(p) == doctest::Approx(r[1]).epsilon(1e-10));
    }
}

TEST_CASE("quadrature vs independent series oracle") {
    for (double m : {0.2, 0.7, 2.0, 8.0}) {
        CAPTURE(m);
        SystemParams p;
        p.mass = m;
        CHECK(eps(p) == doctest::Approx(oracle::epsilon_bessel_series(p)).epsilon(1e-9));
    }
}

TEST_CASE("epsilon carries dimension four: doubling (m, T) scales by 16 exactly") {
    SystemParams p;
    p.mass = 1.0;
    SystemParams q;
    q.mass = 2.0;
    q.temperature = 2.0;
    // scaling by a power of two maps every evaluation point and every panel
    // exactly; the whole computation commutes with it bit for bit
    CHECK(16.0 * eps(p) == eps(q));

    SystemParams r;
    r.mass = 3.0;
    r.temperature = 3.0;
    CHECK(81.0 * eps(p) == doctest::Approx(eps(r)).epsilon(1e-12));
}

TEST_CASE("monotone in mass and temperature") {
    double prev = 1e300;
    for (double m : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        SystemParams p;
        p.mass = m;
        const double e = eps(p);
        CHECK(e < prev);
        prev = e;
    }
    prev = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        SystemParams p;
        p.temperature = t;
        p.mass = 1.0;
        const double e = eps(p);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("independent of the smearing radius, bit for bit") {
    SystemParams p;
    p.mass = 0.7;
    p.radius_a = 1.0;
    SystemParams q = p;
    q.radius_a = 7.0;
    CHECK(eps(p) == eps(q));
}

TEST_CASE("linear in the degeneracy, bit for bit at a power-of-two ratio") {
    SystemParams p;
    p.mass = 1.0;
    SystemParams q = p;
    q.degeneracy = 2.0;
    CHECK(eps(q) == 0.5 * eps(p));
}

TEST_CASE("continuous at the massless point") {
    SystemParams p;
    SystemParams q;
    q.mass = 1e-8;
    CHECK(eps(p) == doctest::Approx(eps(q)).epsilon(1e-9));
}

TEST_CASE("result metadata is coherent") {
    SystemParams p;
    p.mass = 1.0;
    const IntegralResult r = energy_density(p, cfg_rel(1e-8));
    CHECK(r.converged);
    CHECK(r.evaluations > 0);
    CHECK(r.error <= 1e-8 * r.value);
    CHECK(r.error >= 0.0);
}

TEST_CASE("input validation") {
    SystemParams p;
    p.temperature = 0.0;
    CHECK_THROWS_AS(energy_density(p, cfg_rel(1e-6)), DomainError);
    p = SystemParams{};
    p.mass = -1.0;
    CHECK_THROWS_AS(energy_density(p, cfg_rel(1e-6)), DomainError);
    p = SystemParams{};
    QuadratureConfig bad = cfg_rel(1e-6);
    bad.max_evals = 10;
    CHECK_THROWS_AS(energy_density(p, bad), InvalidConfig);
}

}
