#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pgfluct/quadrature.hpp"
#include "pgfluct/system_params.hpp"

/// Self-diagnosis suite behind the `check` CLI subcommand: each check computes
/// an observed discrepancy, compares against an allowed bound, and reports
/// both. All randomness is seeded; two runs produce identical reports.
namespace pgfluct::checks {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double observed = 0.0;  ///< measured worst-case discrepancy
    double allowed = 0.0;   ///< bound it must stay under
    std::string detail;     ///< where/how the worst case occurred
};

struct CheckOptions {
    bool quick = false;     ///< reduced grids, <= 1 minute total
    QuadratureConfig cfg;   ///< tolerances for the integral-based checks
};

/// Angular-weight evaluation hook: returns the pair
/// (pref * P+(u), pref * P-(u)) at one (k, k', u). The default forwards to
/// VarianceKernel; tests inject perturbed versions to prove the identity
/// checks actually bite (see test_checks).
using AngularWeightsFn = std::function<std::pair<double, double>(
    PseudoGauge, const SystemParams&, double k, double kp, double u)>;
AngularWeightsFn default_angular_weights();

/// Four separately written transcriptions of the energy-density integrand
/// (one per pseudo-gauge form) agree pairwise to 1e-10 after integration.
CheckOutcome check_gauge_equal_epsilon(const CheckOptions& opt);

/// pref * P+ = 16 omega^4 at (k'=k, u=1), randomized over (k, m), all gauges.
CheckOutcome check_coincidence_identity(
    const CheckOptions& opt, const AngularWeightsFn& weights = default_angular_weights());

/// Exchange weight is zero at (k'=k, u=-1) to 1e-12 of the 16 omega^4 scale.
CheckOutcome check_exchange_vanishing(
    const CheckOptions& opt, const AngularWeightsFn& weights = default_angular_weights());

/// Numeric u-integration agrees with the closed-form angular moments.
CheckOutcome check_cross_mode_equivalence(const CheckOptions& opt);

/// Radial quadrature epsilon vs the Bessel-series oracle.
CheckOutcome check_bessel_epsilon(const CheckOptions& opt);

/// Adaptive-quadrature sigma^2 vs the finite-box lattice oracle.
CheckOutcome check_lattice_sigma2(const CheckOptions& opt);

/// sigma^2 ratios between gauges approach 1 monotonically as aT grows.
CheckOutcome check_large_a_ratio_convergence(const CheckOptions& opt);

/// sigma_n is a function of (m/T, aT) only: invariant under
/// (m, T, a) -> (2m, 2T, a/2).
CheckOutcome check_rescaling_collapse(const CheckOptions& opt);

/// All of the above, in a fixed order.
std::vector<CheckOutcome> run_all_checks(const CheckOptions& opt);

}  // namespace pgfluct::checks
