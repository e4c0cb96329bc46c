#pragma once

#include <array>
#include <cstddef>

#include "pgfluct/quadrature.hpp"
#include "pgfluct/system_params.hpp"

/// Slow-but-simple reference implementations, kept deliberately independent of
/// the kernels module: separate transcriptions, naive algebra, explicit
/// 3-vectors. Everything here exists to catch mistakes in the fast path.
namespace pgfluct::oracle {

using Vec3 = std::array<double, 3>;

/// Straight transcription of the bracketed variance weight with explicit
/// vector arguments: pref * [P+ e^{-(a^2/2)|k-k'|^2} - P- e^{-(a^2/2)|k+k'|^2}]
/// with all dot products spelled out and no algebraic rearrangement.
/// Rotation-invariant; agrees with VarianceKernel::bracket_value at matched
/// (|k|, |k'|, cos angle). Throws MassRequiredForGauge for GLW/HW at m = 0.
double bracket_transcription(PseudoGauge gauge, const Vec3& kvec, const Vec3& kpvec,
                             const SystemParams& params);

/// Same transcription consumed at the reduced coordinates (k, k', u) directly,
/// for matched-point comparison against VarianceKernel::bracket_value. The
/// invariants k^2, k'^2, k.k' = k k' u are formed in extended precision from
/// the given scalars, so no vector-component rounding enters: near the
/// diagonal (omega - omega')^2 amplifies an eps-level perturbation of |k'| by
/// ~ (k / |k - k'|)^2, and double-precision components would bury the very
/// comparison this oracle exists for.
double bracket_transcription(PseudoGauge gauge, double k, double kp, double u,
                             const SystemParams& params);

/// Finite periodic box: modes k = (2 pi / L) n with n integer, |n|_inf <= n_max.
struct LatticeSpec {
    double box_length = 0.0;
    int n_max = 0;
    std::size_t max_pair_evals = 20'000'000'000ull;

    /// Smallest n_max whose boundary face mode satisfies
    /// f(omega) < tail_threshold; corner occupancy is then pushed below 1e-10
    /// as well, which validate() enforces.
    static LatticeSpec for_box(double box_length, const SystemParams& params,
                               double tail_threshold = 1e-9);

    double mode_spacing() const;               ///< 2 pi / L
    /// Mode spacing below temperature/4, i.e. the thermal scale is resolved.
    /// Deliberately coarse boxes (refinement studies) fail this on purpose,
    /// so it is a query, not part of validate().
    bool resolves_thermal_scale(const SystemParams& params) const;
    void validate(const SystemParams& params) const;  ///< throws InvalidConfig
};

/// sigma^2 as a double sum over lattice mode pairs, (1/L^3) Sum_n replacing
/// each Int d^3k/(2 pi)^3, using bracket_transcription's algebra on explicit
/// integer vectors. Pairs are bucketed by (|n|^2, |n'|^2, n.n'): energies,
/// occupations, and Gaussian factors come from integer-indexed tables, and
/// the outer mode runs over canonical representatives a >= b >= c >= 0 of the
/// signed-permutation orbits, weighted by orbit size. The inner loop visits
/// only modes within Gaussian reach of n or -n (window |n -+ n'|^2 <= 60 *
/// 2/(a kappa)^2; both terms are below e^{-60} outside). Scaled by
/// degeneracy/4 like variance(). Throws BudgetExceeded if the planned pair
/// count would exceed spec.max_pair_evals.
double variance_lattice_sum(PseudoGauge gauge, const SystemParams& params,
                            const LatticeSpec& spec);

/// epsilon as the alternating hard-thermal series: expanding f = sum_{n>=1}
/// (-1)^{n+1} e^{-n omega/T} termwise gives
///   Int_0^inf k^2 omega e^{-n omega/T} dk = m^4 [ 3 K2(z)/z^2 + K1(z)/z ],
/// z = n m / T (derivation: NOTES.md), so
///   epsilon = (g / 2 pi^2) m^4 sum_n (-1)^{n+1} [ 3 K2(z_n)/z_n^2 + K1(z_n)/z_n ].
/// Truncation error is bounded by the first omitted term (alternating series
/// with decreasing terms). Throws DomainError at mass = 0 (use
/// epsilon_massless_closed_form) or terms < 10.
double epsilon_bessel_series(const SystemParams& params, int terms = 60);

/// epsilon at zero mass: (g/4) * 7 pi^2 T^4 / 60 (massless Fermi integral
/// Int x^3/(e^x+1) dx = 7 pi^4 / 120).
double epsilon_massless_closed_form(double temperature, double degeneracy = 4.0);

}  // namespace pgfluct::oracle
