#include "pgfluct/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gsl/gsl_sf_bessel.h>

#include "pgfluct/errors.hpp"
#include "pgfluct/fermi.hpp"

namespace pgfluct::oracle {

namespace {

// Literal per-gauge polynomial weights from scalars (w, w', k.k', m^2),
// written in the naive textbook arrangement on purpose: this module is the
// cross-check, so it must NOT reuse the rearranged algebra of the kernels
// module. G: 0 = Canonical/BR, 1 = GLW, 2 = HW. The float type is a
// parameter so bracket_transcription can run the same arrangement in long
// double: the naive w*wp - dot - m^2 cancels near the diagonal, and the
// oracle has to be more precise than the code it checks.
template <int G, typename F>
inline void bracket_pair(F w, F wp, F dot, F m2, F& pplus, F& pminus) {
    if constexpr (G == 0) {
        const F sw = w + wp, dw = w - wp;
        pplus = sw * sw * (w * wp + dot + m2);
        pminus = dw * dw * (w * wp + dot - m2);
    } else if constexpr (G == 1) {
        const F sw = w + wp, dw = w - wp;
        const F sw4 = sw * sw * sw * sw, dw4 = dw * dw * dw * dw;
        pplus = sw4 * (w * wp - dot + m2);
        pminus = dw4 * (w * wp - dot - m2);
    } else {
        const F t1 = w * wp + dot + m2, t2 = w * wp - dot + m2;
        const F t3 = w * wp + dot - m2, t4 = w * wp - dot - m2;
        pplus = t1 * t1 * t2;
        pminus = t3 * t3 * t4;
    }
}

template <int G>
double gauge_prefactor(double m2) {
    if constexpr (G == 0) return 2.0;
    if constexpr (G == 1) return 1.0 / (2.0 * m2);
    return 2.0 / m2;
}

int resolve_to_index(PseudoGauge gauge, double mass) {
    switch (resolve_alias(gauge)) {
        case PseudoGauge::Canonical: return 0;
        case PseudoGauge::GLW:
            if (mass == 0.0)
                throw MassRequiredForGauge("GLW oracle: mass must be > 0");
            return 1;
        case PseudoGauge::HW:
            if (mass == 0.0)
                throw MassRequiredForGauge("HW oracle: mass must be > 0");
            return 2;
        default: throw DomainError("unreachable gauge");
    }
}

}  // namespace

namespace {

// Shared long-double evaluation from the rotational invariants |k|^2, |k'|^2,
// k.k'. |k -+ k'|^2 is formed from these invariants, not from componentwise
// differences: the components cancel for (anti)parallel vectors and would
// reintroduce the very rounding the long-double path is avoiding.
double transcription_from_invariants(int g, long double k2, long double kp2,
                                     long double dot, const SystemParams& params) {
    using LD = long double;
    const LD m2 = static_cast<LD>(params.mass) * params.mass;
    const LD w = sqrtl(k2 + m2);
    const LD wp = sqrtl(kp2 + m2);
    const LD a2 = static_cast<LD>(params.radius_a) * params.radius_a;
    const LD eminus = expl(-0.5L * a2 * (k2 + kp2 - 2.0L * dot));
    const LD eplus = expl(-0.5L * a2 * (k2 + kp2 + 2.0L * dot));
    LD pplus = 0.0L, pminus = 0.0L;
    LD pref = 0.0L;
    switch (g) {
        case 0:
            bracket_pair<0>(w, wp, dot, m2, pplus, pminus);
            pref = 2.0L;
            break;
        case 1:
            bracket_pair<1>(w, wp, dot, m2, pplus, pminus);
            pref = 0.5L / m2;
            break;
        default:
            bracket_pair<2>(w, wp, dot, m2, pplus, pminus);
            pref = 2.0L / m2;
            break;
    }
    return static_cast<double>(pref * (pplus * eminus - pminus * eplus));
}

}  // namespace

double bracket_transcription(PseudoGauge gauge, const Vec3& kvec, const Vec3& kpvec,
                             const SystemParams& params) {
    params.validate();
    const int g = resolve_to_index(gauge, params.mass);
    using LD = long double;
    const LD k2 = static_cast<LD>(kvec[0]) * kvec[0] +
                  static_cast<LD>(kvec[1]) * kvec[1] +
                  static_cast<LD>(kvec[2]) * kvec[2];
    const LD kp2 = static_cast<LD>(kpvec[0]) * kpvec[0] +
                   static_cast<LD>(kpvec[1]) * kpvec[1] +
                   static_cast<LD>(kpvec[2]) * kpvec[2];
    const LD dot = static_cast<LD>(kvec[0]) * kpvec[0] +
                   static_cast<LD>(kvec[1]) * kpvec[1] +
                   static_cast<LD>(kvec[2]) * kpvec[2];
    return transcription_from_invariants(g, k2, kp2, dot, params);
}

double bracket_transcription(PseudoGauge gauge, double k, double kp, double u,
                             const SystemParams& params) {
    params.validate();
    if (!(k >= 0.0) || !(kp >= 0.0))
        throw DomainError("bracket_transcription: momenta must be >= 0");
    if (!(u >= -1.0 && u <= 1.0))
        throw DomainError("bracket_transcription: direction cosine outside [-1, 1]");
    const int g = resolve_to_index(gauge, params.mass);
    using LD = long double;
    const LD k2 = static_cast<LD>(k) * k;
    const LD kp2 = static_cast<LD>(kp) * kp;
    const LD dot = static_cast<LD>(k) * kp * u;
    return transcription_from_invariants(g, k2, kp2, dot, params);
}

double LatticeSpec::mode_spacing() const { return 2.0 * M_PI / box_length; }

bool LatticeSpec::resolves_thermal_scale(const SystemParams& params) const {
    return mode_spacing() < params.temperature / 4.0;
}

void LatticeSpec::validate(const SystemParams& params) const {
    params.validate();
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw InvalidConfig("lattice box_length must be > 0 and finite");
    if (n_max < 1) throw InvalidConfig("lattice n_max must be >= 1");
    if (max_pair_evals == 0) throw InvalidConfig("lattice max_pair_evals must be > 0");
    const double k_corner = mode_spacing() * n_max * std::sqrt(3.0);
    const double f_corner =
        fermi_dirac(on_shell_energy(k_corner, params.mass), params.temperature);
    if (!(f_corner < 1e-10))
        throw InvalidConfig("lattice corner mode still occupied (f >= 1e-10); raise n_max");
}

LatticeSpec LatticeSpec::for_box(double box_length, const SystemParams& params,
                                 double tail_threshold) {
    params.validate();
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw InvalidConfig("lattice box_length must be > 0 and finite");
    if (!(tail_threshold > 0.0 && tail_threshold < 1e-3))
        throw InvalidConfig("lattice tail_threshold must lie in (0, 1e-3)");
    LatticeSpec spec;
    spec.box_length = box_length;
    const double kappa = spec.mode_spacing();
    constexpr int hard_cap = 100'000;
    int n = 1;
    // Face criterion: the occupation at the outermost face mode is already
    // below threshold, so no truncated shell contributes a visible tail.
    while (n < hard_cap &&
           fermi_dirac(on_shell_energy(kappa * n, params.mass), params.temperature) >=
               tail_threshold)
        ++n;
    // Corner criterion on top (binding only when the mass dominates omega).
    while (n < hard_cap &&
           fermi_dirac(on_shell_energy(kappa * n * std::sqrt(3.0), params.mass),
                       params.temperature) >= 1e-10)
        ++n;
    if (n >= hard_cap)
        throw InvalidConfig("lattice sizing ran away; box too large for this temperature");
    spec.n_max = n;
    spec.validate(params);
    return spec;
}

namespace {

// Up to two disjoint integer ranges, already clipped to [-bound, bound].
struct Ranges {
    int lo[2] = {0, 0};
    int hi[2] = {-1, -1};
    int count = 0;
};

Ranges merge_clip(int lo1, int hi1, int lo2, int hi2, int bound) {
    if (lo2 < lo1) {
        std::swap(lo1, lo2);
        std::swap(hi1, hi2);
    }
    Ranges r;
    auto push = [&](int lo, int hi) {
        lo = std::max(lo, -bound);
        hi = std::min(hi, bound);
        if (lo <= hi) {
            r.lo[r.count] = lo;
            r.hi[r.count] = hi;
            ++r.count;
        }
    };
    if (lo2 <= hi1 + 1) {
        push(lo1, std::max(hi1, hi2));  // overlapping or adjacent: one range
    } else {
        push(lo1, hi1);
        push(lo2, hi2);
    }
    return r;
}

struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

template <int G>
double lattice_sum_impl(const SystemParams& p, const LatticeSpec& spec) {
    const int N = spec.n_max;
    const double kappa = spec.mode_spacing();
    const double kappa2 = kappa * kappa;
    const double m2 = p.mass * p.mass;
    const double alpha = 0.5 * p.radius_a * p.radius_a * kappa2;
    const std::int64_t jmax = 12ll * N * N;
    if (jmax + 1 > 200'000'000)
        throw InvalidConfig("lattice n_max too large for tabulated sums");

    // Everything the pair summand needs, indexed by the integer invariants
    // s = |n|^2, s' = |n'|^2, j = |n -+ n'|^2.
    const int smax = 3 * N * N;
    std::vector<double> womega(smax + 1), fow(smax + 1), emitf(smax + 1);
    for (int s = 0; s <= smax; ++s) {
        womega[s] = std::sqrt(kappa2 * s + m2);
        const double f = fermi_dirac(womega[s], p.temperature);
        if (womega[s] > 0.0) {
            fow[s] = f / womega[s];
            emitf[s] = (1.0 - f) / womega[s];
        } else {
            fow[s] = 0.0;   // massless zero mode: excluded below
            emitf[s] = 0.0;
        }
    }
    std::vector<double> etab(static_cast<std::size_t>(jmax) + 1);
    for (std::int64_t j = 0; j <= jmax; ++j)
        etab[static_cast<std::size_t>(j)] = std::exp(-alpha * static_cast<double>(j));

    // Both Gaussian factors drop below e^{-60} outside |n -+ n'|^2 <= 60/alpha,
    // so the inner loops only visit the union of balls of radius R around n
    // and around -n (clipped to the box).
    const double rcut2 = 60.0 / alpha;
    const int R = static_cast<int>(std::ceil(std::sqrt(rcut2)));

    std::uint64_t pair_count = 0;
    KahanSum total;
    // Outer modes reduced to canonical representatives ax >= bx >= cx >= 0 of
    // the signed-permutation orbits; the inner sum over the full box is orbit
    // invariant, so each representative carries its orbit size as weight.
    for (int ax = 0; ax <= N; ++ax) {
        for (int bx = 0; bx <= ax; ++bx) {
            for (int cx = 0; cx <= bx; ++cx) {
                if (m2 == 0.0 && ax == 0) continue;  // massless zero mode
                const int s = ax * ax + bx * bx + cx * cx;
                const int perms = (ax == bx && bx == cx) ? 1
                                  : (ax == bx || bx == cx) ? 3
                                                           : 6;
                const int nonzero = (ax > 0) + (bx > 0) + (cx > 0);
                const double weight = static_cast<double>(perms * (1 << nonzero));
                const double fo = fow[s];
                double rep_sum = 0.0;

                const Ranges xr = merge_clip(ax - R, ax + R, -ax - R, -ax + R, N);
                for (int xi = 0; xi < xr.count; ++xi)
                    for (int x = xr.lo[xi]; x <= xr.hi[xi]; ++x) {
                        const int qmx = (ax - x) * (ax - x);
                        const int qpx = (ax + x) * (ax + x);
                        const int dx = ax * x;
                        const int sx = x * x;
                        const Ranges yr = merge_clip(bx - R, bx + R, -bx - R, -bx + R, N);
                        for (int yi = 0; yi < yr.count; ++yi)
                            for (int y = yr.lo[yi]; y <= yr.hi[yi]; ++y) {
                                const double qm2 = qmx + (bx - y) * (bx - y);
                                const double qp2 = qpx + (bx + y) * (bx + y);
                                const bool near_n = qm2 <= rcut2;
                                const bool near_mn = qp2 <= rcut2;
                                if (!near_n && !near_mn) continue;
                                const int dxy = dx + bx * y;
                                const int sxy = sx + y * y;
                                // z window(s): one ball around +cx, one around -cx
                                Ranges zr;
                                if (near_n && near_mn) {
                                    const int hm = static_cast<int>(std::floor(std::sqrt(rcut2 - qm2)));
                                    const int hp = static_cast<int>(std::floor(std::sqrt(rcut2 - qp2)));
                                    zr = merge_clip(cx - hm, cx + hm, -cx - hp, -cx + hp, N);
                                } else if (near_n) {
                                    const int hm = static_cast<int>(std::floor(std::sqrt(rcut2 - qm2)));
                                    zr = merge_clip(cx - hm, cx + hm, cx - hm, cx + hm, N);
                                } else {
                                    const int hp = static_cast<int>(std::floor(std::sqrt(rcut2 - qp2)));
                                    zr = merge_clip(-cx - hp, -cx + hp, -cx - hp, -cx + hp, N);
                                }
                                for (int zi = 0; zi < zr.count; ++zi) {
                                    pair_count += static_cast<std::uint64_t>(zr.hi[zi] - zr.lo[zi] + 1);
                                    for (int z = zr.lo[zi]; z <= zr.hi[zi]; ++z) {
                                        const int d = dxy + cx * z;
                                        const int sp = sxy + z * z;
                                        const int jm = s + sp - 2 * d;
                                        const int jp = s + sp + 2 * d;
                                        const double em = etab[jm];
                                        const double ep = etab[jp];
                                        if (em == 0.0 && ep == 0.0) continue;
                                        const double go = emitf[sp];
                                        if (go == 0.0) continue;
                                        double pplus, pminus;
                                        bracket_pair<G>(womega[s], womega[sp],
                                                        kappa2 * d, m2, pplus, pminus);
                                        rep_sum += go * (pplus * em - pminus * ep);
                                    }
                                }
                            }
                    }
                total.add(weight * fo * rep_sum);
                if (pair_count > spec.max_pair_evals)
                    throw BudgetExceeded("lattice pair count exceeded max_pair_evals");
            }
        }
    }

    const double l3 = spec.box_length * spec.box_length * spec.box_length;
    const double gscale = p.degeneracy / 4.0;
    return gauge_prefactor<G>(m2) * gscale * total.sum / (4.0 * l3 * l3);
}

}  // namespace

double variance_lattice_sum(PseudoGauge gauge, const SystemParams& params,
                            const LatticeSpec& spec) {
    spec.validate(params);
    switch (resolve_to_index(gauge, params.mass)) {
        case 0: return lattice_sum_impl<0>(params, spec);
        case 1: return lattice_sum_impl<1>(params, spec);
        default: return lattice_sum_impl<2>(params, spec);
    }
}

double epsilon_bessel_series(const SystemParams& params, int terms) {
    params.validate();
    if (params.mass <= 0.0)
        throw DomainError(
            "epsilon_bessel_series requires mass > 0; use epsilon_massless_closed_form");
    if (terms < 10) throw DomainError("epsilon_bessel_series: terms must be >= 10");
    const double m = params.mass;
    const double t = params.temperature;
    KahanSum sum;
    for (int n = 1; n <= terms; ++n) {
        const double z = n * m / t;
        if (z > 745.0) break;  // e^{-z} underflows; the series is done
        const double k1s = gsl_sf_bessel_K1_scaled(z);
        const double k2s = gsl_sf_bessel_Kn_scaled(2, z);
        const double term = std::exp(-z) * (3.0 * k2s / (z * z) + k1s / z);
        sum.add(n % 2 == 1 ? term : -term);
    }
    const double m4 = m * m * m * m;
    return params.degeneracy / (2.0 * M_PI * M_PI) * m4 * sum.sum;
}

double epsilon_massless_closed_form(double temperature, double degeneracy) {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("epsilon_massless_closed_form: temperature must be > 0");
    if (!(degeneracy >= 1.0) || !std::isfinite(degeneracy))
        throw DomainError("epsilon_massless_closed_form: degeneracy must be >= 1");
    const double t4 = temperature * temperature * temperature * temperature;
    return (degeneracy / 4.0) * 7.0 * M_PI * M_PI / 60.0 * t4;
}

}  // namespace pgfluct::oracle
