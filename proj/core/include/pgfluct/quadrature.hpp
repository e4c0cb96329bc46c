#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "pgfluct/errors.hpp"

namespace pgfluct {

enum class AngularMode { Numeric, AnalyticMoments };

struct QuadratureConfig {
    double rel_tol = 1e-6;        ///< target relative accuracy, in (1e-14, 1e-2)
    double abs_tol = 1e-20;       ///< absolute floor for near-zero results
    std::size_t max_evals = 50'000'000;  ///< integrand evaluation budget, >= 1e4
    double cutoff_multiplier = 3.0;      ///< k_max = (cutoff_multiplier + 30) * T
    AngularMode angular_mode = AngularMode::AnalyticMoments;

    void validate() const;        ///< throws InvalidConfig
    std::string digest() const;   ///< stable FNV-1a hash of all settings, hex
};

/// Radial momentum cutoff implied by the config. f(omega(k_max)) < 1e-14 for
/// every mass at the default multiplier since omega >= k.
double momentum_cutoff(const QuadratureConfig& cfg, double temperature);

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;           ///< absolute estimate, includes the tail bound
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Scaled angular moments Itil_n(c) = e^{-c} * Integral_{-1}^{1} u^n e^{c u} du
/// for n = 0..n_max (n_max <= 3). Entries above n_max are zero.
/// Stable for any c >= 0: the scaled form never overflows, and for c < 1 a
/// Taylor series replaces the upward recurrence, whose cancellation would cost
/// ~eps/c^2 in relative accuracy near the bottom of that range.
std::array<double, 4> angular_moments_scaled(double c, int n_max);

/// Everything the 3D variance integrator needs at one (k, k') point.
/// The angular weight is
///   P+(u) e^{dir_exp - c(1-u)}  -  P-(u) e^{dir_exp - c(1+u)},
/// times `outer`; both exponents are <= 0 by construction, so the evaluation
/// cannot overflow at any smearing radius.
struct VariancePointCtx {
    double outer = 0.0;     ///< u-independent factor, excluding exp(dir_exp)
    double c = 0.0;         ///< angular exponent scale (a^2 k k'), >= 0
    double dir_exp = 0.0;   ///< -(a^2/2)(k - k')^2, <= 0
    int degree = 0;         ///< highest u power present (<= 3)
    std::array<double, 4> pplus{};
    std::array<double, 4> pminus{};
};

namespace detail {

// Gauss-Kronrod 7/15 on [-1,1]: Kronrod abscissae (positive half), Kronrod
// weights, and the embedded 7-point Gauss weights (at nodes 1, 3, 5, 7).
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

// Signed node index in [-7, 7] -> abscissa and weights.
inline double gk_node(int i) {
    const int a = i < 0 ? -i : i;
    return i < 0 ? -gk15_nodes[7 - a] : gk15_nodes[7 - a];
}
inline double gk_wk(int i) {
    const int a = i < 0 ? -i : i;
    return gk15_wk[7 - a];
}
inline double gk_wg(int i) {
    const int a = i < 0 ? -i : i;
    if (a == 0) return gk15_wg[3];
    if (a % 2 == 0) return gk15_wg[(6 - a) / 2];
    return 0.0;  // Kronrod-only node
}

struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
PanelEstimate gk15_panel_1d(F&& f, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double k = 0.0, g = 0.0;
    for (int i = -7; i <= 7; ++i) {
        const double v = f(mid + half * gk_node(i));
        k += gk_wk(i) * v;
        g += gk_wg(i) * v;
    }
    return {k * half, std::abs((k - g) * half)};
}

template <class F>
PanelEstimate gk15_panel_2d(F&& f, double lo0, double hi0, double lo1, double hi1) {
    const double h0 = 0.5 * (hi0 - lo0), m0 = 0.5 * (hi0 + lo0);
    const double h1 = 0.5 * (hi1 - lo1), m1 = 0.5 * (hi1 + lo1);
    double k = 0.0, g = 0.0;
    for (int i = -7; i <= 7; ++i) {
        const double x = m0 + h0 * gk_node(i);
        const double wki = gk_wk(i), wgi = gk_wg(i);
        double krow = 0.0, grow = 0.0;
        for (int j = -7; j <= 7; ++j) {
            const double v = f(x, m1 + h1 * gk_node(j));
            krow += gk_wk(j) * v;
            grow += gk_wg(j) * v;
        }
        k += wki * krow;
        g += wgi * grow;
    }
    return {k * h0 * h1, std::abs((k - g) * h0 * h1)};
}

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct AdaptOptions {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    std::size_t budget = 0;  ///< stop refining once *counter >= budget
};

struct HeapEntry {
    double err;
    std::uint32_t idx;
};
struct HeapLess {
    // Largest error first; ties broken toward the earliest-created region so
    // the refinement order is a pure function of the inputs.
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.err != b.err) return a.err < b.err;
        return a.idx > b.idx;
    }
};

template <class F>
IntegralResult adapt_1d(F&& f, const std::vector<double>& breakpoints,
                        const AdaptOptions& opt, std::size_t& counter) {
    struct Region {
        double lo, hi, value, err;
        bool leaf = true;
        bool sterile = false;
    };
    std::vector<Region> regions;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;

    const double scale = breakpoints.back() - breakpoints.front();
    double total_v = 0.0, total_e = 0.0;

    auto add_region = [&](double lo, double hi) {
        const PanelEstimate est = gk15_panel_1d(f, lo, hi);
        regions.push_back({lo, hi, est.value, est.error, true, false});
        heap.push({est.error, static_cast<std::uint32_t>(regions.size() - 1)});
        total_v += est.value;
        total_e += est.error;
    };

    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        add_region(breakpoints[i], breakpoints[i + 1]);

    auto tolerance = [&](double v) {
        return std::max(opt.abs_tol, opt.rel_tol * std::abs(v));
    };

    // Backstop for integrands that do not feed the shared counter: a split
    // costs two 15-point panels, so with a counting integrand the eval budget
    // always trips first and this bound is inert. It exists so an unreachable
    // tolerance degrades into an honest unconverged result instead of
    // unbounded refinement.
    const std::size_t max_splits = opt.budget / 15 + 1;
    std::size_t splits = 0;

    while (total_e > tolerance(total_v) && !heap.empty() && counter < opt.budget &&
           splits < max_splits) {
        const HeapEntry top = heap.top();
        heap.pop();
        Region& r = regions[top.idx];
        if (!r.leaf || r.sterile) continue;
        if ((r.hi - r.lo) < 1e-13 * scale) {
            r.sterile = true;
            continue;
        }
        ++splits;
        const double lo = r.lo, hi = r.hi, mid = 0.5 * (r.lo + r.hi);
        total_v -= r.value;
        total_e -= r.err;
        r.leaf = false;
        add_region(lo, mid);   // may reallocate `regions`; r is dead past here
        add_region(mid, hi);
    }

    KahanSum v, e;
    for (const Region& r : regions) {
        if (!r.leaf) continue;
        v.add(r.value);
        e.add(r.err);
    }
    IntegralResult out;
    out.value = v.sum;
    out.error = e.sum;
    out.converged = out.error <= tolerance(out.value);
    return out;
}

struct Region2Init {
    double lo0, hi0, lo1, hi1;
};

template <class F>
IntegralResult adapt_2d(F&& f, const std::vector<Region2Init>& initial,
                        double scale0, double scale1,
                        const AdaptOptions& opt, std::size_t& counter) {
    struct Region {
        double lo0, hi0, lo1, hi1, value, err;
        bool leaf = true;
        bool sterile = false;
    };
    std::vector<Region> regions;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
    double total_v = 0.0, total_e = 0.0;

    auto add_region = [&](double lo0, double hi0, double lo1, double hi1) {
        const PanelEstimate est = gk15_panel_2d(f, lo0, hi0, lo1, hi1);
        regions.push_back({lo0, hi0, lo1, hi1, est.value, est.error, true, false});
        heap.push({est.error, static_cast<std::uint32_t>(regions.size() - 1)});
        total_v += est.value;
        total_e += est.error;
    };

    for (const Region2Init& r : initial) add_region(r.lo0, r.hi0, r.lo1, r.hi1);

    auto tolerance = [&](double v) {
        return std::max(opt.abs_tol, opt.rel_tol * std::abs(v));
    };

    // Same backstop as adapt_1d: 450 counted evals per split when the
    // integrand feeds the counter, so this only binds for ones that do not.
    const std::size_t max_splits = opt.budget / 225 + 1;
    std::size_t splits = 0;

    while (total_e > tolerance(total_v) && !heap.empty() && counter < opt.budget &&
           splits < max_splits) {
        const HeapEntry top = heap.top();
        heap.pop();
        Region& r = regions[top.idx];
        if (!r.leaf || r.sterile) continue;
        const double w0 = (r.hi0 - r.lo0) / scale0;
        const double w1 = (r.hi1 - r.lo1) / scale1;
        int axis = w0 >= w1 ? 0 : 1;
        if ((axis == 0 ? w0 : w1) < 1e-13) {
            axis = 1 - axis;  // the wider axis is exhausted; try the other
            if ((axis == 0 ? w0 : w1) < 1e-13) {
                r.sterile = true;
                continue;
            }
        }
        ++splits;
        const Region parent = r;
        total_v -= parent.value;
        total_e -= parent.err;
        r.leaf = false;
        if (axis == 0) {
            const double mid = 0.5 * (parent.lo0 + parent.hi0);
            add_region(parent.lo0, mid, parent.lo1, parent.hi1);
            add_region(mid, parent.hi0, parent.lo1, parent.hi1);
        } else {
            const double mid = 0.5 * (parent.lo1 + parent.hi1);
            add_region(parent.lo0, parent.hi0, parent.lo1, mid);
            add_region(parent.lo0, parent.hi0, mid, parent.hi1);
        }
    }

    KahanSum v, e;
    for (const Region& r : regions) {
        if (!r.leaf) continue;
        v.add(r.value);
        e.add(r.err);
    }
    IntegralResult out;
    out.value = v.sum;
    out.error = e.sum;
    out.converged = out.error <= tolerance(out.value);
    return out;
}

/// Geometric split points {0, u/32, u/16, u/8, u/4, u/2, u}: the integrands
/// concentrate within a few thermal units of the origin while the cutoff sits
/// at ~33 T, so uniform initial panels would hide the structure from the
/// error estimator.
inline std::vector<double> geometric_breakpoints(double upper) {
    return {0.0, upper / 32, upper / 16, upper / 8, upper / 4, upper / 2, upper};
}

}  // namespace detail

/// Adaptive integral of `f` over [0, infinity), truncated at `upper` (from
/// momentum_cutoff). A single coarse panel on [upper, 2*upper] bounds the
/// discarded tail a posteriori; if it exceeds rel_tol/10 of the estimate the
/// cutoff doubles (twice at most) before the result is flagged unconverged.
/// Bitwise deterministic for identical inputs.
template <class F>
IntegralResult integrate_radial(F&& f, double upper, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(upper > 0.0) || !std::isfinite(upper))
        throw DomainError("integrate_radial: upper cutoff must be positive and finite");

    std::size_t counter = 0;
    auto counted = [&](double k) {
        ++counter;
        return f(k);
    };
    // 90/10 error budget: the adaptive pass targets 90% of the tolerance and
    // the tail bound is held to the remaining 10%, so the reported sum cannot
    // land just above the full tolerance after a refinement that stopped right
    // at its own threshold.
    detail::AdaptOptions opt{0.9 * cfg.rel_tol, 0.9 * cfg.abs_tol, cfg.max_evals};

    IntegralResult res;
    double tail = 0.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        res = detail::adapt_1d(counted, detail::geometric_breakpoints(upper), opt, counter);
        const detail::PanelEstimate t = detail::gk15_panel_1d(counted, upper, 2.0 * upper);
        tail = std::abs(t.value) + t.error;
        const double gate =
            std::max(0.1 * cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(res.value));
        if (tail <= gate) break;
        if (attempt == 2) {
            res.converged = false;
            break;
        }
        upper *= 2.0;
    }
    res.error += tail;
    res.evaluations = counter;
    res.converged = res.converged &&
                    res.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
}

/// Integral of the reduced variance weight over (k, k') in [0, k_upper]^2 and
/// u in [-1, 1]. `ev` supplies a VariancePointCtx per (k, k') point (see
/// kernels.hpp for the physical evaluator; tests use synthetic ones).
///
/// AnalyticMoments folds the u integral into closed-form scaled moments and
/// runs a 2D adaptive; Numeric keeps a nested adaptive u quadrature per
/// (k, k') node at a 50x tighter relative target.
///
/// When a^2 k_upper^2 > 50 the Gaussian confines everything interesting to a
/// diagonal band |k - k'| <= 8/a (both angular exponentials are bounded by
/// exp(-(a^2/2)(k-k')^2)); the integral is then taken in rotated coordinates
/// s = (k+k')/2, d = k-k' (unit Jacobian) over the band plus two coarse
/// off-band blocks that pick up the exp(-32)-suppressed remainder.
template <class Eval>
IntegralResult integrate_variance_3d(const Eval& ev, double k_upper, double smear_a,
                                     const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(k_upper > 0.0) || !std::isfinite(k_upper))
        throw DomainError("integrate_variance_3d: k_upper must be positive and finite");
    if (!(smear_a >= 0.0) || !std::isfinite(smear_a))
        throw DomainError("integrate_variance_3d: smearing radius must be >= 0 and finite");

    std::size_t counter = 0;
    bool inner_ok = true;

    auto point_value = [&](double k, double kp) -> double {
        const VariancePointCtx ctx = ev.prepare(k, kp);
        ++counter;
        if (ctx.outer == 0.0) return 0.0;
        if (cfg.angular_mode == AngularMode::AnalyticMoments) {
            const std::array<double, 4> itil = angular_moments_scaled(ctx.c, ctx.degree);
            double direct = 0.0, exch = 0.0;
            for (int n = 0; n <= ctx.degree; ++n) {
                direct += ctx.pplus[n] * itil[n];
                exch += (n & 1) ? -ctx.pminus[n] * itil[n] : ctx.pminus[n] * itil[n];
            }
            return ctx.outer * std::exp(ctx.dir_exp) * (direct - exch);
        }
        auto horner = [&](const std::array<double, 4>& p, double u) {
            double acc = p[ctx.degree];
            for (int n = ctx.degree - 1; n >= 0; --n) acc = acc * u + p[n];
            return acc;
        };
        auto g = [&](double u) {
            ++counter;
            return horner(ctx.pplus, u) * std::exp(-ctx.c * (1.0 - u)) -
                   horner(ctx.pminus, u) * std::exp(-ctx.c * (1.0 + u));
        };
        detail::AdaptOptions uopt;
        uopt.rel_tol = cfg.rel_tol / 50.0;
        uopt.abs_tol = 0.0;
        uopt.budget = std::min(cfg.max_evals, counter + 200'000);
        const IntegralResult ui = detail::adapt_1d(g, {-1.0, 0.0, 1.0}, uopt, counter);
        if (!ui.converged) inner_ok = false;
        return ctx.outer * std::exp(ctx.dir_exp) * ui.value;
    };

    // Same 90/10 error budget split as integrate_radial: refinement targets
    // 90% of the tolerance, the cutoff-tail bound is gated at 10%.
    detail::AdaptOptions opt{0.9 * cfg.rel_tol, 0.9 * cfg.abs_tol, cfg.max_evals};

    IntegralResult res;
    double tail = 0.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const bool banded = smear_a * smear_a * k_upper * k_upper > 50.0 &&
                            8.0 / smear_a < k_upper;
        std::vector<detail::Region2Init> initial;
        double scale0, scale1;
        IntegralResult main;
        if (!banded) {
            auto f2 = [&](double k, double kp) { return point_value(k, kp); };
            const std::vector<double> bp = detail::geometric_breakpoints(k_upper);
            for (std::size_t i = 0; i + 1 < bp.size(); ++i)
                for (std::size_t j = 0; j + 1 < bp.size(); ++j)
                    initial.push_back({bp[i], bp[i + 1], bp[j], bp[j + 1]});
            scale0 = scale1 = k_upper;
            main = detail::adapt_2d(f2, initial, scale0, scale1, opt, counter);
        } else {
            const double dmax = 8.0 / smear_a;
            auto f2 = [&](double d, double s) {
                const double k = s + 0.5 * d;
                const double kp = s - 0.5 * d;
                if (k < 0.0 || kp < 0.0 || k > k_upper || kp > k_upper) return 0.0;
                return point_value(k, kp);
            };
            const std::array<double, 5> dsplit = {0.0, dmax / 8, dmax / 4, dmax / 2, dmax};
            const std::vector<double> sp = detail::geometric_breakpoints(k_upper);
            for (int side = -1; side <= 1; side += 2)
                for (std::size_t i = 0; i + 1 < dsplit.size(); ++i)
                    for (std::size_t j = 0; j + 1 < sp.size(); ++j) {
                        const double dlo = side < 0 ? -dsplit[i + 1] : dsplit[i];
                        const double dhi = side < 0 ? -dsplit[i] : dsplit[i + 1];
                        initial.push_back({dlo, dhi, sp[j], sp[j + 1]});
                    }
            // Off-band remainder: both exponentials are < exp(-32) here, but
            // keep the blocks in the refinement set so the claim is checked,
            // not assumed.
            initial.push_back({dmax, k_upper, 0.0, k_upper});
            initial.push_back({-k_upper, -dmax, 0.0, k_upper});
            scale0 = 2.0 * k_upper;
            scale1 = k_upper;
            main = detail::adapt_2d(f2, initial, scale0, scale1, opt, counter);
        }

        // Cutoff soundness: coarse blocks over the discarded k range.
        auto fplain = [&](double k, double kp) { return point_value(k, kp); };
        const detail::PanelEstimate t1 =
            detail::gk15_panel_2d(fplain, k_upper, 2.0 * k_upper, 0.0, 2.0 * k_upper);
        const detail::PanelEstimate t2 =
            detail::gk15_panel_2d(fplain, 0.0, k_upper, k_upper, 2.0 * k_upper);
        tail = std::abs(t1.value) + std::abs(t2.value) + t1.error + t2.error;

        res = main;
        const double gate =
            std::max(0.1 * cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(res.value));
        if (tail <= gate) break;
        if (attempt == 2) {
            res.converged = false;
            break;
        }
        k_upper *= 2.0;
    }
    res.error += tail;
    res.evaluations = counter;
    res.converged = res.converged && inner_ok &&
                    res.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
}

}  // namespace pgfluct
