#include "pgfluct/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "pgfluct/errors.hpp"

namespace pgfluct {

void QuadratureConfig::validate() const {
    if (!(rel_tol > 1e-14 && rel_tol < 1e-2))
        throw InvalidConfig("rel_tol must lie in (1e-14, 1e-2)");
    if (!std::isfinite(abs_tol) || abs_tol < 0.0)
        throw InvalidConfig("abs_tol must be finite and >= 0");
    if (max_evals < 10'000)
        throw InvalidConfig("max_evals must be >= 1e4");
    if (!std::isfinite(cutoff_multiplier) || cutoff_multiplier < 0.0 ||
        cutoff_multiplier > 1000.0)
        throw InvalidConfig("cutoff_multiplier must lie in [0, 1000]");
}

std::string QuadratureConfig::digest() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g|%.17g|%zu|%.17g|%d", rel_tol, abs_tol,
                  max_evals, cutoff_multiplier, static_cast<int>(angular_mode));
    // FNV-1a, 64-bit
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

double momentum_cutoff(const QuadratureConfig& cfg, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("momentum_cutoff: temperature must be > 0 and finite");
    // omega >= k, so f(omega(k_max)) <= e^{-(multiplier+30)} < 1e-14 already
    // at the default multiplier; the a-posteriori tail check backstops this.
    return (cfg.cutoff_multiplier + 30.0) * temperature;
}

std::array<double, 4> angular_moments_scaled(double c, int n_max) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw DomainError("angular_moments_scaled: c must be >= 0 and finite");
    if (n_max < 0 || n_max > 3)
        throw DomainError("angular_moments_scaled: n_max must be in [0, 3]");

    std::array<double, 4> itil{};
    if (c < 1.0) {
        // Taylor form of I_n = Integral u^n e^{cu} du: only powers with
        // n + j even survive, giving I_n = 2 sum_j c^j / (j! (n+j+1)).
        // 25 terms leave < 1/25! ~ 6e-26 at c = 1. The upward recurrence
        // below amplifies rounding by ~n!/c^n, so it only takes over where
        // that factor is harmless; at the switch point both branches are
        // accurate to ~1e-13 or better.
        const double ec = std::exp(-c);
        for (int n = 0; n <= n_max; ++n) {
            double sum = 0.0;
            double cj_over_jfact = 1.0;  // c^j / j!
            for (int j = 0; j <= 24; ++j) {
                if ((n + j) % 2 == 0) sum += cj_over_jfact / (n + j + 1);
                cj_over_jfact *= c / (j + 1);
            }
            itil[n] = 2.0 * ec * sum;
        }
        return itil;
    }

    // Scaled recurrence: Itil_0 = (1 - e^{-2c})/c and
    // Itil_n = (1 - (-1)^n e^{-2c})/c - (n/c) Itil_{n-1}; every quantity is
    // O(1/c) at large c, so nothing overflows.
    const double em2c = std::exp(-2.0 * c);
    itil[0] = (1.0 - em2c) / c;
    for (int n = 1; n <= n_max; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        itil[n] = (1.0 - sign * em2c) / c - (n / c) * itil[n - 1];
    }
    return itil;
}

}  // namespace pgfluct
