#include "pgfluct/system_params.hpp"

#include <cmath>
#include <string>

#include "pgfluct/errors.hpp"

namespace pgfluct {

void SystemParams::validate() const {
    if (!std::isfinite(mass) || mass < 0.0)
        throw DomainError("mass must be finite and >= 0");
    if (!std::isfinite(temperature) || temperature <= 0.0)
        throw DomainError("temperature must be finite and > 0");
    if (!std::isfinite(radius_a) || radius_a <= 0.0)
        throw DomainError("radius_a must be finite and > 0");
    if (!std::isfinite(degeneracy) || degeneracy < 1.0)
        throw DomainError("degeneracy must be finite and >= 1");
}

const char* gauge_token(PseudoGauge g) noexcept {
    switch (g) {
        case PseudoGauge::Canonical: return "can";
        case PseudoGauge::BelinfanteRosenfeld: return "br";
        case PseudoGauge::GLW: return "glw";
        case PseudoGauge::HW: return "hw";
    }
    return "?";
}

PseudoGauge gauge_from_token(const std::string& token) {
    if (token == "can" || token == "canonical") return PseudoGauge::Canonical;
    if (token == "br" || token == "belinfante") return PseudoGauge::BelinfanteRosenfeld;
    if (token == "glw") return PseudoGauge::GLW;
    if (token == "hw") return PseudoGauge::HW;
    throw DomainError("unknown gauge token '" + token + "' (expected can|br|glw|hw)");
}

}  // namespace pgfluct
