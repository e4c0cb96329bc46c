#include "record.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>

#include "json.hpp"

#include "pgfluct/kernels.hpp"
#include "pgfluct/version.hpp"

namespace pgfluct::cli {

const char* const csv_schema_line = "# schema=1";
const char* const csv_header =
    "a,m,T,gauge,epsilon,sigma2,sigma_n,sigma2_err,converged";

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunRecord make_run_record(PseudoGauge gauge, const SystemParams& params,
                          const QuadratureConfig& cfg) {
    RunRecord rec;
    rec.params = params;
    rec.gauge = gauge;
    rec.config = cfg;
    rec.result = sigma_normalized(gauge, params, cfg);
    rec.config_digest = cfg.digest();
    rec.tool_version = version_string;
    rec.timestamp = utc_timestamp();
    return rec;
}

std::string to_json(const RunRecord& rec) {
    nlohmann::ordered_json j;
    j["gauge"] = gauge_token(rec.gauge);
    j["mass"] = rec.params.mass;
    j["temperature"] = rec.params.temperature;
    j["radius_a"] = rec.params.radius_a;
    j["degeneracy"] = rec.params.degeneracy;
    j["epsilon"] = rec.result.epsilon;
    j["epsilon_err"] = rec.result.epsilon_err;
    j["sigma2"] = rec.result.sigma2;
    j["sigma2_err"] = rec.result.sigma2_err;
    if (std::isfinite(rec.result.sigma_n))
        j["sigma_n"] = rec.result.sigma_n;
    else
        j["sigma_n"] = nullptr;
    j["evaluations"] = rec.result.evaluations;
    j["converged"] = rec.result.converged;
    j["rel_tol"] = rec.config.rel_tol;
    j["abs_tol"] = rec.config.abs_tol;
    j["max_evals"] = rec.config.max_evals;
    j["cutoff_multiplier"] = rec.config.cutoff_multiplier;
    j["angular_mode"] =
        rec.config.angular_mode == AngularMode::Numeric ? "numeric" : "analytic";
    j["config_digest"] = rec.config_digest;
    j["tool_version"] = rec.tool_version;
    j["timestamp"] = rec.timestamp;
    return j.dump(2);
}

std::string to_csv_row(const RunRecord& rec) {
    std::string out;
    out += format_g17(rec.params.radius_a);
    out += ',';
    out += format_g17(rec.params.mass);
    out += ',';
    out += format_g17(rec.params.temperature);
    out += ',';
    out += gauge_token(rec.gauge);
    out += ',';
    out += format_g17(rec.result.epsilon);
    out += ',';
    out += format_g17(rec.result.sigma2);
    out += ',';
    out += format_g17(rec.result.sigma_n);
    out += ',';
    out += format_g17(rec.result.sigma2_err);
    out += ',';
    out += rec.result.converged ? "true" : "false";
    return out;
}

}  // namespace pgfluct::cli
