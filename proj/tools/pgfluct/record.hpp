#pragma once

#include <string>

#include "pgfluct/quadrature.hpp"
#include "pgfluct/system_params.hpp"

namespace pgfluct::cli {

/// One evaluated point plus the metadata needed to reproduce it.
struct RunRecord {
    SystemParams params;
    PseudoGauge gauge = PseudoGauge::Canonical;  ///< as requested; br stays br
    FluctuationResult result;
    QuadratureConfig config;
    std::string config_digest;
    std::string tool_version;
    std::string timestamp;
};

/// Runs the full evaluation (epsilon + sigma2) and stamps the metadata.
RunRecord make_run_record(PseudoGauge gauge, const SystemParams& params,
                          const QuadratureConfig& cfg);

/// Flat snake_case JSON object; sigma_n is null when epsilon underflowed to 0.
std::string to_json(const RunRecord& rec);

// CSV schema (versioned): a comment line, then the header row, then data rows.
extern const char* const csv_schema_line;
extern const char* const csv_header;
std::string to_csv_row(const RunRecord& rec);

std::string format_g17(double v);  ///< %.17g, round-trips doubles exactly
std::string utc_timestamp();       ///< ISO 8601, seconds resolution

}  // namespace pgfluct::cli
