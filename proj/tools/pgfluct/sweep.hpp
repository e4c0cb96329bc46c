#pragma once

#include <map>
#include <string>
#include <vector>

#include "pgfluct/quadrature.hpp"
#include "pgfluct/system_params.hpp"

namespace pgfluct::cli {

enum class SweptParameter { RadiusA, Mass, Temperature };

/// Accepts the tokens radius_a | mass | temperature; throws InvalidConfig.
SweptParameter swept_from_token(const std::string& token);

struct SweepSpec {
    SweptParameter swept = SweptParameter::RadiusA;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_spacing = false;
    std::vector<PseudoGauge> gauges;  ///< output order follows this order
    SystemParams fixed;               ///< the swept field is overwritten per point
    QuadratureConfig config;

    void validate() const;  ///< throws InvalidConfig before any computation
    std::vector<double> grid() const;  ///< endpoint-exact spacing
};

/// Flat key=value file, '#' starts a comment, keys mirror the sweep flags.
/// Later duplicates win. Throws InvalidConfig naming the line on parse errors.
std::map<std::string, std::string> read_config_file(const std::string& path);

struct SweepOutput {
    std::vector<std::string> rows;  ///< CSV rows in (point, gauge) order
    bool any_failed = false;
};

/// Evaluates points*gauges records on up to `jobs` threads. Row content and
/// order are independent of `jobs`: every task is deterministic and rows are
/// buffered, then emitted by task index.
SweepOutput run_sweep(const SweepSpec& spec, int jobs);

}  // namespace pgfluct::cli
