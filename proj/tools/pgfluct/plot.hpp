#pragma once

#include <string>
#include <vector>

namespace pgfluct::cli {

/// Comma-separated cells kept as raw text so downstream output can be
/// byte-identical to the input. No quoting; '#' lines and blank lines skip.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines;  ///< 1-based source line of each row, for messages
};

/// Throws InvalidConfig naming file and line on any malformation.
CsvTable read_csv(const std::string& path);

struct PlotRequest {
    std::string input;
    std::string out_svg;
    std::string x;
    std::string y;
    std::string series;  ///< optional; empty = one unnamed series
    bool logx = false;
    bool logy = false;
};

/// Renders a line plot of y vs x, one polyline per distinct series value,
/// and writes the plotted columns unmodified to a CSV sidecar next to the
/// SVG. Returns the sidecar path. Nothing is written until the whole input
/// has parsed cleanly.
std::string render_plot(const PlotRequest& req);

}  // namespace pgfluct::cli
