#include "plot.hpp"

#include <cerrno>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "pgfluct/errors.hpp"

namespace pgfluct::cli {

namespace {

std::string trim_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string loc(const std::string& path, int line) {
    return path + ":" + std::to_string(line);
}

double parse_cell(const std::string& cell, const std::string& col,
                  const std::string& path, int line) {
    const std::string t = trim_ws(cell);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw InvalidConfig(loc(path, line) + ": value '" + cell +
                            "' in column '" + col + "' is not a number");
    if (!std::isfinite(v))
        throw InvalidConfig(loc(path, line) + ": non-finite value '" + cell +
                            "' in column '" + col + "'");
    return v;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void appendf(std::string& s, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    s += buf;
}

// Both axes work in "position space": log10 of the data value on a log axis,
// the value itself otherwise.
struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double p0 = 0.0, p1 = 1.0;  // pixel range (p0 may exceed p1 for y)

    void pad_if_degenerate() {
        if (hi > lo) return;
        if (log) {
            lo -= 0.3010299956639812;  // factor 2 down
            hi += 0.3010299956639812;  // factor 2 up
        } else {
            double pad = std::fmax(1.0, std::fabs(lo) * 0.1);
            lo -= pad;
            hi += pad;
        }
    }
    double pixel(double pos) const {
        return p0 + (pos - lo) / (hi - lo) * (p1 - p0);
    }
    double data_at(double frac) const {
        double pos = lo + frac * (hi - lo);
        return log ? std::pow(10.0, pos) : pos;
    }
};

const char* const series_colors[6] = {"#1b6ca8", "#c0392b", "#27ae60",
                                      "#8e44ad", "#e67e22", "#16a085"};

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim_ws(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::vector<std::string> cells = split_cells(line);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size())
            throw InvalidConfig(loc(path, lineno) + ": expected " +
                                std::to_string(t.header.size()) +
                                " fields, got " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.lines.push_back(lineno);
    }
    if (!have_header)
        throw InvalidConfig(path + ": no header row (file is empty)");
    return t;
}

namespace {

std::size_t column_index(const CsvTable& t, const std::string& name,
                         const char* flag, const std::string& path) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (trim_ws(t.header[i]) == name) return i;
    std::string header;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) header += ',';
        header += t.header[i];
    }
    throw InvalidConfig(std::string(flag) + ": no column '" + name + "' in " +
                        path + " (header: " + header + ")");
}

}  // namespace

std::string render_plot(const PlotRequest& req) {
    const CsvTable t = read_csv(req.input);
    if (t.rows.empty())
        throw InvalidConfig(req.input + ": no data rows; nothing to plot");

    const std::size_t xi = column_index(t, req.x, "--x", req.input);
    const std::size_t yi = column_index(t, req.y, "--y", req.input);
    const bool with_series = !req.series.empty();
    const std::size_t si =
        with_series ? column_index(t, req.series, "--series", req.input) : 0;

    struct Point {
        double px, py;  // position space
    };
    std::vector<std::string> series_order;
    std::map<std::string, std::size_t> series_of;
    std::vector<std::vector<Point>> series_pts;

    Axis ax, ay;
    ax.log = req.logx;
    ay.log = req.logy;
    bool first = true;

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int line = t.lines[r];
        double x = parse_cell(t.rows[r][xi], req.x, req.input, line);
        double y = parse_cell(t.rows[r][yi], req.y, req.input, line);
        if (req.logx && x <= 0.0)
            throw InvalidConfig(loc(req.input, line) +
                                ": --logx needs positive values in column '" +
                                req.x + "'");
        if (req.logy && y <= 0.0)
            throw InvalidConfig(loc(req.input, line) +
                                ": --logy needs positive values in column '" +
                                req.y + "'");
        Point p{req.logx ? std::log10(x) : x, req.logy ? std::log10(y) : y};
        if (first) {
            ax.lo = ax.hi = p.px;
            ay.lo = ay.hi = p.py;
            first = false;
        } else {
            ax.lo = std::fmin(ax.lo, p.px);
            ax.hi = std::fmax(ax.hi, p.px);
            ay.lo = std::fmin(ay.lo, p.py);
            ay.hi = std::fmax(ay.hi, p.py);
        }
        const std::string key = with_series ? t.rows[r][si] : req.y;
        auto it = series_of.find(key);
        if (it == series_of.end()) {
            it = series_of.emplace(key, series_order.size()).first;
            series_order.push_back(key);
            series_pts.emplace_back();
        }
        series_pts[it->second].push_back(p);
    }

    ax.pad_if_degenerate();
    ay.pad_if_degenerate();
    ax.p0 = 70.0;
    ax.p1 = 610.0;
    ay.p0 = 440.0;  // pixel y grows downward
    ay.p1 = 40.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" "
           "height=\"500\" viewBox=\"0 0 760 500\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"760\" height=\"500\" fill=\"#ffffff\"/>\n";

    // grid + tick labels, 5 ticks per axis
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        const double gx = ax.pixel(ax.lo + f * (ax.hi - ax.lo));
        const double gy = ay.pixel(ay.lo + f * (ay.hi - ay.lo));
        appendf(svg,
                "<line x1=\"%.2f\" y1=\"40\" x2=\"%.2f\" y2=\"440\" "
                "stroke=\"#dddddd\"/>\n",
                gx, gx);
        appendf(svg,
                "<line x1=\"70\" y1=\"%.2f\" x2=\"610\" y2=\"%.2f\" "
                "stroke=\"#dddddd\"/>\n",
                gy, gy);
        appendf(svg,
                "<text x=\"%.2f\" y=\"456\" text-anchor=\"middle\">%.4g</text>\n",
                gx, ax.data_at(f));
        appendf(svg,
                "<text x=\"64\" y=\"%.2f\" text-anchor=\"end\" "
                "dominant-baseline=\"middle\">%.4g</text>\n",
                gy, ay.data_at(f));
    }
    svg += "<rect x=\"70\" y=\"40\" width=\"540\" height=\"400\" fill=\"none\" "
           "stroke=\"#333333\"/>\n";

    // axis titles
    appendf(svg, "<text x=\"340\" y=\"484\" text-anchor=\"middle\">%s%s</text>\n",
            xml_escape(req.x).c_str(), req.logx ? " (log)" : "");
    appendf(svg,
            "<text x=\"20\" y=\"240\" text-anchor=\"middle\" "
            "transform=\"rotate(-90 20 240)\">%s%s</text>\n",
            xml_escape(req.y).c_str(), req.logy ? " (log)" : "");
    appendf(svg, "<text x=\"340\" y=\"24\" text-anchor=\"middle\">%s vs %s</text>\n",
            xml_escape(req.y).c_str(), xml_escape(req.x).c_str());

    for (std::size_t s = 0; s < series_order.size(); ++s) {
        const char* color = series_colors[s % 6];
        const std::vector<Point>& pts = series_pts[s];
        if (pts.size() > 1) {
            std::string points;
            for (const Point& p : pts)
                appendf(points, "%.2f,%.2f ", ax.pixel(p.px), ay.pixel(p.py));
            points.pop_back();
            appendf(svg,
                    "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" "
                    "points=\"%s\"/>\n",
                    color, points.c_str());
        }
        for (const Point& p : pts)
            appendf(svg, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                    ax.pixel(p.px), ay.pixel(p.py), color);
        const double ly = 54.0 + 18.0 * static_cast<double>(s);
        appendf(svg,
                "<line x1=\"622\" y1=\"%.2f\" x2=\"646\" y2=\"%.2f\" "
                "stroke=\"%s\" stroke-width=\"2\"/>\n",
                ly, ly, color);
        appendf(svg, "<text x=\"652\" y=\"%.2f\">%s</text>\n", ly + 4.0,
                xml_escape(series_order[s]).c_str());
    }
    svg += "</svg>\n";

    // Sidecar: the selected columns exactly as they appeared in the input.
    std::string sidecar;
    sidecar += t.header[xi];
    sidecar += ',';
    sidecar += t.header[yi];
    if (with_series) {
        sidecar += ',';
        sidecar += t.header[si];
    }
    sidecar += '\n';
    for (const std::vector<std::string>& row : t.rows) {
        sidecar += row[xi];
        sidecar += ',';
        sidecar += row[yi];
        if (with_series) {
            sidecar += ',';
            sidecar += row[si];
        }
        sidecar += '\n';
    }

    std::string sidecar_path = req.out_svg;
    if (sidecar_path.size() >= 4 &&
        sidecar_path.compare(sidecar_path.size() - 4, 4, ".svg") == 0)
        sidecar_path.erase(sidecar_path.size() - 4);
    sidecar_path += ".data.csv";

    std::ofstream svg_out(req.out_svg, std::ios::binary);
    if (!svg_out) throw InvalidConfig("cannot write '" + req.out_svg + "'");
    svg_out << svg;
    std::ofstream side_out(sidecar_path, std::ios::binary);
    if (!side_out) throw InvalidConfig("cannot write '" + sidecar_path + "'");
    side_out << sidecar;
    return sidecar_path;
}

}  // namespace pgfluct::cli
