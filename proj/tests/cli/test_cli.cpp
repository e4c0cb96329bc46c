// Black-box contract test for the pgfluct binary. The path to the binary
// arrives in PGFLUCT_BIN (set by ctest); everything runs through /bin/sh so
// the exit codes and stream routing are exercised exactly as a user sees them.
#include <sys/stat.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

int failures = 0;
std::string bin;
std::string work;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult last;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

bool file_exists(const std::string& path) {
    struct stat st{};
    return ::stat(path.c_str(), &st) == 0;
}

RunResult run(const std::string& args, const std::string& env_prefix = {}) {
    const std::string out_path = work + "/cmd_out.txt";
    const std::string err_path = work + "/cmd_err.txt";
    std::string cmd;
    if (!env_prefix.empty()) {
        cmd += env_prefix;
        cmd += ' ';
    }
    cmd += '\'';
    cmd += bin;
    cmd += "' ";
    cmd += args;
    cmd += " > '" + out_path + "' 2> '" + err_path + "'";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : -2);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    last = r;
    return r;
}

void fail(const char* file, int line, const char* what) {
    ++failures;
    std::printf("FAIL %s:%d: %s\n", file, line, what);
    std::printf("  last exit=%d\n  last stdout: %.500s\n  last stderr: %.500s\n",
                last.code, last.out.c_str(), last.err.c_str());
}

#define CHECK(cond)                                   \
    do {                                              \
        if (!(cond)) fail(__FILE__, __LINE__, #cond); \
    } while (0)

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

std::vector<std::string> cells_of(const std::string& line) {
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

double cell_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

// ---------------------------------------------------------------- scenarios --

void test_version_flag() {
    const RunResult r = run("--version");
    CHECK(r.code == 0);
    CHECK(!r.out.empty());
}

void test_compute_json_contract() {
    const RunResult r = run("compute --gauge can --mass 1 --temp 1 --radius 1");
    CHECK(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out, nullptr, false);
    CHECK(!j.is_discarded());
    CHECK(j.at("gauge") == "can");
    CHECK(j.at("converged") == true);
    CHECK(j.at("angular_mode") == "analytic");
    CHECK(j.at("rel_tol").get<double>() == 1e-6);
    const double eps = j.at("epsilon").get<double>();
    const double s2 = j.at("sigma2").get<double>();
    const double sn = j.at("sigma_n").get<double>();
    CHECK(eps > 0.0);
    CHECK(s2 > 0.0);
    CHECK(std::fabs(sn - std::sqrt(s2) / eps) <= 1e-12 * sn);
    const std::string digest = j.at("config_digest").get<std::string>();
    CHECK(digest.size() == 16);
    CHECK(digest.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(!j.at("tool_version").get<std::string>().empty());
    const std::string ts = j.at("timestamp").get<std::string>();
    CHECK(contains(ts, "T"));
    CHECK(!ts.empty() && ts.back() == 'Z');
}

void test_compute_csv_format() {
    const RunResult r = run(
        "compute --gauge can --mass 1 --temp 1 --radius 1 --format csv");
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    CHECK(lines.size() == 3);
    CHECK(lines[0] == "# schema=1");
    CHECK(lines[1] == "a,m,T,gauge,epsilon,sigma2,sigma_n,sigma2_err,converged");
    const auto cells = cells_of(lines[2]);
    CHECK(cells.size() == 9);
    CHECK(cells[3] == "can");
    CHECK(cells[8] == "true");
}

void test_compute_numeric_angular_agreement() {
    const RunResult ra = run("compute --gauge can --mass 1 --temp 1 --radius 1");
    const RunResult rn = run(
        "compute --gauge can --mass 1 --temp 1 --radius 1 --angular numeric");
    CHECK(ra.code == 0);
    CHECK(rn.code == 0);
    const nlohmann::json ja = nlohmann::json::parse(ra.out);
    const nlohmann::json jn = nlohmann::json::parse(rn.out);
    CHECK(jn.at("angular_mode") == "numeric");
    const double a = ja.at("sigma2").get<double>();
    const double n = jn.at("sigma2").get<double>();
    CHECK(std::fabs(n - a) <= 5e-6 * std::fabs(a));
}

void test_compute_glw_massless_fails() {
    const RunResult r = run("compute --gauge glw --mass 0 --temp 1 --radius 1");
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(contains(r.err, "1/(2m^2)"));
}

void test_compute_nonconvergence_exit2() {
    const RunResult r = run(
        "compute --gauge hw --mass 1 --temp 1 --radius 1 --tol 1e-12 "
        "--max-evals 10000");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "budget"));
    const nlohmann::json j = nlohmann::json::parse(r.out, nullptr, false);
    CHECK(!j.is_discarded());
    CHECK(j.at("converged") == false);
}

void test_usage_errors() {
    RunResult r = run("compute --gauge can --temp 1 --radius 1");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--mass"));
    r = run("compute --gauge can --mass 1 --temp 1 --radius 1 --format xml");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--format"));
    r = run("compute --gauge nope --mass 1 --temp 1 --radius 1");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "unknown gauge token"));
}

const char* small_sweep =
    "sweep --param radius_a --from 0.5 --to 2 --points 3 --gauges can,br "
    "--mass 1";

void test_sweep_rows_and_alias() {
    const RunResult r = run(small_sweep);
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    CHECK(lines.size() == 8);  // schema + header + 3 points x 2 gauges
    CHECK(lines[0] == "# schema=1");
    // point-major order, gauges in the order given
    const double grid[3] = {0.5, 1.25, 2.0};
    for (int p = 0; p < 3; ++p) {
        const auto can_cells = cells_of(lines[2 + 2 * p]);
        const auto br_cells = cells_of(lines[3 + 2 * p]);
        CHECK(can_cells.size() == 9);
        CHECK(can_cells[3] == "can");
        CHECK(br_cells[3] == "br");
        CHECK(cell_double(can_cells[0]) == grid[p]);
        // the alias is the same computation; every cell but the token matches
        for (int c = 0; c < 9; ++c)
            if (c != 3) CHECK(can_cells[c] == br_cells[c]);
    }
}

void test_sweep_determinism_and_jobs() {
    const RunResult serial1 = run(small_sweep);
    const RunResult serial2 = run(small_sweep);
    CHECK(serial1.out == serial2.out);
    const RunResult par = run(std::string(small_sweep) + " --jobs 4");
    CHECK(par.code == 0);
    CHECK(par.out == serial1.out);
    const RunResult env = run(small_sweep, "PGFLUCT_JOBS=2");
    CHECK(env.code == 0);
    CHECK(env.out == serial1.out);
    const std::string out_file = work + "/sweep_small.csv";
    const RunResult to_file = run(std::string(small_sweep) + " --out '" + out_file + "'");
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(out_file) == serial1.out);
}

std::string readme_csv;  // kept for the plot scenarios

void test_sweep_readme_example() {
    const std::string out_file = work + "/sweep_readme.csv";
    const RunResult r = run(
        "sweep --param radius_a --from 0.5 --to 10 --points 8 --spacing log "
        "--gauges can,glw,hw --mass 1 --temp 1 --out '" + out_file + "'");
    CHECK(r.code == 0);
    readme_csv = out_file;
    const auto lines = lines_of(slurp(out_file));
    CHECK(lines.size() == 26);  // schema + header + 8 points x 3 gauges
    // first and last grid values are endpoint-exact
    CHECK(cell_double(cells_of(lines[2])[0]) == 0.5);
    CHECK(cell_double(cells_of(lines[23])[0]) == 10.0);
    // the definitions converge at coarse resolution: sigma_n ratios against
    // the first gauge move toward 1 between a=0.5 and a=10
    const double can_first = cell_double(cells_of(lines[2])[6]);
    const double glw_first = cell_double(cells_of(lines[3])[6]);
    const double hw_first = cell_double(cells_of(lines[4])[6]);
    const double can_last = cell_double(cells_of(lines[23])[6]);
    const double glw_last = cell_double(cells_of(lines[24])[6]);
    const double hw_last = cell_double(cells_of(lines[25])[6]);
    CHECK(std::fabs(glw_last / can_last - 1.0) <
          std::fabs(glw_first / can_first - 1.0));
    CHECK(std::fabs(hw_last / can_last - 1.0) <
          std::fabs(hw_first / can_first - 1.0));
    CHECK(std::fabs(glw_first / can_first - 1.0) > 0.01);
}

void test_sweep_validation_errors() {
    RunResult r = run(
        "sweep --param radius_a --from -1 --to 2 --points 3 --gauges can --mass 1");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--from must be a positive number"));
    r = run("sweep --param radius_a --from 0.5 --to 2 --points 3 --gauges can,glw");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "1/m^2"));
    r = run(
        "sweep --param radius_a --from 0.5 --to 2 --points 3 --gauges can "
        "--mass 1 --radius 3");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "conflicts"));
    r = run("sweep --param radius_a --from 0.5 --to 2 --points 1 --gauges can --mass 1");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--points must be at least 2"));
    r = run("sweep --param radius_a --from 0.5 --to 2 --points 3 --gauges can,can --mass 1");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "twice"));
}

void test_sweep_config_file() {
    const std::string cfg = work + "/sweep.cfg";
    write_file(cfg,
               "# fixture for the config-file path\n"
               "param = radius_a\n"
               "from = 0.5\n"
               "to = 2\n"
               "points = 2\n"
               "gauges = can\n"
               "mass = 1\n");
    RunResult r = run("sweep --config '" + cfg + "'");
    CHECK(r.code == 0);
    CHECK(lines_of(r.out).size() == 4);
    // a flag overrides the file value for the same key
    r = run("sweep --config '" + cfg + "' --points 3");
    CHECK(r.code == 0);
    CHECK(lines_of(r.out).size() == 5);
    const std::string bad = work + "/sweep_bad.cfg";
    write_file(bad, "param = radius_a\nmasss = 1\n");
    r = run("sweep --config '" + bad + "'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "unknown key 'masss'"));
    const std::string incomplete = work + "/sweep_incomplete.cfg";
    write_file(incomplete, "from = 0.5\nto = 2\npoints = 2\n");
    r = run("sweep --config '" + incomplete + "'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "missing --param"));
}

void test_check_quick() {
    const std::string report = work + "/report.json";
    const RunResult r = run("check --quick --json '" + report + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "8/8 checks passed"));
    const nlohmann::json j =
        nlohmann::json::parse(slurp(report), nullptr, false);
    CHECK(!j.is_discarded());
    CHECK(j.at("all_passed") == true);
    CHECK(j.at("quick") == true);
    CHECK(j.at("checks").size() == 8);
    CHECK(j.at("checks")[0].at("name") == "gauge_equal_epsilon");
}

void test_check_grid_conflict() {
    const RunResult r = run("check --quick --grid full");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "conflicts"));
}

void test_plot_happy_path() {
    CHECK(!readme_csv.empty());
    const std::string svg = work + "/plot.svg";
    const RunResult r = run("plot '" + readme_csv +
                            "' --x a --y sigma_n --series gauge --logx --out '" +
                            svg + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.err, "wrote"));
    const std::string svg_text = slurp(svg);
    CHECK(svg_text.rfind("<svg", 0) == 0);
    CHECK(contains(svg_text, "</svg>"));
    CHECK(contains(svg_text, "polyline"));
    // sidecar holds the plotted columns exactly as they appear in the input
    const std::string sidecar = work + "/plot.data.csv";
    CHECK(file_exists(sidecar));
    std::string expected = "a,sigma_n,gauge\n";
    const auto lines = lines_of(slurp(readme_csv));
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto cells = cells_of(lines[i]);
        expected += cells[0] + "," + cells[6] + "," + cells[3] + "\n";
    }
    CHECK(slurp(sidecar) == expected);
}

void test_plot_errors() {
    const std::string empty = work + "/empty.csv";
    write_file(empty, "");
    RunResult r = run("plot '" + empty + "' --x a --y b --out '" + work +
                      "/empty.svg'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "no header row"));
    CHECK(!file_exists(work + "/empty.svg"));

    const std::string header_only = work + "/header_only.csv";
    write_file(header_only, "a,b\n");
    r = run("plot '" + header_only + "' --x a --y b --out '" + work +
            "/header_only.svg'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "no data rows"));

    const std::string malformed = work + "/malformed.csv";
    write_file(malformed, "a,b\n1,2\n3\n");
    r = run("plot '" + malformed + "' --x a --y b --out '" + work +
            "/malformed.svg'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, ":3:"));
    CHECK(contains(r.err, "expected 2 fields, got 1"));

    const std::string good = work + "/good.csv";
    write_file(good, "a,b\n1,2\n2,3\n");
    r = run("plot '" + good + "' --x zzz --y b --out '" + work + "/good.svg'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--x"));
    CHECK(contains(r.err, "zzz"));

    const std::string zero_y = work + "/zero_y.csv";
    write_file(zero_y, "a,b\n1,0\n2,3\n");
    r = run("plot '" + zero_y + "' --x a --y b --logy --out '" + work +
            "/zero_y.svg'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--logy"));

    const std::string single = work + "/single.csv";
    write_file(single, "a,b\n1,2\n");
    r = run("plot '" + single + "' --x a --y b --out '" + work + "/single.svg'");
    CHECK(r.code == 0);
    CHECK(file_exists(work + "/single.svg"));
}

}  // namespace

int main() {
    const char* env_bin = std::getenv("PGFLUCT_BIN");
    if (!env_bin || !*env_bin) {
        std::fprintf(stderr, "PGFLUCT_BIN is not set; run through ctest\n");
        return 1;
    }
    bin = env_bin;
    char tmpl[] = "/tmp/pgfluct_cli_XXXXXX";
    const char* dir = mkdtemp(tmpl);
    if (!dir) {
        std::fprintf(stderr, "mkdtemp failed\n");
        return 1;
    }
    work = dir;

    struct Scenario {
        const char* name;
        void (*fn)();
    };
    const Scenario scenarios[] = {
        {"version_flag", test_version_flag},
        {"compute_json_contract", test_compute_json_contract},
        {"compute_csv_format", test_compute_csv_format},
        {"compute_numeric_angular_agreement", test_compute_numeric_angular_agreement},
        {"compute_glw_massless_fails", test_compute_glw_massless_fails},
        {"compute_nonconvergence_exit2", test_compute_nonconvergence_exit2},
        {"usage_errors", test_usage_errors},
        {"sweep_rows_and_alias", test_sweep_rows_and_alias},
        {"sweep_determinism_and_jobs", test_sweep_determinism_and_jobs},
        {"sweep_readme_example", test_sweep_readme_example},
        {"sweep_validation_errors", test_sweep_validation_errors},
        {"sweep_config_file", test_sweep_config_file},
        {"check_quick", test_check_quick},
        {"check_grid_conflict", test_check_grid_conflict},
        {"plot_happy_path", test_plot_happy_path},
        {"plot_errors", test_plot_errors},
    };
    for (const Scenario& s : scenarios) {
        std::printf("-- %s\n", s.name);
        std::fflush(stdout);
        s.fn();
    }
    if (failures) {
        std::printf("%d check(s) failed (work dir kept at %s)\n", failures,
                    work.c_str());
        return 1;
    }
    std::printf("all CLI scenarios passed\n");
    return 0;
}
