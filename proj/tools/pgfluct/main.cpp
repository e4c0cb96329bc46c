#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pgfluct/checks.hpp"
#include "pgfluct/errors.hpp"
#include "pgfluct/version.hpp"
#include "plot.hpp"
#include "record.hpp"
#include "sweep.hpp"

using pgfluct::AngularMode;
using pgfluct::InvalidConfig;
using pgfluct::PseudoGauge;
using pgfluct::QuadratureConfig;
using pgfluct::SystemParams;
namespace cli = pgfluct::cli;

namespace {

double kv_double(const std::string& key, const std::string& val) {
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(val.c_str(), &end);
    if (val.empty() || end != val.c_str() + val.size())
        throw InvalidConfig("config key '" + key + "': '" + val +
                            "' is not a number");
    return v;
}

long kv_long(const std::string& key, const std::string& val) {
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(val.c_str(), &end, 10);
    if (val.empty() || end != val.c_str() + val.size() || errno == ERANGE)
        throw InvalidConfig("config key '" + key + "': '" + val +
                            "' is not an integer");
    return v;
}

QuadratureConfig make_config(double tol, std::size_t max_evals,
                             const std::string& angular) {
    if (angular != "numeric" && angular != "analytic")
        throw InvalidConfig("--angular must be numeric or analytic (got '" +
                            angular + "')");
    QuadratureConfig cfg;
    cfg.rel_tol = tol;
    cfg.max_evals = max_evals;
    cfg.angular_mode = angular == "numeric" ? AngularMode::Numeric
                                            : AngularMode::AnalyticMoments;
    cfg.validate();
    return cfg;
}

void warn_small_mass(PseudoGauge g, double mass, double temperature) {
    PseudoGauge r = pgfluct::resolve_alias(g);
    if ((r == PseudoGauge::GLW || r == PseudoGauge::HW) && mass > 0.0 &&
        mass < 1e-3 * temperature)
        std::fprintf(stderr,
                     "pgfluct: warning: m/T = %.3g; the %s kernel's 1/m^2 "
                     "prefactor amplifies roundoff at small mass\n",
                     mass / temperature, pgfluct::gauge_token(g));
}

std::vector<PseudoGauge> parse_gauges(const std::string& csv) {
    std::vector<PseudoGauge> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = csv.find(',', start);
        std::string tok = csv.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t b = tok.find_first_not_of(" \t");
        std::size_t e = tok.find_last_not_of(" \t");
        tok = b == std::string::npos ? std::string{} : tok.substr(b, e - b + 1);
        if (tok.empty()) throw InvalidConfig("--gauges has an empty entry");
        out.push_back(pgfluct::gauge_from_token(tok));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

// ---------------------------------------------------------------- compute --

struct ComputeArgs {
    std::string gauge;
    double mass = 0.0;
    double temp = 0.0;
    double radius = 0.0;
    double tol = 1e-6;
    double degeneracy = 4.0;
    std::size_t max_evals = QuadratureConfig{}.max_evals;
    std::string angular = "analytic";
    std::string format = "json";
};

int cmd_compute(const ComputeArgs& a) {
    PseudoGauge g = pgfluct::gauge_from_token(a.gauge);
    SystemParams p;
    p.mass = a.mass;
    p.temperature = a.temp;
    p.radius_a = a.radius;
    p.degeneracy = a.degeneracy;
    p.validate();
    QuadratureConfig cfg = make_config(a.tol, a.max_evals, a.angular);
    warn_small_mass(g, p.mass, p.temperature);
    cli::RunRecord rec = cli::make_run_record(g, p, cfg);
    if (a.format == "csv")
        std::printf("%s\n%s\n%s\n", cli::csv_schema_line, cli::csv_header,
                    cli::to_csv_row(rec).c_str());
    else
        std::printf("%s\n", cli::to_json(rec).c_str());
    if (!rec.result.converged) {
        std::fprintf(stderr, "pgfluct: evaluation budget exhausted before the "
                             "tolerance was met\n");
        return 2;
    }
    return 0;
}

// ------------------------------------------------------------------ sweep --

struct SweepWiring {
    std::string config_path;
    std::string param;
    std::string spacing = "linear";
    std::string gauges = "can,br,glw,hw";
    std::string angular = "analytic";
    std::string out;
    double from = 0.0;
    double to = 0.0;
    double mass = 0.0;
    double temp = 1.0;
    double radius = 1.0;
    double tol = 1e-6;
    double degeneracy = 4.0;
    int points = 0;
    int jobs = 0;
    std::size_t max_evals = QuadratureConfig{}.max_evals;

    CLI::Option *o_param = nullptr, *o_from = nullptr, *o_to = nullptr,
                *o_points = nullptr, *o_spacing = nullptr, *o_gauges = nullptr,
                *o_mass = nullptr, *o_temp = nullptr, *o_radius = nullptr,
                *o_tol = nullptr, *o_degeneracy = nullptr, *o_angular = nullptr,
                *o_max_evals = nullptr, *o_jobs = nullptr, *o_out = nullptr,
                *o_config = nullptr;
};

struct ResolvedSweep {
    cli::SweepSpec spec;
    int jobs = 1;
    std::string out;
};

ResolvedSweep resolve_sweep(SweepWiring& w) {
    std::map<std::string, std::string> file;
    if (w.o_config->count()) file = cli::read_config_file(w.config_path);

    static const std::set<std::string> known = {
        "param", "from",       "to",  "points",  "spacing",   "gauges",
        "mass",  "temp",       "radius", "tol",  "degeneracy", "angular",
        "max-evals", "jobs",   "out"};
    for (const auto& [k, v] : file)
        if (!known.count(k))
            throw InvalidConfig("config: unknown key '" + k + "'");

    // Flags override file values; either source can satisfy a required field.
    auto have = [&](CLI::Option* o, const char* key) {
        return o->count() > 0 || file.count(key) > 0;
    };
    auto pick_str = [&](CLI::Option* o, const char* key, std::string& slot) {
        if (!o->count())
            if (auto it = file.find(key); it != file.end()) slot = it->second;
    };
    auto pick_double = [&](CLI::Option* o, const char* key, double& slot) {
        if (!o->count())
            if (auto it = file.find(key); it != file.end())
                slot = kv_double(key, it->second);
    };
    auto pick_int = [&](CLI::Option* o, const char* key, int& slot) {
        if (!o->count())
            if (auto it = file.find(key); it != file.end())
                slot = static_cast<int>(kv_long(key, it->second));
    };

    if (!have(w.o_param, "param"))
        throw InvalidConfig("missing --param (flag or config file)");
    if (!have(w.o_from, "from"))
        throw InvalidConfig("missing --from (flag or config file)");
    if (!have(w.o_to, "to"))
        throw InvalidConfig("missing --to (flag or config file)");
    if (!have(w.o_points, "points"))
        throw InvalidConfig("missing --points (flag or config file)");

    pick_str(w.o_param, "param", w.param);
    pick_double(w.o_from, "from", w.from);
    pick_double(w.o_to, "to", w.to);
    pick_int(w.o_points, "points", w.points);
    pick_str(w.o_spacing, "spacing", w.spacing);
    pick_str(w.o_gauges, "gauges", w.gauges);
    pick_double(w.o_mass, "mass", w.mass);
    pick_double(w.o_temp, "temp", w.temp);
    pick_double(w.o_radius, "radius", w.radius);
    pick_double(w.o_tol, "tol", w.tol);
    pick_double(w.o_degeneracy, "degeneracy", w.degeneracy);
    pick_str(w.o_angular, "angular", w.angular);
    if (!w.o_max_evals->count())
        if (auto it = file.find("max-evals"); it != file.end())
            w.max_evals = static_cast<std::size_t>(kv_long("max-evals", it->second));
    pick_str(w.o_out, "out", w.out);

    ResolvedSweep r;
    r.spec.swept = cli::swept_from_token(w.param);
    r.spec.from = w.from;
    r.spec.to = w.to;
    r.spec.points = w.points;
    if (w.spacing == "log")
        r.spec.log_spacing = true;
    else if (w.spacing != "linear")
        throw InvalidConfig("--spacing must be linear or log (got '" + w.spacing +
                            "')");
    r.spec.gauges = parse_gauges(w.gauges);
    r.spec.fixed.mass = w.mass;
    r.spec.fixed.temperature = w.temp;
    r.spec.fixed.radius_a = w.radius;
    r.spec.fixed.degeneracy = w.degeneracy;
    r.spec.config = make_config(w.tol, w.max_evals, w.angular);

    const char* conflict = nullptr;
    if (r.spec.swept == cli::SweptParameter::RadiusA && have(w.o_radius, "radius"))
        conflict = "--radius";
    if (r.spec.swept == cli::SweptParameter::Mass && have(w.o_mass, "mass"))
        conflict = "--mass";
    if (r.spec.swept == cli::SweptParameter::Temperature && have(w.o_temp, "temp"))
        conflict = "--temp";
    if (conflict)
        throw InvalidConfig(std::string(conflict) + " conflicts with --param " +
                            w.param + "; the swept parameter takes its values "
                            "from the grid");

    if (w.o_jobs->count()) {
        r.jobs = w.jobs;
    } else if (auto it = file.find("jobs"); it != file.end()) {
        r.jobs = static_cast<int>(kv_long("jobs", it->second));
    } else if (const char* env = std::getenv("PGFLUCT_JOBS")) {
        r.jobs = static_cast<int>(kv_long("PGFLUCT_JOBS", env));
    } else {
        r.jobs = 1;
    }
    if (r.jobs < 1) throw InvalidConfig("--jobs must be >= 1");
    r.out = w.out;
    return r;
}

int cmd_sweep(SweepWiring& w) {
    ResolvedSweep r = resolve_sweep(w);
    r.spec.validate();

    const double m_lo = r.spec.swept == cli::SweptParameter::Mass
                            ? r.spec.from
                            : r.spec.fixed.mass;
    const double t_hi = r.spec.swept == cli::SweptParameter::Temperature
                            ? r.spec.to
                            : r.spec.fixed.temperature;
    for (PseudoGauge g : r.spec.gauges) warn_small_mass(g, m_lo, t_hi);

    cli::SweepOutput res = cli::run_sweep(r.spec, r.jobs);

    std::string text = cli::csv_schema_line;
    text += '\n';
    text += cli::csv_header;
    text += '\n';
    for (const std::string& row : res.rows) {
        text += row;
        text += '\n';
    }
    if (r.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(r.out, std::ios::binary);
        if (!out) throw InvalidConfig("cannot write '" + r.out + "'");
        out << text;
    }
    if (res.any_failed) {
        std::fprintf(stderr, "pgfluct: one or more sweep points did not "
                             "converge (converged=false rows)\n");
        return 2;
    }
    return 0;
}

// ------------------------------------------------------------------ check --

int cmd_check(bool quick, const std::string& grid, const std::string& json_path) {
    if (quick && grid == "full")
        throw InvalidConfig("--quick conflicts with --grid full");
    pgfluct::checks::CheckOptions opt;
    opt.quick = quick || grid == "quick";

    using Clock = std::chrono::steady_clock;
    using pgfluct::checks::CheckOutcome;
    std::vector<std::pair<CheckOutcome, double>> results;
    bool all = true;

    auto run1 = [&](CheckOutcome (*fn)(const pgfluct::checks::CheckOptions&)) {
        Clock::time_point t0 = Clock::now();
        CheckOutcome oc = fn(opt);
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        all = all && oc.passed;
        std::printf("[%s] %-26s observed %.3e  allowed %.3e  (%.1fs)\n",
                    oc.passed ? "PASS" : "FAIL", oc.name.c_str(), oc.observed,
                    oc.allowed, secs);
        if (!oc.detail.empty()) std::printf("       %s\n", oc.detail.c_str());
        std::fflush(stdout);
        results.emplace_back(std::move(oc), secs);
    };

    namespace ck = pgfluct::checks;
    run1([](const ck::CheckOptions& o) { return ck::check_gauge_equal_epsilon(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_coincidence_identity(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_exchange_vanishing(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_cross_mode_equivalence(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_bessel_epsilon(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_lattice_sigma2(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_large_a_ratio_convergence(o); });
    run1([](const ck::CheckOptions& o) { return ck::check_rescaling_collapse(o); });

    std::size_t passed = 0;
    for (const auto& [oc, secs] : results)
        if (oc.passed) ++passed;
    std::printf("%zu/%zu checks passed\n", passed, results.size());

    if (!json_path.empty()) {
        nlohmann::ordered_json root;
        root["quick"] = opt.quick;
        root["all_passed"] = all;
        root["tool_version"] = pgfluct::version_string;
        root["timestamp"] = cli::utc_timestamp();
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [oc, secs] : results) {
            nlohmann::ordered_json jc;
            jc["name"] = oc.name;
            jc["passed"] = oc.passed;
            jc["observed"] = oc.observed;
            jc["allowed"] = oc.allowed;
            jc["detail"] = oc.detail;
            jc["seconds"] = secs;
            arr.push_back(std::move(jc));
        }
        root["checks"] = std::move(arr);
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw InvalidConfig("cannot write '" + json_path + "'");
        out << root.dump(2) << '\n';
    }
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smeared energy-density fluctuations of a hot spin-1/2 gas "
                 "under different energy-momentum tensor definitions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pgfluct::version_string);

    ComputeArgs ca;
    CLI::App* compute =
        app.add_subcommand("compute", "evaluate one (gauge, m, T, a) point");
    compute->add_option("--gauge", ca.gauge, "can | br | glw | hw")->required();
    compute->add_option("--mass", ca.mass, "particle mass, energy units")
        ->required()
        ->check(CLI::NonNegativeNumber);
    compute->add_option("--temp", ca.temp, "temperature, energy units")
        ->required()
        ->check(CLI::PositiveNumber);
    compute
        ->add_option("--radius", ca.radius,
                     "Gaussian smearing radius, inverse energy units")
        ->required()
        ->check(CLI::PositiveNumber);
    compute->add_option("--tol", ca.tol, "relative tolerance (default 1e-6)")
        ->check(CLI::PositiveNumber);
    compute
        ->add_option("--degeneracy", ca.degeneracy,
                     "internal degrees of freedom (default 4)")
        ->check(CLI::PositiveNumber);
    compute->add_option("--max-evals", ca.max_evals,
                        "integrand evaluation budget");
    compute->add_option("--angular", ca.angular,
                        "numeric | analytic (default analytic)");
    compute->add_option("--format", ca.format, "json | csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));

    SweepWiring sw;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "evaluate a parameter grid, CSV to stdout or --out");
    sw.o_param = sweep->add_option("--param", sw.param,
                                   "swept parameter: radius_a | mass | temperature");
    sw.o_from = sweep->add_option("--from", sw.from, "first grid value");
    sw.o_to = sweep->add_option("--to", sw.to, "last grid value");
    sw.o_points = sweep->add_option("--points", sw.points, "grid size (>= 2)");
    sw.o_spacing =
        sweep->add_option("--spacing", sw.spacing, "linear | log (default linear)");
    sw.o_gauges = sweep->add_option(
        "--gauges", sw.gauges, "comma list of can|br|glw|hw (default all four)");
    sw.o_mass = sweep->add_option("--mass", sw.mass, "fixed mass (default 0)");
    sw.o_temp = sweep->add_option("--temp", sw.temp, "fixed temperature (default 1)");
    sw.o_radius =
        sweep->add_option("--radius", sw.radius, "fixed smearing radius (default 1)");
    sw.o_tol = sweep->add_option("--tol", sw.tol, "relative tolerance (default 1e-6)");
    sw.o_degeneracy = sweep->add_option("--degeneracy", sw.degeneracy,
                                        "internal degrees of freedom (default 4)");
    sw.o_angular = sweep->add_option("--angular", sw.angular,
                                     "numeric | analytic (default analytic)");
    sw.o_max_evals = sweep->add_option("--max-evals", sw.max_evals,
                                       "integrand evaluation budget per record");
    sw.o_jobs = sweep->add_option(
        "--jobs", sw.jobs, "worker threads (default $PGFLUCT_JOBS, then 1)");
    sw.o_out = sweep->add_option("--out", sw.out, "output file (default stdout)");
    sw.o_config = sweep->add_option("--config", sw.config_path,
                                    "key=value file; flags override it");

    bool quick = false;
    std::string grid;
    std::string check_json;
    CLI::App* check = app.add_subcommand("check", "run the invariant suite");
    check->add_flag("--quick", quick, "reduced grids, about a minute");
    check->add_option("--grid", grid, "quick | full (default full)")
        ->check(CLI::IsMember({"quick", "full"}));
    check->add_option("--json", check_json,
                      "also write a machine-readable report here");

    cli::PlotRequest pr;
    CLI::App* plot =
        app.add_subcommand("plot", "render a sweep CSV as a line plot");
    plot->add_option("input", pr.input, "sweep CSV file")->required();
    plot->add_option("--x", pr.x, "column for the x axis")->required();
    plot->add_option("--y", pr.y, "column for the y axis")->required();
    plot->add_option("--series", pr.series,
                     "column that splits rows into one curve each");
    plot->add_option("--out", pr.out_svg, "output SVG path")->required();
    plot->add_flag("--logx", pr.logx, "log-scale x axis");
    plot->add_flag("--logy", pr.logy, "log-scale y axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the offending-flag message
        return code == 0 ? 0 : 1;
    }

    try {
        if (*compute) return cmd_compute(ca);
        if (*sweep) return cmd_sweep(sw);
        if (*check) return cmd_check(quick, grid, check_json);
        if (*plot) {
            std::string sidecar = cli::render_plot(pr);
            std::fprintf(stderr, "pgfluct: wrote %s and %s\n",
                         pr.out_svg.c_str(), sidecar.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pgfluct: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
