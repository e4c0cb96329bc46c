#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "pgfluct/errors.hpp"
#include "record.hpp"

namespace pgfluct::cli {

SweptParameter swept_from_token(const std::string& token) {
    if (token == "radius_a") return SweptParameter::RadiusA;
    if (token == "mass") return SweptParameter::Mass;
    if (token == "temperature") return SweptParameter::Temperature;
    throw InvalidConfig("--param must be one of radius_a, mass, temperature (got '" +
                        token + "')");
}

void SweepSpec::validate() const {
    if (!(std::isfinite(from) && from > 0.0))
        throw InvalidConfig("--from must be a positive number");
    if (!(std::isfinite(to) && to > 0.0))
        throw InvalidConfig("--to must be a positive number");
    if (!(from < to)) throw InvalidConfig("--from must be less than --to");
    if (points < 2) throw InvalidConfig("--points must be at least 2");
    if (gauges.empty()) throw InvalidConfig("--gauges selected none");
    for (std::size_t i = 0; i < gauges.size(); ++i)
        for (std::size_t k = i + 1; k < gauges.size(); ++k)
            if (gauges[i] == gauges[k])
                throw InvalidConfig(std::string("--gauges lists '") +
                                    gauge_token(gauges[i]) + "' twice");
    if (swept != SweptParameter::Mass && fixed.mass == 0.0) {
        for (PseudoGauge g : gauges) {
            PseudoGauge r = resolve_alias(g);
            if (r == PseudoGauge::GLW || r == PseudoGauge::HW)
                throw InvalidConfig(std::string("--gauges includes '") +
                                    gauge_token(g) +
                                    "' but --mass is 0; that kernel carries a "
                                    "1/m^2 prefactor and needs m > 0");
        }
    }
    // Validate the fixed point with a placeholder for the swept field so a bad
    // fixed parameter fails here, not mid-sweep.
    SystemParams probe = fixed;
    switch (swept) {
        case SweptParameter::RadiusA: probe.radius_a = from; break;
        case SweptParameter::Mass: probe.mass = from; break;
        case SweptParameter::Temperature: probe.temperature = from; break;
    }
    probe.validate();
    config.validate();
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g(static_cast<std::size_t>(points));
    const int n = points - 1;
    if (log_spacing) {
        const double la = std::log(from), lb = std::log(to);
        for (int i = 0; i <= n; ++i)
            g[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / n);
    } else {
        for (int i = 0; i <= n; ++i)
            g[static_cast<std::size_t>(i)] = from + (to - from) * i / n;
    }
    g.front() = from;
    g.back() = to;
    return g;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig(path + ":" + std::to_string(lineno) +
                                ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw InvalidConfig(path + ":" + std::to_string(lineno) +
                                ": empty key");
        kv[key] = val;
    }
    return kv;
}

SweepOutput run_sweep(const SweepSpec& spec, int jobs) {
    spec.validate();
    const std::vector<double> grid = spec.grid();
    const int ngauge = static_cast<int>(spec.gauges.size());
    const int ntask = spec.points * ngauge;

    std::vector<std::string> rows(static_cast<std::size_t>(ntask));
    std::vector<char> ok(static_cast<std::size_t>(ntask), 1);

    auto task = [&](int idx) {
        const std::size_t ui = static_cast<std::size_t>(idx);
        const std::size_t pi = ui / static_cast<std::size_t>(ngauge);
        const std::size_t gi = ui % static_cast<std::size_t>(ngauge);
        SystemParams p = spec.fixed;
        switch (spec.swept) {
            case SweptParameter::RadiusA: p.radius_a = grid[pi]; break;
            case SweptParameter::Mass: p.mass = grid[pi]; break;
            case SweptParameter::Temperature: p.temperature = grid[pi]; break;
        }
        RunRecord rec;
        try {
            rec = make_run_record(spec.gauges[gi], p, spec.config);
        } catch (const std::exception&) {
            // Shouldn't happen after validate(); record the point as failed
            // rather than abandoning the sweep.
            rec.params = p;
            rec.gauge = spec.gauges[gi];
            rec.result = {};
            rec.result.epsilon = rec.result.sigma2 = rec.result.sigma_n =
                std::numeric_limits<double>::quiet_NaN();
        }
        rows[ui] = to_csv_row(rec);
        ok[ui] = rec.result.converged ? 1 : 0;
    };

    if (jobs <= 1) {
        for (int i = 0; i < ntask; ++i) task(i);
    } else {
        jobs = std::min(jobs, ntask);
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    int i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= ntask) return;
                    task(i);
                }
            });
        for (std::thread& th : pool) th.join();
    }

    SweepOutput out;
    out.rows = std::move(rows);
    out.any_failed =
        std::any_of(ok.begin(), ok.end(), [](char c) { return c == 0; });
    return out;
}

}  // namespace pgfluct::cli
