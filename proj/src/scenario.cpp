#include "crosscurve/mc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "crosscurve/mc/philox.hpp"

namespace xc {

const ScenarioColumn& ScenarioSet::column(const std::string& market, const std::string& series,
                                          double maturity) const {
    for (const auto& c : columns) {
        if (c.market == market && c.series == series &&
            (series == "h" || std::abs(c.maturity - maturity) < 1e-9)) {
            return c;
        }
    }
    throw std::invalid_argument("scenario has no column " + market + ":" + series);
}

bool ScenarioSet::has_column(const std::string& market, const std::string& series,
                             double maturity) const {
    for (const auto& c : columns) {
        if (c.market == market && c.series == series &&
            (series == "h" || std::abs(c.maturity - maturity) < 1e-9)) {
            return true;
        }
    }
    return false;
}

ScenarioSet simulate_markets(const MarketSystem& system, const SimulationConfig& config) {
    require(config.n_paths >= 1, "need at least one path");
    require(config.dt > 0.0 && config.horizon > config.dt / 2.0, "bad simulation grid");
    const int n_steps = static_cast<int>(std::llround(config.horizon / config.dt));
    require(n_steps >= 2, "simulation grid needs at least two steps");
    require(std::abs(n_steps * config.dt - config.horizon) < 1e-9,
            "dt must divide the horizon");

    ScenarioSet scen;
    scen.seed = config.seed;
    scen.dt = config.dt;
    scen.n_paths = config.n_paths;
    scen.times.resize(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) scen.times[static_cast<std::size_t>(k)] = k * config.dt;

    struct ColumnPlan {
        int market;
        int kind;  // 0 = h, 1 = P
        double maturity;
    };
    std::vector<ColumnPlan> plan;
    for (int i = 0; i < system.n_markets(); ++i) {
        const auto& label = system.model(i).label();
        scen.markets.push_back(label);
        plan.push_back({i, 0, 0.0});
        const auto it = config.bond_maturities.find(label);
        if (it != config.bond_maturities.end()) {
            for (double T : it->second) plan.push_back({i, 1, T});
        }
    }
    const std::size_t n_slices = scen.times.size();
    scen.columns.resize(plan.size());
    for (std::size_t c = 0; c < plan.size(); ++c) {
        scen.columns[c].market = system.model(plan[c].market).label();
        scen.columns[c].series = plan[c].kind == 0 ? "h" : "P";
        scen.columns[c].maturity = plan[c].maturity;
        scen.columns[c].data.assign(static_cast<std::size_t>(config.n_paths) * n_slices, 0.0);
    }

    const NormalStream rng(config.seed);
    const int noise_dim = system.joint_noise_dim();
    const State init = system.initial_state();

    auto run_paths = [&](int path_begin, int path_end) {
        State joint = init;
        std::vector<double> z(static_cast<std::size_t>(noise_dim));
        for (int p = path_begin; p < path_end; ++p) {
            joint = init;
            double t = 0.0;
            for (int k = 0; k <= n_steps; ++k) {
                if (k > 0) {
                    rng.fill(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k - 1),
                             static_cast<std::uint32_t>(noise_dim), z.data());
                    system.evolve(joint, t, config.dt, z);
                    t += config.dt;
                }
                for (std::size_t c = 0; c < plan.size(); ++c) {
                    const auto st = system.state_of(plan[c].market, joint);
                    const auto& model = system.model(plan[c].market);
                    double v;
                    if (plan[c].kind == 0) {
                        v = model.kernel_value(st, t);
                    } else if (plan[c].maturity >= t - 1e-12) {
                        v = model.conditional_bond(st, std::min(t, plan[c].maturity),
                                                   plan[c].maturity);
                    } else {
                        v = std::numeric_limits<double>::quiet_NaN();  // matured
                    }
                    scen.columns[c].data[static_cast<std::size_t>(p) * n_slices +
                                         static_cast<std::size_t>(k)] = v;
                }
            }
        }
    };

    int n_threads = config.n_threads > 0 ? config.n_threads
                                         : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, 16);
    if (n_threads == 1 || config.n_paths < 256) {
        run_paths(0, config.n_paths);
    } else {
        std::vector<std::thread> workers;
        const int block = (config.n_paths + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const int lo = w * block;
            const int hi = std::min(config.n_paths, lo + block);
            if (lo >= hi) break;
            workers.emplace_back(run_paths, lo, hi);
        }
        for (auto& w : workers) w.join();
    }
    return scen;
}

void write_scenario(const ScenarioSet& scenario, const std::string& bin_path,
                    const std::string& sidecar_path) {
    nlohmann::json meta;
    meta["format"] = "crosscurve-scenario-v1";
    meta["seed"] = scenario.seed;
    meta["dt"] = scenario.dt;
    meta["n_paths"] = scenario.n_paths;
    meta["times"] = scenario.times;
    meta["markets"] = scenario.markets;
    auto& cols = meta["columns"] = nlohmann::json::array();
    std::size_t offset = 0;
    for (const auto& c : scenario.columns) {
        cols.push_back({{"market", c.market},
                        {"series", c.series},
                        {"maturity", c.maturity},
                        {"offset", offset},
                        {"count", c.data.size()}});
        offset += c.data.size();
    }
    std::ofstream side(sidecar_path);
    require(side.good(), "cannot write sidecar: " + sidecar_path);
    side << meta.dump(2) << "\n";

    std::ofstream bin(bin_path, std::ios::binary);
    require(bin.good(), "cannot write scenario: " + bin_path);
    for (const auto& c : scenario.columns) {
        bin.write(reinterpret_cast<const char*>(c.data.data()),
                  static_cast<std::streamsize>(c.data.size() * sizeof(double)));
    }
}

ScenarioSet read_scenario(const std::string& bin_path, const std::string& sidecar_path) {
    std::ifstream side(sidecar_path);
    require(side.good(), "cannot open sidecar: " + sidecar_path);
    nlohmann::json meta;
    side >> meta;
    require(meta.value("format", "") == std::string("crosscurve-scenario-v1"),
            "unknown scenario format");

    ScenarioSet scen;
    scen.seed = meta.at("seed").get<std::uint64_t>();
    scen.dt = meta.at("dt").get<double>();
    scen.n_paths = meta.at("n_paths").get<int>();
    scen.times = meta.at("times").get<std::vector<double>>();
    scen.markets = meta.at("markets").get<std::vector<std::string>>();

    std::ifstream bin(bin_path, std::ios::binary);
    require(bin.good(), "cannot open scenario: " + bin_path);
    for (const auto& jc : meta.at("columns")) {
        ScenarioColumn c;
        c.market = jc.at("market").get<std::string>();
        c.series = jc.at("series").get<std::string>();
        c.maturity = jc.at("maturity").get<double>();
        c.data.resize(jc.at("count").get<std::size_t>());
        bin.read(reinterpret_cast<char*>(c.data.data()),
                 static_cast<std::streamsize>(c.data.size() * sizeof(double)));
        require(bin.gcount() == static_cast<std::streamsize>(c.data.size() * sizeof(double)),
                "scenario file truncated");
        scen.columns.push_back(std::move(c));
    }
    return scen;
}

void export_scenario_csv(const ScenarioSet& scenario, const std::string& csv_path) {
    std::ofstream out(csv_path);
    require(out.good(), "cannot write CSV: " + csv_path);
    out.precision(17);
    out << "path,time";
    for (const auto& c : scenario.columns) {
        out << "," << c.market << ":" << c.series;
        if (c.series == "P") out << "@" << c.maturity;
    }
    out << "\n";
    for (int p = 0; p < scenario.n_paths; ++p) {
        for (std::size_t k = 0; k < scenario.times.size(); ++k) {
            out << p << "," << scenario.times[k];
            for (const auto& c : scenario.columns) out << "," << scenario.value(c, p, k);
            out << "\n";
        }
    }
}

}  // namespace xc
