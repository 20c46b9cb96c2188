#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crosscurve/market_system.hpp"

namespace xc {

// One simulated block of data: a named series for one market on the common
// time grid, stored path-major ([path * n_times + slice]).
struct ScenarioColumn {
    std::string market;
    std::string series;  // "h" or "P"
    double maturity = 0.0;  // for "P" columns
    std::vector<double> data;
};

struct ScenarioSet {
    std::uint64_t seed = 0;
    double dt = 0.0;
    int n_paths = 0;
    std::vector<double> times;
    std::vector<std::string> markets;
    std::vector<ScenarioColumn> columns;

    double value(const ScenarioColumn& col, int path, std::size_t slice) const {
        return col.data[static_cast<std::size_t>(path) * times.size() + slice];
    }
    const ScenarioColumn& column(const std::string& market, const std::string& series,
                                 double maturity = 0.0) const;
    bool has_column(const std::string& market, const std::string& series,
                    double maturity = 0.0) const;
};

struct SimulationConfig {
    double horizon = 1.0;
    double dt = 1.0 / 250.0;
    int n_paths = 1000;
    std::uint64_t seed = 1;
    // Bond maturities to record per market label; markets not listed get none.
    std::map<std::string, std::vector<double>> bond_maturities;
    int n_threads = 0;  // 0 = hardware default
};

// Simulates all markets of the system on a shared grid with counter-based
// per-path substreams. Results are identical for any thread count.
ScenarioSet simulate_markets(const MarketSystem& system, const SimulationConfig& config);

// Columnar binary (raw little-endian doubles) plus a JSON sidecar describing
// the layout; a CSV export exists for inspection.
void write_scenario(const ScenarioSet& scenario, const std::string& bin_path,
                    const std::string& sidecar_path);
ScenarioSet read_scenario(const std::string& bin_path, const std::string& sidecar_path);
void export_scenario_csv(const ScenarioSet& scenario, const std::string& csv_path);

}  // namespace xc
