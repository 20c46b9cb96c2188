#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crosscurve/bootstrap.hpp"
#include "crosscurve/conversion.hpp"
#include "crosscurve/instruments.hpp"
#include "crosscurve/mc/diagnostics.hpp"
#include "crosscurve/mc/scenario.hpp"
#include "crosscurve/model_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitConvention = 4;

struct ModelSet {
    xc::MarketSystem system;

    int index_of(const std::string& label) const { return system.find(label); }
};

ModelSet load_models(const std::vector<std::string>& paths) {
    ModelSet ms;
    for (const auto& p : paths) {
        auto loaded = xc::load_model(p);
        ms.system.add_market(loaded.model, loaded.noise_indices);
    }
    return ms;
}

int cmd_bootstrap(const std::string& quotes_path, const std::string& mode,
                  const std::string& discount_path, const std::string& out_path) {
    xc::QuoteSet quotes;
    try {
        quotes = xc::QuoteSet::load_csv(quotes_path);
    } catch (const std::exception& e) {
        std::cerr << "quote parse error: " << e.what() << "\n";
        return kExitParse;
    }
    xc::BootstrapResult result{xc::Curve("", {{1.0, 1.0}}), {}, {}};
    try {
        if (mode == "emerging") {
            result = xc::bootstrap_emerging(quotes);
        } else if (mode == "developed") {
            if (discount_path.empty()) {
                std::cerr << "developed mode needs --discount\n";
                return kExitConvention;
            }
            result = xc::bootstrap_developed(quotes, xc::Curve::load(discount_path));
        } else if (mode == "practitioner") {
            result = xc::bootstrap_practitioner(quotes);
        } else {
            std::cerr << "unknown mode: " << mode << "\n";
            return kExitParse;
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "bootstrap infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "bootstrap error: " << e.what() << "\n";
        return kExitParse;
    }

    result.curve.save(out_path);
    std::printf("%-24s %22s\n", "quote", "residual");
    for (std::size_t i = 0; i < result.residuals.size(); ++i) {
        std::printf("%-24s %22.3e\n", result.quote_ids[i].c_str(), result.residuals[i]);
    }
    std::printf("curve written to %s\n", out_path.c_str());
    return result.max_abs_residual() < 1e-10 ? kExitOk : kExitFail;
}

int cmd_price(const std::string& instrument_path, const std::vector<std::string>& model_paths,
              const std::string& out_path) {
    json instr;
    ModelSet models;
    try {
        std::ifstream in(instrument_path);
        xc::require(in.good(), "cannot open instrument file: " + instrument_path);
        in >> instr;
        models = load_models(model_paths);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }

    const std::string kind = instr.value("kind", "");
    json report;
    report["kind"] = kind;
    try {
        const auto model_of = [&](const char* key) -> std::pair<const xc::KernelModel*, xc::State> {
            const auto label = instr.at(key).get<std::string>();
            const int idx = models.index_of(label);
            return {&models.system.model(idx), models.system.model(idx).initial_state()};
        };
        const double t = 0.0;
        if (kind == "fra" || kind == "fra_dm" || kind == "fra_em_mc") {
            const auto sched = instr.at("schedule").get<std::vector<double>>();
            xc::require(sched.size() == 2, "FRA schedule needs [reset, pay]");
            xc::FraSpec fra{sched[0], sched[1], 0.0, std::nullopt};
            const std::string strike_market = instr.value("strike_market", "y");
            if (strike_market == "y") {
                fra.strike_y = instr.value("strike", 0.0);
            } else {
                fra.strike_x = instr.value("strike", 0.0);
            }
            auto [my, sy] = model_of("forecast");
            xc::PriceQuote q{};
            if (kind == "fra") {
                xc::require(!fra.strike_x.has_value(), "emerging FRA strike lives in market y");
                q = xc::fra_em_value(*my, sy, t, fra);
            } else {
                auto [mx, sx] = model_of("discount");
                if (fra.strike_x.has_value()) {
                    // convert through the valuation-time factor, then let the
                    // pricer check consistency
                    fra.strike_y = *fra.strike_x /
                                   xc::q_forward(*mx, sx, *my, sy, t, fra.pay);
                }
                q = kind == "fra_dm" ? xc::fra_dm_value(*mx, sx, *my, sy, t, fra)
                                     : xc::fra_em_multicurve_value(*mx, sx, *my, sy, t, fra);
            }
            report["value"] = q.value;
            report["fair_rate"] = q.fair_rate;
            report["representation_gap"] = q.representation_gap;
        } else if (kind == "irs" || kind == "irs_dm") {
            const auto times = instr.at("schedule").get<std::vector<double>>();
            xc::SwapSpec swap{xc::Schedule(times), instr.value("strike", 0.0),
                              instr.value("strike_market", "y") == std::string("x")};
            auto [my, sy] = model_of("forecast");
            xc::PriceQuote q{};
            if (kind == "irs") {
                q = xc::irs_em_value(*my, sy, t, swap);
            } else {
                auto [mx, sx] = model_of("discount");
                q = xc::irs_dm_value(*mx, sx, *my, sy, t, swap);
            }
            report["value"] = q.value;
            report["fair_rate"] = q.fair_rate;
            report["representation_gap"] = q.representation_gap;
        } else if (kind == "fx_fwd") {
            auto [mi, si] = model_of("discount");
            auto [mj, sj] = model_of("forecast");
            const auto q = xc::fx_forward(*mi, si, *mj, sj, instr.at("fx_spot").get<double>(), t,
                                          instr.at("maturity").get<double>(),
                                          instr.value("strike", 0.0));
            report["value"] = q.value;
            report["fair_rate"] = q.fair;
        } else if (kind == "il_bond") {
            auto [mn, sn] = model_of("discount");
            auto [mr, sr] = model_of("forecast");
            const double v = xc::inflation_bond(*mn, sn, *mr, sr, t,
                                                instr.at("maturity").get<double>());
            report["value"] = v;
        } else if (kind == "fx_libor") {
            auto [mxd, sxd] = model_of("discount");
            auto [myf, syf] = model_of("forecast");
            auto [mxf, sxf] = model_of("aux");
            const auto sched = instr.at("schedule").get<std::vector<double>>();
            xc::require(sched.size() == 2, "fx_libor schedule needs [reset, pay]");
            const double rate = xc::fx_libor_forward(*mxd, sxd, *mxf, sxf, *myf, syf,
                                                     instr.at("fx_spot").get<double>(), t,
                                                     sched[0], sched[1]);
            report["fair_rate"] = rate;
        } else if (kind == "il_fx") {
            auto [mni, sni] = model_of("discount");
            auto [mrj, srj] = model_of("forecast");
            auto [mnj, snj] = model_of("aux");
            const auto q = xc::inflation_fx_forward(*mni, sni, *mrj, srj, *mnj, snj,
                                                    instr.at("fx_spot").get<double>(), t,
                                                    instr.at("maturity").get<double>(),
                                                    instr.value("strike", 0.0));
            report["value"] = q.value;
            report["fair_rate"] = q.fair;
        } else {
            std::cerr << "unknown instrument kind: " << kind << "\n";
            return kExitParse;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "convention mismatch: " << e.what() << "\n";
        return kExitConvention;
    } catch (const std::exception& e) {
        std::cerr << "pricing error: " << e.what() << "\n";
        return kExitFail;
    }

    std::cout << report.dump(2) << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << report.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::vector<std::string>& model_paths, int paths, double horizon,
                 double dt, std::uint64_t seed, bool seed_given, const std::string& out_path,
                 const std::vector<double>& maturities, const std::string& csv_path) {
    if (!seed_given) {
        std::cerr << "a seed is mandatory for stochastic runs\n";
        return kExitParse;
    }
    ModelSet models;
    try {
        models = load_models(model_paths);
    } catch (const std::exception& e) {
        std::cerr << "model parse error: " << e.what() << "\n";
        return kExitParse;
    }
    xc::SimulationConfig cfg;
    cfg.horizon = horizon;
    cfg.dt = dt;
    cfg.n_paths = paths;
    cfg.seed = seed;
    for (int i = 0; i < models.system.n_markets(); ++i) {
        const auto& label = models.system.model(i).label();
        cfg.bond_maturities[label] =
            maturities.empty() ? std::vector<double>{horizon} : maturities;
    }
    try {
        const auto scen = xc::simulate_markets(models.system, cfg);
        xc::write_scenario(scen, out_path, out_path + ".json");
        if (!csv_path.empty()) xc::export_scenario_csv(scen, csv_path);
        std::printf("scenario written: %s (%d paths, %zu slices, %zu columns)\n",
                    out_path.c_str(), scen.n_paths, scen.times.size(), scen.columns.size());
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitOk;
}

int cmd_diagnose(const std::string& scenario_path, const std::string& tests_csv,
                 const std::vector<std::string>& model_paths, const std::string& pair,
                 const std::vector<double>& interval, const std::string& report_path) {
    if (!std::filesystem::exists(scenario_path) ||
        !std::filesystem::exists(scenario_path + ".json")) {
        std::cerr << "missing scenario file: " << scenario_path << "\n";
        return kExitParse;
    }
    xc::ScenarioSet scen;
    try {
        scen = xc::read_scenario(scenario_path, scenario_path + ".json");
    } catch (const std::exception& e) {
        std::cerr << "scenario read error: " << e.what() << "\n";
        return kExitParse;
    }

    std::vector<std::string> tests;
    {
        std::stringstream ss(tests_csv);
        std::string item;
        while (std::getline(ss, item, ',')) tests.push_back(item);
    }
    std::string mx_label = scen.markets.empty() ? "" : scen.markets.front();
    std::string my_label = scen.markets.size() > 1 ? scen.markets[1] : mx_label;
    if (!pair.empty()) {
        const auto comma = pair.find(',');
        xc::require(comma != std::string::npos, "--pair wants x,y");
        mx_label = pair.substr(0, comma);
        my_label = pair.substr(comma + 1);
    }

    json report;
    report["scenario"] = scenario_path;
    bool all_pass = true;
    auto& entries = report["tests"] = json::array();

    try {
        for (const auto& test : tests) {
            if (test == "martingale") {
                for (const auto& market : scen.markets) {
                    for (const auto& col : scen.columns) {
                        if (col.market != market || col.series != "P") continue;
                        xc::ProcessSpec proc;
                        proc.kind = xc::ProcessSpec::Kind::DeflatedBond;
                        proc.market_x = market;
                        proc.maturity = col.maturity;
                        const auto rep = xc::martingale_test(scen, proc);
                        entries.push_back({{"test", "martingale"},
                                           {"process", rep.name},
                                           {"max_z", rep.max_abs_z},
                                           {"pass", rep.pass}});
                        all_pass = all_pass && rep.pass;
                    }
                }
                if (interval.size() == 2 && my_label != mx_label) {
                    for (const auto kind : {xc::ProcessSpec::Kind::DeflatedIborXy,
                                            xc::ProcessSpec::Kind::DeflatedFcfXy}) {
                        xc::ProcessSpec proc;
                        proc.kind = kind;
                        proc.market_x = mx_label;
                        proc.market_y = my_label;
                        proc.t_prev = interval[0];
                        proc.t_next = interval[1];
                        const auto rep = xc::martingale_test(scen, proc);
                        entries.push_back({{"test", "martingale"},
                                           {"process", rep.name},
                                           {"max_z", rep.max_abs_z},
                                           {"pass", rep.pass}});
                        all_pass = all_pass && rep.pass;
                    }
                }
            } else if (test == "noarb") {
                if (my_label == mx_label) continue;
                const auto mm = xc::noarb_strategy(scen, mx_label, my_label,
                                                   xc::StrategyVariant::MoneyMarket);
                entries.push_back({{"test", "noarb_money_market"},
                                   {"max_abs_adjusted", mm.max_abs_adjusted},
                                   {"pass", mm.adjusted_zero}});
                all_pass = all_pass && mm.adjusted_zero;
                for (const auto& col : scen.columns) {
                    if (col.market != mx_label || col.series != "P") continue;
                    if (!scen.has_column(my_label, "P", col.maturity)) continue;
                    const auto fh = xc::noarb_strategy(scen, mx_label, my_label,
                                                       xc::StrategyVariant::FixedHorizon,
                                                       col.maturity);
                    entries.push_back({{"test", "noarb_fixed_horizon"},
                                       {"maturity", col.maturity},
                                       {"max_abs_adjusted", fh.max_abs_adjusted},
                                       {"pass", fh.adjusted_zero}});
                    all_pass = all_pass && fh.adjusted_zero;
                    break;
                }
            } else if (test == "measure") {
                xc::require(interval.size() == 2, "measure test wants --interval Tprev,Tnext");
                xc::require(model_paths.size() >= 2, "measure test wants the model files");
                const auto models = load_models(model_paths);
                const auto& mx = models.system.model(models.index_of(mx_label));
                const auto& my = models.system.model(models.index_of(my_label));
                const auto rep = xc::measure_consistency(
                    scen, mx, my, xc::FraSpec{interval[0], interval[1], 0.0, std::nullopt});
                json e = {{"test", "measure"}, {"available", rep.available}};
                if (rep.available) {
                    e["estimates"] = {rep.est_kernel, rep.est_risk_neutral, rep.est_forward};
                    e["max_pair_z"] = rep.max_pair_z;
                    e["pass"] = rep.pass;
                    all_pass = all_pass && rep.pass;
                } else {
                    e["skipped"] = rep.skip_reason;
                }
                entries.push_back(e);
            } else if (test == "domination") {
                xc::require(interval.size() == 2, "domination test wants --interval Tprev,Tnext");
                const auto rep = xc::fcf_domination_check(scen, mx_label, my_label, interval[0],
                                                          interval[1], false);
                entries.push_back({{"test", "domination"},
                                   {"states", rep.states_checked},
                                   {"hypothesis_failures", rep.hypothesis_failures},
                                   {"violations", rep.violations},
                                   {"pass", rep.pass}});
                all_pass = all_pass && rep.pass;
            } else {
                std::cerr << "unknown test: " << test << "\n";
                return kExitParse;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "diagnose error: " << e.what() << "\n";
        return kExitParse;
    }

    report["pass"] = all_pass;
    std::cout << report.dump(2) << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.dump(2) << "\n";
    }
    return all_pass ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Across-curve pricing toolkit: bootstrap, price, simulate, diagnose"};
    app.require_subcommand(1);

    auto* boot = app.add_subcommand("bootstrap", "Build an initial discount system from quotes");
    std::string quotes_path, mode = "emerging", discount_path, out_path = "curve.json";
    boot->add_option("--quotes", quotes_path, "quote CSV")->required();
    boot->add_option("--mode", mode, "emerging|developed|practitioner");
    boot->add_option("--discount", discount_path, "discount curve JSON (developed mode)");
    boot->add_option("--out", out_path, "output curve JSON");

    auto* price = app.add_subcommand("price", "Price one instrument at t = 0");
    std::string instrument_path, price_out;
    std::vector<std::string> price_models;
    price->add_option("--instrument", instrument_path, "instrument JSON")->required();
    price->add_option("--model", price_models, "model JSON (repeatable)")->required();
    price->add_option("--out", price_out, "report JSON path");

    auto* sim = app.add_subcommand("simulate", "Generate a scenario file");
    std::vector<std::string> sim_models;
    int paths = 1000;
    double horizon = 1.0, dt = 0.004;
    std::uint64_t seed = 0;
    std::string scen_out = "scen.bin", csv_out;
    std::vector<double> maturities;
    sim->add_option("--model", sim_models, "model JSON (repeatable)")->required();
    sim->add_option("--paths", paths, "number of paths");
    sim->add_option("--horizon", horizon, "simulation horizon (years)");
    sim->add_option("--dt", dt, "time step");
    auto* seed_opt = sim->add_option("--seed", seed, "RNG seed (mandatory)");
    sim->add_option("--out", scen_out, "scenario output path");
    sim->add_option("--maturities", maturities, "bond maturities to record");
    sim->add_option("--csv", csv_out, "also export CSV");

    auto* diag = app.add_subcommand("diagnose", "Run no-arbitrage diagnostics on a scenario");
    std::string scen_in, tests = "martingale", pair, report_path;
    std::vector<std::string> diag_models;
    std::vector<double> interval;
    diag->add_option("--scenario", scen_in, "scenario file")->required();
    diag->add_option("--tests", tests, "comma list: martingale,noarb,measure,domination");
    diag->add_option("--model", diag_models, "model JSON (for measure test)");
    diag->add_option("--pair", pair, "x,y market labels");
    diag->add_option("--interval", interval, "tenor interval Tprev Tnext");
    diag->add_option("--report", report_path, "report JSON path");

    CLI11_PARSE(app, argc, argv);

    if (boot->parsed()) return cmd_bootstrap(quotes_path, mode, discount_path, out_path);
    if (price->parsed()) return cmd_price(instrument_path, price_models, price_out);
    if (sim->parsed()) {
        return cmd_simulate(sim_models, paths, horizon, dt, seed, seed_opt->count() > 0,
                            scen_out, maturities, csv_out);
    }
    if (diag->parsed()) {
        return cmd_diagnose(scen_in, tests, diag_models, pair, interval, report_path);
    }
    return kExitParse;
}
