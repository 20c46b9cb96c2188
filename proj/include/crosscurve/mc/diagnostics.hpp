#pragma once

#include <string>
#include <vector>

#include "crosscurve/instruments.hpp"
#include "crosscurve/mc/scenario.hpp"

namespace xc {

// Deflated processes whose conditional mean must stay flat under no-arbitrage.
struct ProcessSpec {
    enum class Kind {
        DeflatedBond,    // h^z_t P^z_{tT}
        DeflatedIborXy,  // h^x_t P^x_{tT_i} L^{xy}_t(T_prev, T_next)
        DeflatedFcfXy,   // h^x_t P^x_{tT_i} v^y_t(T_prev, T_next)
        DeflatedFraXy,   // h^x_t V^{xy}_t for a developed-market FRA
    };
    Kind kind = Kind::DeflatedBond;
    std::string market_x;
    std::string market_y;  // unused for DeflatedBond
    double maturity = 0.0; // T for DeflatedBond
    double t_prev = 0.0;
    double t_next = 0.0;
    double strike = 0.0;   // DeflatedFraXy only

    std::string name() const;
};

struct SliceStat {
    double t;
    double mean;
    double se;
};

struct MartingaleReport {
    std::string name;
    double reference;  // exact value at t = 0
    std::vector<SliceStat> slices;
    double max_abs_z;  // max |mean - reference| / se over slices with se > 0
    bool pass;         // every slice within 3.5 standard errors (exact when se = 0)
};

// Flatness of the slice means against the t=0 value at 3.5 standard errors.
// Fewer than 1000 paths are rejected; the standard error would be noise.
MartingaleReport martingale_test(const ScenarioSet& scenario, const ProcessSpec& process);

enum class StrategyVariant { MoneyMarket, FixedHorizon };

struct NoArbReport {
    StrategyVariant variant;
    double maturity;           // FixedHorizon only
    double max_abs_adjusted;   // adjusted strategy must be 0 pathwise
    int sign_violations;       // unadjusted sign vs pathwise kernel ordering
    std::vector<double> mean_unadjusted;  // per slice
    bool adjusted_zero;
};

// Appendix-style self-financing strategies: sell the x-market numeraire (or
// T-bond), buy the y-market one. The conversion-adjusted version nets to zero
// pathwise; the unadjusted version has the sign of h^x - h^y.
NoArbReport noarb_strategy(const ScenarioSet& scenario, const std::string& market_x,
                           const std::string& market_y, StrategyVariant variant,
                           double maturity = 0.0);

struct MeasureReport {
    bool available = false;  // factorisation h = D m needs deterministic short rates
    std::string skip_reason;
    double est_kernel = 0.0;       // real-world kernel route, in-advance form
    double est_risk_neutral = 0.0; // x risk-neutral discounting, density-weighted
    double est_forward = 0.0;      // y-market route
    double max_pair_z = 0.0;
    bool pass = false;
};

// Prices one developed-market FRA off the scenario through three measure
// routes; they agree exactly for deterministic models and within joint
// 3.5 SE otherwise.
MeasureReport measure_consistency(const ScenarioSet& scenario, const KernelModel& mx,
                                  const KernelModel& my, const FraSpec& fra);

// Sampled check of the forward-capitalisation-factor domination and the
// NS-variant inequality over every (path, slice) state.
struct DominationReport {
    long states_checked = 0;
    long hypothesis_failures = 0;  // states where the premises do not hold
    long violations = 0;           // states satisfying the premises but not the bound
    bool pass = false;
};

DominationReport fcf_domination_check(const ScenarioSet& scenario, const std::string& market_x,
                                      const std::string& market_y, double t_prev, double t_next,
                                      bool ns_variant);

}  // namespace xc
