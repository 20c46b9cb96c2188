#include "crosscurve/mc/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace xc {

namespace {

constexpr double kSigmaBand = 3.5;
constexpr double kExactTol = 1e-12;

// exp(-int_0^t r) for a model exposing a deterministic short rate; adaptive
// Simpson driven to ~1e-13.
double deterministic_discount(const KernelModel& m, double t) {
    const auto probe = m.deterministic_short_rate(0.0);
    require(probe.has_value(), "model has no deterministic short rate");
    if (t == 0.0) return 1.0;
    auto r = [&](double s) { return *m.deterministic_short_rate(s); };
    int n = 16;
    auto simpson = [&](int panels) {
        const double h = t / panels;
        double acc = r(0.0) + r(t);
        for (int k = 1; k < panels; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * r(k * h);
        return acc * h / 3.0;
    };
    double prev = simpson(n);
    for (int round = 0; round < 16; ++round) {
        n *= 2;
        const double cur = simpson(n);
        if (std::abs(cur - prev) < 1e-13) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    return std::exp(-prev);
}

std::size_t slice_index(const ScenarioSet& scen, double t) {
    for (std::size_t k = 0; k < scen.times.size(); ++k) {
        if (std::abs(scen.times[k] - t) < 1e-9) return k;
    }
    throw std::invalid_argument("time " + std::to_string(t) + " is not on the scenario grid");
}

struct Welford {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double se() const { return n > 1 ? std::sqrt(m2 / ((n - 1.0) * n)) : 0.0; }
};

}  // namespace

std::string ProcessSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::DeflatedBond:
            os << "h*P[" << market_x << ", T=" << maturity << "]";
            break;
        case Kind::DeflatedIborXy:
            os << "h*P*L^xy[" << market_x << "/" << market_y << ", " << t_prev << "-" << t_next
               << "]";
            break;
        case Kind::DeflatedFcfXy:
            os << "h*P*v^y[" << market_x << "/" << market_y << ", " << t_prev << "-" << t_next
               << "]";
            break;
        case Kind::DeflatedFraXy:
            os << "h*V^xy[" << market_x << "/" << market_y << ", " << t_prev << "-" << t_next
               << ", K=" << strike << "]";
            break;
    }
    return os.str();
}

MartingaleReport martingale_test(const ScenarioSet& scenario, const ProcessSpec& process) {
    require(scenario.n_paths >= 1000, "martingale test needs at least 1000 paths");
    const double horizon = process.kind == ProcessSpec::Kind::DeflatedBond
                               ? process.maturity
                               : process.t_prev;

    const ScenarioColumn* hx = nullptr;
    const ScenarioColumn* px_pay = nullptr;
    const ScenarioColumn* hy = nullptr;
    const ScenarioColumn* py_prev = nullptr;
    const ScenarioColumn* py_next = nullptr;
    if (process.kind == ProcessSpec::Kind::DeflatedBond) {
        hx = &scenario.column(process.market_x, "h");
        px_pay = &scenario.column(process.market_x, "P", process.maturity);
    } else {
        hx = &scenario.column(process.market_x, "h");
        px_pay = &scenario.column(process.market_x, "P", process.t_next);
        hy = &scenario.column(process.market_y, "h");
        py_prev = &scenario.column(process.market_y, "P", process.t_prev);
        py_next = &scenario.column(process.market_y, "P", process.t_next);
    }
    const double delta = process.t_next - process.t_prev;

    auto value_at = [&](int p, std::size_t k) {
        switch (process.kind) {
            case ProcessSpec::Kind::DeflatedBond:
                return scenario.value(*hx, p, k) * scenario.value(*px_pay, p, k);
            case ProcessSpec::Kind::DeflatedIborXy: {
                const double hxv = scenario.value(*hx, p, k);
                const double pxv = scenario.value(*px_pay, p, k);
                const double q = scenario.value(*hy, p, k) * scenario.value(*py_next, p, k) /
                                 (hxv * pxv);
                const double ly =
                    (scenario.value(*py_prev, p, k) / scenario.value(*py_next, p, k) - 1.0) /
                    delta;
                return hxv * pxv * q * ly;
            }
            case ProcessSpec::Kind::DeflatedFcfXy: {
                const double vy =
                    scenario.value(*py_prev, p, k) / scenario.value(*py_next, p, k);
                return scenario.value(*hx, p, k) * scenario.value(*px_pay, p, k) * vy;
            }
            case ProcessSpec::Kind::DeflatedFraXy: {
                const double hxv = scenario.value(*hx, p, k);
                const double pxv = scenario.value(*px_pay, p, k);
                const double q = scenario.value(*hy, p, k) * scenario.value(*py_next, p, k) /
                                 (hxv * pxv);
                const double ly =
                    (scenario.value(*py_prev, p, k) / scenario.value(*py_next, p, k) - 1.0) /
                    delta;
                return hxv * delta * pxv * (q * ly - process.strike);
            }
        }
        return 0.0;
    };

    MartingaleReport rep;
    rep.name = process.name();
    rep.reference = value_at(0, 0);  // slice 0 is the shared initial state
    rep.max_abs_z = 0.0;
    rep.pass = true;
    for (std::size_t k = 0; k < scenario.times.size(); ++k) {
        if (scenario.times[k] > horizon + 1e-9) break;
        Welford acc;
        for (int p = 0; p < scenario.n_paths; ++p) acc.add(value_at(p, k));
        const double se = acc.se();
        rep.slices.push_back({scenario.times[k], acc.mean, se});
        const double dev = std::abs(acc.mean - rep.reference);
        if (se > 0.0) {
            rep.max_abs_z = std::max(rep.max_abs_z, dev / se);
            if (dev > kSigmaBand * se) rep.pass = false;
        } else if (dev > kExactTol * std::max(1.0, std::abs(rep.reference))) {
            rep.pass = false;
            rep.max_abs_z = std::numeric_limits<double>::infinity();
        }
    }
    return rep;
}

NoArbReport noarb_strategy(const ScenarioSet& scenario, const std::string& market_x,
                           const std::string& market_y, StrategyVariant variant,
                           double maturity) {
    const auto& hx = scenario.column(market_x, "h");
    const auto& hy = scenario.column(market_y, "h");
    const ScenarioColumn* px = nullptr;
    const ScenarioColumn* py = nullptr;
    if (variant == StrategyVariant::FixedHorizon) {
        px = &scenario.column(market_x, "P", maturity);
        py = &scenario.column(market_y, "P", maturity);
    }

    NoArbReport rep;
    rep.variant = variant;
    rep.maturity = maturity;
    rep.max_abs_adjusted = 0.0;
    rep.sign_violations = 0;
    const double t_end = variant == StrategyVariant::FixedHorizon
                             ? maturity
                             : scenario.times.back();
    for (std::size_t k = 0; k < scenario.times.size(); ++k) {
        if (scenario.times[k] > t_end + 1e-9) break;
        Welford acc;
        for (int p = 0; p < scenario.n_paths; ++p) {
            double leg_y, leg_x, ratio;
            if (variant == StrategyVariant::MoneyMarket) {
                leg_y = 1.0 / scenario.value(hy, p, k);
                leg_x = 1.0 / scenario.value(hx, p, k);
                ratio = scenario.value(hy, p, k) / scenario.value(hx, p, k);
            } else {
                leg_y = 1.0 / (scenario.value(hy, p, k) * scenario.value(*py, p, k));
                leg_x = 1.0 / (scenario.value(hx, p, k) * scenario.value(*px, p, k));
                ratio = (scenario.value(hy, p, k) * scenario.value(*py, p, k)) /
                        (scenario.value(hx, p, k) * scenario.value(*px, p, k));
            }
            const double unadjusted = leg_y - leg_x;
            const double adjusted = ratio * leg_y - leg_x;
            acc.add(unadjusted);
            rep.max_abs_adjusted =
                std::max(rep.max_abs_adjusted, std::abs(adjusted) / std::max(1.0, leg_x));
            // Sign of the unadjusted value follows the deflator ordering.
            const double order = variant == StrategyVariant::MoneyMarket
                                     ? scenario.value(hx, p, k) - scenario.value(hy, p, k)
                                     : scenario.value(hx, p, k) * scenario.value(*px, p, k) -
                                           scenario.value(hy, p, k) * scenario.value(*py, p, k);
            if (unadjusted * order < 0.0) ++rep.sign_violations;
        }
        rep.mean_unadjusted.push_back(acc.mean);
    }
    rep.adjusted_zero = rep.max_abs_adjusted <= kExactTol;
    return rep;
}

MeasureReport measure_consistency(const ScenarioSet& scenario, const KernelModel& mx,
                                  const KernelModel& my, const FraSpec& fra) {
    MeasureReport rep;
    if (!mx.deterministic_short_rate(0.0).has_value() ||
        !my.deterministic_short_rate(0.0).has_value()) {
        rep.available = false;
        rep.skip_reason = "no deterministic short rate; discount/density factorisation unavailable";
        return rep;
    }
    rep.available = true;

    const std::size_t k_fix = slice_index(scenario, fra.reset);
    const std::size_t k_pay = slice_index(scenario, fra.pay);
    const auto& hx = scenario.column(mx.label(), "h");
    const auto& hy = scenario.column(my.label(), "h");
    const auto& px_pay = scenario.column(mx.label(), "P", fra.pay);
    const auto& py_prev = scenario.column(my.label(), "P", fra.reset);
    const auto& py_next = scenario.column(my.label(), "P", fra.pay);

    const double dx_pay = deterministic_discount(mx, fra.pay);
    const double dy_pay = deterministic_discount(my, fra.pay);
    const double delta = fra.accrual();

    Welford wa, wb, wc, dab, dac;
    for (int p = 0; p < scenario.n_paths; ++p) {
        const double payoff =
            delta * ((scenario.value(py_prev, p, k_fix) / scenario.value(py_next, p, k_fix) -
                      1.0) /
                         delta -
                     fra.strike_y);
        const double q_fix = scenario.value(hy, p, k_fix) * scenario.value(py_next, p, k_fix) /
                             (scenario.value(hx, p, k_fix) * scenario.value(px_pay, p, k_fix));
        // (a) real-world kernel, in-advance form at the fixing date.
        const double a = scenario.value(hx, p, k_fix) * scenario.value(px_pay, p, k_fix) *
                         q_fix * payoff;
        // (b) x risk-neutral: deterministic discount times density m^x at pay.
        const double mx_pay = scenario.value(hx, p, k_pay) / dx_pay;
        const double b = mx_pay * dx_pay * q_fix * payoff;
        // (c) y-market route: value the y-payoff under the y risk-neutral
        // measure; spot conversion at time 0 is 1.
        const double my_pay = scenario.value(hy, p, k_pay) / dy_pay;
        const double c = my_pay * dy_pay * payoff;
        wa.add(a);
        wb.add(b);
        wc.add(c);
        dab.add(a - b);
        dac.add(a - c);
    }
    rep.est_kernel = wa.mean;
    rep.est_risk_neutral = wb.mean;
    rep.est_forward = wc.mean;

    auto pair_z = [&](const Welford& d) {
        const double se = d.se();
        if (se > 0.0) return std::abs(d.mean) / se;
        return std::abs(d.mean) <= kExactTol ? 0.0 : std::numeric_limits<double>::infinity();
    };
    rep.max_pair_z = std::max(pair_z(dab), pair_z(dac));
    rep.pass = rep.max_pair_z <= kSigmaBand;
    return rep;
}

DominationReport fcf_domination_check(const ScenarioSet& scenario, const std::string& market_x,
                                      const std::string& market_y, double t_prev, double t_next,
                                      bool ns_variant) {
    const auto& hx = scenario.column(market_x, "h");
    const auto& hy = scenario.column(market_y, "h");
    const auto& px_prev = scenario.column(market_x, "P", t_prev);
    const auto& px_next = scenario.column(market_x, "P", t_next);
    const auto& py_prev = scenario.column(market_y, "P", t_prev);
    const auto& py_next = scenario.column(market_y, "P", t_next);
    const double delta = t_next - t_prev;

    DominationReport rep;
    for (std::size_t k = 0; k < scenario.times.size(); ++k) {
        if (scenario.times[k] > t_prev + 1e-9) break;
        for (int p = 0; p < scenario.n_paths; ++p) {
            const double hxv = scenario.value(hx, p, k);
            const double hyv = scenario.value(hy, p, k);
            const double vx = scenario.value(px_prev, p, k) / scenario.value(px_next, p, k);
            const double vy = scenario.value(py_prev, p, k) / scenario.value(py_next, p, k);
            ++rep.states_checked;
            // Premises: non-negative rates in both markets, pathwise kernel
            // ordering (h^y <= h^x plain, h^x <= h^y for the NS variant).
            const bool ordered = ns_variant ? hxv <= hyv : hyv <= hxv;
            if (!(ordered && vx >= 1.0 && vy >= 1.0)) {
                ++rep.hypothesis_failures;
                continue;
            }
            if (ns_variant) {
                const double q_prev = hyv * scenario.value(py_prev, p, k) /
                                      (hxv * scenario.value(px_prev, p, k));
                const double rate_bar = (q_prev * vx - 1.0) / delta;  // v^xy = v^x Q_{tT_prev}
                const double lx = (vx - 1.0) / delta;
                if (rate_bar < lx) ++rep.violations;
            } else {
                const double q_next = hyv * scenario.value(py_next, p, k) /
                                      (hxv * scenario.value(px_next, p, k));
                const double v_bar = 1.0 + q_next * (vy - 1.0);
                if (v_bar < vx) ++rep.violations;
            }
        }
    }
    rep.pass = rep.violations == 0 && rep.hypothesis_failures == 0;
    return rep;
}

}  // namespace xc
