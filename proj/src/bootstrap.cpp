#include "crosscurve/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crosscurve/conversion.hpp"
#include "crosscurve/instruments.hpp"
#include "crosscurve/rates.hpp"

namespace xc {

namespace {

struct GridPoint {
    double t;
    double df;
};

double interp_df(const std::vector<GridPoint>& pillars, double t) {
    Curve c("work", [&] {
        std::vector<CurvePillar> p;
        p.reserve(pillars.size());
        for (const auto& g : pillars) p.push_back({g.t, g.df});
        return p;
    }());
    return c.df(t);
}

// Time grid of payment dates: deposit and FRA maturities, then regular
// delta-steps out to each swap maturity. Swaps pay on the same accrual grid
// as the FRA strip.
std::vector<double> payment_grid(const QuoteSet& q) {
    std::vector<double> grid;
    double step = 0.0;
    if (q.deposit) {
        grid.push_back(q.deposit->maturity);
        step = q.deposit->maturity;
    }
    for (const auto& f : q.fras) {
        grid.push_back(f.end);
        step = f.end - f.start;
    }
    require(step > 0.0, "swap-only quote sets need a deposit or FRA to set the accrual grid");
    for (const auto& s : q.swaps) {
        double last = grid.empty() ? 0.0 : grid.back();
        require(s.maturity > last, "swap maturity inside the known grid");
        const double k = (s.maturity - last) / step;
        require(std::abs(k - std::round(k)) < 1e-9,
                "swap maturity does not land on the accrual grid");
        for (int i = 1; i <= static_cast<int>(std::round(k)); ++i) {
            grid.push_back(last + i * step);
        }
        grid.back() = s.maturity;
    }
    return grid;
}

double swap_fair_single_curve(const std::vector<GridPoint>& pillars,
                              const std::vector<double>& grid, double maturity) {
    double annuity = 0.0;
    double prev = 0.0;
    for (double t : grid) {
        if (t > maturity + 1e-12) break;
        annuity += (t - prev) * interp_df(pillars, t);
        prev = t;
    }
    return (1.0 - interp_df(pillars, maturity)) / annuity;
}

double bisect_swap_df(const std::vector<GridPoint>& known, const std::vector<double>& grid,
                      double maturity, double quote) {
    const double df_last = known.empty() ? 1.0 : known.back().df;
    double lo = 1e-12;
    double hi = 4.0 * df_last;
    auto objective = [&](double df_m) {
        auto trial = known;
        trial.push_back({maturity, df_m});
        return swap_fair_single_curve(trial, grid, maturity) - quote;
    };
    double f_lo = objective(lo);
    double f_hi = objective(hi);
    ensure(f_lo > 0.0 && f_hi < 0.0, "swap quote infeasible: no bracketing discount factor");
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (objective(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

BootstrapResult single_curve_bootstrap(const QuoteSet& quotes, const std::string& label) {
    quotes.validate();
    const auto grid = payment_grid(quotes);
    std::vector<GridPoint> pillars;

    if (quotes.deposit) {
        const double df = 1.0 / (1.0 + quotes.deposit->rate * quotes.deposit->maturity);
        ensure(df > 0.0, "deposit quote implies non-positive discount factor");
        pillars.push_back({quotes.deposit->maturity, df});
    }
    for (const auto& f : quotes.fras) {
        const double prev = pillars.empty() ? 1.0 : pillars.back().df;
        const double df = prev / (1.0 + f.rate * (f.end - f.start));
        ensure(df > 0.0, "FRA quote implies non-positive discount factor");
        pillars.push_back({f.end, df});
    }
    for (const auto& s : quotes.swaps) {
        const double df = bisect_swap_df(pillars, grid, s.maturity, s.rate);
        ensure(df > 0.0, "swap quote implies non-positive discount factor");
        pillars.push_back({s.maturity, df});
    }

    BootstrapResult out{Curve(label, [&] {
                            std::vector<CurvePillar> p;
                            for (const auto& g : pillars) p.push_back({g.t, g.df});
                            return p;
                        }()),
                        {},
                        {}};

    // Reprice through the instrument fair-rate formulas.
    const DeterministicKernelModel model(out.curve);
    const State st;
    if (quotes.deposit) {
        out.quote_ids.push_back("DEPO " + std::to_string(quotes.deposit->maturity));
        out.residuals.push_back(spot_ibor(out.curve.df(quotes.deposit->maturity),
                                          quotes.deposit->maturity) -
                                quotes.deposit->rate);
    }
    for (const auto& f : quotes.fras) {
        out.quote_ids.push_back("FRA " + std::to_string(f.start) + "-" + std::to_string(f.end));
        const auto q = fra_em_value(model, st, 0.0, FraSpec{f.start, f.end, f.rate, std::nullopt});
        out.residuals.push_back(q.fair_rate - f.rate);
    }
    for (const auto& s : quotes.swaps) {
        out.quote_ids.push_back("IRS " + std::to_string(s.maturity));
        std::vector<double> times{0.0};
        for (double t : grid) {
            if (t <= s.maturity + 1e-12) times.push_back(t);
        }
        const auto q = irs_em_value(model, st, 0.0, SwapSpec{Schedule(times), s.rate});
        out.residuals.push_back(q.fair_rate - s.rate);
    }
    return out;
}

}  // namespace

double BootstrapResult::max_abs_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
}

BootstrapResult bootstrap_emerging(const QuoteSet& quotes) {
    require(!quotes.discount_curve_ref.has_value(),
            "emerging-market quotes must not reference a discount curve");
    return single_curve_bootstrap(quotes, quotes.market);
}

BootstrapResult bootstrap_practitioner(const QuoteSet& quotes) {
    return single_curve_bootstrap(quotes, quotes.market + "_bar");
}

BootstrapResult bootstrap_developed(const QuoteSet& quotes, const Curve& discount) {
    quotes.validate();
    const auto grid = payment_grid(quotes);
    require(discount.pillars().back().t >= grid.back() - 1e-9,
            "discount curve does not cover the quote maturities");

    std::vector<GridPoint> pillars;
    if (quotes.deposit) {
        const double t1 = quotes.deposit->maturity;
        const double df = 1.0 - t1 * discount.df(t1) * quotes.deposit->rate;
        ensure(df > 0.0, "deposit quote implies non-positive forecast discount factor");
        pillars.push_back({t1, df});
    }
    for (const auto& f : quotes.fras) {
        const double prev = pillars.empty() ? 1.0 : pillars.back().df;
        const double df = prev - (f.end - f.start) * discount.df(f.end) * f.rate;
        ensure(df > 0.0, "FRA quote implies non-positive forecast discount factor");
        pillars.push_back({f.end, df});
    }
    for (const auto& s : quotes.swaps) {
        double annuity = 0.0;
        double prev_t = 0.0;
        for (double t : grid) {
            if (t > s.maturity + 1e-12) break;
            annuity += (t - prev_t) * discount.df(t);
            prev_t = t;
        }
        const double df = 1.0 - s.rate * annuity;
        ensure(df > 0.0, "swap quote implies non-positive forecast discount factor");
        pillars.push_back({s.maturity, df});
    }

    BootstrapResult out{Curve(quotes.market, [&] {
                            std::vector<CurvePillar> p;
                            for (const auto& g : pillars) p.push_back({g.t, g.df});
                            return p;
                        }()),
                        {},
                        {}};

    const DeterministicKernelModel mx(discount);
    const DeterministicKernelModel my(out.curve);
    const State st;
    if (quotes.deposit) {
        const double t1 = quotes.deposit->maturity;
        out.quote_ids.push_back("DEPO " + std::to_string(t1));
        // Spot L^{xy}_0(0,T_1): the y spot rate converted at Q^{xy}_{0T_1}.
        const double lxy = q_forward(mx, st, my, st, 0.0, t1) *
                           spot_ibor(out.curve.df(t1), t1);
        out.residuals.push_back(lxy - quotes.deposit->rate);
    }
    for (const auto& f : quotes.fras) {
        out.quote_ids.push_back("FRA " + std::to_string(f.start) + "-" + std::to_string(f.end));
        const auto q = fra_dm_value(mx, st, my, st, 0.0, FraSpec{f.start, f.end, f.rate, std::nullopt});
        out.residuals.push_back(q.fair_rate - f.rate);
    }
    for (const auto& s : quotes.swaps) {
        out.quote_ids.push_back("IRS " + std::to_string(s.maturity));
        std::vector<double> times{0.0};
        for (double t : grid) {
            if (t <= s.maturity + 1e-12) times.push_back(t);
        }
        const auto q = irs_dm_value(mx, st, my, st, 0.0, SwapSpec{Schedule(times), s.rate, true});
        out.residuals.push_back(q.fair_rate - s.rate);
    }
    return out;
}

}  // namespace xc
