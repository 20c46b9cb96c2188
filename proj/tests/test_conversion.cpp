#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crosscurve/conversion.hpp"
#include "crosscurve/instruments.hpp"
#include "crosscurve/rational.hpp"

using namespace xc;

namespace {

std::shared_ptr<DeterministicKernelModel> det_model(const std::string& label, double rate) {
    return std::make_shared<DeterministicKernelModel>(Curve::flat(label, rate, 40.0));
}

std::shared_ptr<RationalMultiplicativeModel> stoch_model(const std::string& label, double rate,
                                                         double b0, double vol) {
    return std::make_shared<RationalMultiplicativeModel>(
        Curve::flat(label, rate, 40.0),
        std::vector<RationalFactor>{{TimeFunction::exp_decay(b0, 0.2), vol}});
}

}  // namespace

TEST_CASE("conversion factor basics") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);
    const State s;

    CHECK(q_spot(*mx, s, *mx, s, 1.7) == 1.0);
    CHECK(q_spot(*mx, s, *my, s, 0.0) == 1.0);
    CHECK(q_spot(*mx, s, *my, s, 1.0) == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
    CHECK(q_spot(*mx, s, *my, s, 1.0) * q_spot(*my, s, *mx, s, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));

    CHECK(q_forward(*mx, s, *mx, s, 0.5, 2.0) == 1.0);
    CHECK(q_forward(*mx, s, *my, s, 0.0, 1.0) ==
          doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
    CHECK_THROWS_AS(q_forward(*mx, s, *my, s, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("conversion chain rule on random states") {
    const auto mx = stoch_model("x", 0.04, 0.10, 0.3);
    const auto my = stoch_model("y", 0.06, 0.15, 0.25);
    const auto mz = stoch_model("z", 0.07, 0.05, 0.35);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n(0.0, 0.6);
    for (int i = 0; i < 500; ++i) {
        const State sx{n(gen)}, sy{n(gen)}, sz{n(gen)};
        const double t = 0.5 + 0.001 * i;
        const double T = t + 2.0;
        const double lhs = q_forward(*mx, sx, *my, sy, t, T) * q_forward(*my, sy, *mz, sz, t, T);
        const double rhs = q_forward(*mx, sx, *mz, sz, t, T);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("quanto bond") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);
    const State s;

    CHECK(quanto_bond(*mx, s, *mx, s, 0.5, 2.0) ==
          doctest::Approx(mx->conditional_bond(s, 0.5, 2.0)).epsilon(1e-14));
    CHECK(quanto_bond(*mx, s, *my, s, 1.0, 1.0) ==
          doctest::Approx(q_spot(*mx, s, *my, s, 1.0)).epsilon(1e-14));
    CHECK(quanto_bond(*mx, s, *my, s, 0.0, 1.0) ==
          doctest::Approx(std::exp(-0.07)).epsilon(1e-12));
}

TEST_CASE("quanto bond dual representation on random stochastic states") {
    const auto mx = stoch_model("x", 0.04, 0.10, 0.3);
    const auto my = stoch_model("y", 0.06, 0.15, 0.25);
    std::mt19937_64 gen(17);
    std::normal_distribution<double> n(0.0, 0.7);
    for (int i = 0; i < 1000; ++i) {
        const State sx{n(gen)}, sy{n(gen)};
        const double t = 0.25, T = 3.0;
        const double via_fwd = mx->conditional_bond(sx, t, T) * q_forward(*mx, sx, *my, sy, t, T);
        const double via_spot = q_spot(*mx, sx, *my, sy, t) * my->conditional_bond(sy, t, T);
        CHECK(via_fwd == doctest::Approx(via_spot).epsilon(1e-12));
        CHECK(quanto_bond(*mx, sx, *my, sy, t, T) > 0.0);
    }
}

TEST_CASE("across-curve closed form") {
    const auto mx = stoch_model("x", 0.04, 0.10, 0.3);
    const auto my = stoch_model("y", 0.06, 0.15, 0.25);
    const State sx{0.2}, sy{-0.3};
    const double s = 0.25;

    SUBCASE("unit payoff fixed at maturity is the quanto bond") {
        DeflatedLinearPayoff unit{{{2.0, 1.0}}};
        CHECK(across_curve_price(*mx, sx, *my, sy, s, 2.0, 2.0, unit) ==
              doctest::Approx(quanto_bond(*mx, sx, *my, sy, s, 2.0)).epsilon(1e-12));
    }
    SUBCASE("x = y with t = T is the standard pricing formula") {
        DeflatedLinearPayoff unit{{{2.0, 1.0}}};
        CHECK(across_curve_price(*mx, sx, *mx, sx, s, 2.0, 2.0, unit) ==
              doctest::Approx(mx->conditional_bond(sx, s, 2.0)).epsilon(1e-12));
    }
    SUBCASE("FRA payoff reproduces the developed-market FRA value") {
        const FraSpec fra{1.0, 1.25, 0.05, std::nullopt};
        const double delta = fra.accrual();
        // delta (L^y - K) paid at T_i: deflated-linear coefficients
        DeflatedLinearPayoff payoff{{{fra.reset, 1.0}, {fra.pay, -(1.0 + delta * fra.strike_y)}}};
        const double via_formula =
            across_curve_price(*mx, sx, *my, sy, s, fra.reset, fra.pay, payoff);
        const double via_pricer = fra_dm_value(*mx, sx, *my, sy, s, fra).value;
        CHECK(via_formula == doctest::Approx(via_pricer).epsilon(1e-12));
    }
    SUBCASE("post-fixing branch discounts the frozen flow on the x curve") {
        const double frozen_q = 0.98, frozen_fix = 0.012;
        CHECK(across_curve_price_fixed(*mx, sx, 1.1, 1.25, frozen_q, frozen_fix) ==
              doctest::Approx(mx->conditional_bond(sx, 1.1, 1.25) * frozen_q * frozen_fix)
                  .epsilon(1e-14));
    }
}

TEST_CASE("dual role of the conversion factor") {
    const auto mx = stoch_model("x", 0.04, 0.10, 0.3);
    const auto my = stoch_model("y", 0.06, 0.15, 0.25);
    std::mt19937_64 gen(23);
    std::normal_distribution<double> n(0.0, 0.7);
    // Acting on the discounting curve or on the cash flow is the same thing:
    // h^x_t P^x_{tT} Q^{xy}_{tT} = h^y_t P^y_{tT} pathwise.
    for (int i = 0; i < 1000; ++i) {
        const State sx{n(gen)}, sy{n(gen)};
        const double t = 1.0, T = 2.5;
        const double lhs = mx->kernel_value(sx, t) * mx->conditional_bond(sx, t, T) *
                           q_forward(*mx, sx, *my, sy, t, T);
        const double rhs = my->kernel_value(sy, t) * my->conditional_bond(sy, t, T);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("across-curve MC vs closed form, shared driver") {
    MarketSystem system;
    const auto mx = stoch_model("x", 0.04, 0.10, 0.3);
    const auto my = stoch_model("y", 0.06, 0.15, 0.25);
    system.add_market(mx, {0});
    system.add_market(my, {0});  // fully shared Brownian driver

    const FraSpec fra{1.0, 1.25, 0.05, std::nullopt};
    const double delta = fra.accrual();
    DeflatedLinearPayoff payoff{{{fra.reset, 1.0}, {fra.pay, -(1.0 + delta * fra.strike_y)}}};
    const State joint = system.initial_state();
    const double closed =
        across_curve_price(*mx, system.state_of(0, joint), *my, system.state_of(1, joint), 0.0,
                           fra.reset, fra.pay, payoff);

    auto fixing = [&](const KernelModel& m, std::span<const double> st, double t) {
        const double p0 = m.conditional_bond(st, t, fra.reset);
        const double p1 = m.conditional_bond(st, t, fra.pay);
        return p0 / p1 - (1.0 + delta * fra.strike_y);
    };
    // fixing * P^y_{tT} = P^y_{t,reset} - (1+dK) P^y_{t,pay}; same payoff
    const double mc = across_curve_price_mc(system, 0, 1, joint, 0.0, fra.reset, fra.pay,
                                            fixing, 20000, 99, 1.0 / 100.0);
    // crude SE bound: the payoff is O(1e-2), paths 2e4
    CHECK(std::abs(mc - closed) < 5e-4);
}

TEST_CASE("conversion factor is monotone under pathwise kernel ordering") {
    // x carries a loading that switches on with the curve spread, so
    // h^y <= h^x on every path; y is the higher-yield deterministic market.
    const auto mx = std::make_shared<RationalMultiplicativeModel>(
        Curve::flat("x", 0.05, 40.0),
        std::vector<RationalFactor>{{TimeFunction::one_minus_exp(0.9, 0.02), 0.05}});
    const auto my = det_model("y", 0.07);
    std::mt19937_64 gen(31);
    std::normal_distribution<double> n(0.0, 1.0);
    const double t = 1.0;
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const State sx{n(gen) * std::sqrt(t)};
        const State sy;
        REQUIRE(my->kernel_value(sy, t) <= mx->kernel_value(sx, t));
        double prev = q_forward(*mx, sx, *my, sy, t, t);
        for (double T = t + 0.25; T <= t + 2.0; T += 0.25) {
            const double cur = q_forward(*mx, sx, *my, sy, t, T);
            CHECK(cur <= prev * (1.0 + 1e-14));
            prev = cur;
            ++checked;
        }
    }
    CHECK(checked > 10000);
}
