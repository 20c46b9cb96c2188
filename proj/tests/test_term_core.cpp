#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crosscurve/curve.hpp"
#include "crosscurve/quotes.hpp"
#include "crosscurve/rates.hpp"
#include "crosscurve/schedule.hpp"

using namespace xc;

TEST_CASE("curve reproduces pillars and normalises at zero") {
    Curve c("y", {{0.25, 0.985222}, {1.0, 0.95}});
    CHECK(c.df(1.0) == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(c.df(0.25) == doctest::Approx(0.985222).epsilon(1e-15));
    CHECK(c.df(0.0) == 1.0);
}

TEST_CASE("log-linear interpolation between pillars") {
    Curve c("y", {{1.0, 0.9}, {2.0, 0.81}});
    CHECK(c.df(1.5) == doctest::Approx(std::exp(0.5 * (std::log(0.9) + std::log(0.81))))
                           .epsilon(1e-14));
    // before the first pillar the (0,1) anchor applies
    CHECK(c.df(0.5) == doctest::Approx(std::sqrt(0.9)).epsilon(1e-14));
}

TEST_CASE("flat zero-rate extrapolation beyond the last pillar") {
    Curve c("y", {{2.0, std::exp(-0.05 * 2.0)}});
    CHECK(c.df(10.0) == doctest::Approx(std::exp(-0.05 * 10.0)).epsilon(1e-13));
    CHECK(c.log_df_slope(5.0) == doctest::Approx(-0.05).epsilon(1e-13));
}

TEST_CASE("curve rejects bad input") {
    CHECK_THROWS_AS(Curve("y", {{1.0, -0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(Curve("y", {{1.0, 0.9}, {1.0, 0.8}}), std::invalid_argument);
    CHECK_THROWS_AS(Curve("y", {{0.0, 0.99}}), std::invalid_argument);
    Curve c("y", {{1.0, 0.9}});
    CHECK_THROWS_AS(c.df(-0.1), std::invalid_argument);
}

TEST_CASE("curve JSON round trip") {
    Curve c("ibor3m", {{0.25, 0.985222}, {0.5, 0.969468}});
    const Curve back = Curve::from_json(c.to_json());
    CHECK(back.label() == "ibor3m");
    REQUIRE(back.pillars().size() == 2);
    CHECK(back.df(0.5) == doctest::Approx(0.969468).epsilon(1e-15));
}

TEST_CASE("schedule accruals recompute from reset times") {
    const Schedule s = Schedule::regular(0.0, 2.0, 0.25);
    CHECK(s.periods() == 8);
    for (std::size_t i = 0; i < s.periods(); ++i) {
        CHECK(s.accrual(i) == doctest::Approx(0.25).epsilon(1e-12));
    }
    CHECK_THROWS_AS(Schedule({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Schedule({1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("spot ibor values") {
    CHECK(spot_ibor(1.0, 0.25) == 0.0);
    CHECK(spot_ibor(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spot_ibor(0.985222, 0.25) == doctest::Approx(0.0600001).epsilon(1e-6));
    CHECK_THROWS_AS(spot_ibor(-0.5, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(spot_ibor(0.9, 0.0), std::invalid_argument);
}

TEST_CASE("fcf values and bounds") {
    CHECK(fcf(0.0, 0.5) == 1.0);
    CHECK(fcf(0.065, 0.25) == doctest::Approx(1.01625).epsilon(1e-15));
    CHECK_THROWS_AS(fcf(-4.0, 0.25), std::invalid_argument);
}

TEST_CASE("fcf and spot_ibor are mutually inverse") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u_df(0.3, 1.2), u_delta(0.05, 1.5);
    for (int i = 0; i < 200; ++i) {
        const double p = u_df(gen);
        const double delta = u_delta(gen);
        CHECK(fcf(spot_ibor(p, delta), delta) * p == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("forward ibor values") {
    Curve c("y", {{0.5, 0.99}, {1.0, 0.97}});
    CHECK(forward_ibor_single_curve(c, 0.5, 1.0) ==
          doctest::Approx((0.99 / 0.97 - 1.0) / 0.5).epsilon(1e-15));
    Curve flat = Curve::flat("f", 0.05, 10.0);
    CHECK(forward_ibor_single_curve(flat, 1.0, 1.5) ==
          doctest::Approx(std::expm1(0.05 * 0.5) / 0.5).epsilon(1e-12));
    Curve same("s", {{1.0, 0.95}, {2.0, 0.95}});
    CHECK(forward_ibor_single_curve(same, 1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(forward_ibor_single_curve(c, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("forward FCFs telescope to the discount ratio") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u_rate(-0.01, 0.08);
    std::vector<CurvePillar> pillars;
    double ldf = 0.0;
    for (int i = 1; i <= 12; ++i) {
        ldf -= u_rate(gen) * 0.25;
        pillars.push_back({0.25 * i, std::exp(ldf)});
    }
    Curve c("y", pillars);
    double prod = 1.0;
    for (int i = 1; i < 12; ++i) {
        const double l = forward_ibor_single_curve(c, 0.25 * i, 0.25 * (i + 1));
        prod *= fcf(l, 0.25);
    }
    CHECK(prod == doctest::Approx(c.df(0.25) / c.df(3.0)).epsilon(1e-12));
}

TEST_CASE("quote CSV parsing and validation") {
    const std::string csv =
        "type,market,start,end,quote\n"
        "DEPO,y3m,0,0.25,0.06\n"
        "FRA,y3m,0.25,0.5,0.065\n"
        "FRA,y3m,0.5,0.75,0.066\n"
        "IRS,y3m,0,2,0.064\n";
    const QuoteSet q = QuoteSet::from_csv(csv);
    CHECK(q.market == "y3m");
    REQUIRE(q.deposit.has_value());
    CHECK(q.deposit->rate == doctest::Approx(0.06));
    CHECK(q.fras.size() == 2);
    CHECK(q.swaps.size() == 1);
    const QuoteSet round = QuoteSet::from_csv(q.to_csv());
    CHECK(round.fras[1].rate == doctest::Approx(0.066));

    CHECK_THROWS_AS(QuoteSet::from_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(QuoteSet::from_csv("type,market,start,end,quote\n"), std::invalid_argument);
    CHECK_THROWS_AS(QuoteSet::from_csv("a,b,c\n1,2,3\n"), std::invalid_argument);
    // non-contiguous FRA strip
    CHECK_THROWS_AS(QuoteSet::from_csv("type,market,start,end,quote\n"
                                       "DEPO,y,0,0.25,0.06\n"
                                       "FRA,y,0.5,0.75,0.065\n"),
                    std::invalid_argument);
    // decreasing maturities
    CHECK_THROWS_AS(QuoteSet::from_csv("type,market,start,end,quote\n"
                                       "IRS,y,0,2,0.05\nIRS,y,0,1,0.05\n"),
                    std::invalid_argument);
}
