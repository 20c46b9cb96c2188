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

const State kEmpty;

}  // namespace

TEST_CASE("emerging-market FRA") {
    Curve c("y", {{0.25, 0.985222}, {0.5, 0.969468}});
    DeterministicKernelModel m(c);

    SUBCASE("zero-strike value and implied fair rate") {
        const auto q = fra_em_value(m, kEmpty, 0.0, {0.25, 0.5, 0.0, std::nullopt});
        CHECK(q.value == doctest::Approx(0.985222 - 0.969468).epsilon(1e-12));
        CHECK(q.fair_rate ==
              doctest::Approx((0.985222 / 0.969468 - 1.0) / 0.25).epsilon(1e-12));
        CHECK(q.fair_rate == doctest::Approx(0.065).epsilon(1e-5));
    }
    SUBCASE("fair strike zeroes the value") {
        const double fair = fra_em_value(m, kEmpty, 0.0, {0.25, 0.5, 0.0, std::nullopt}).fair_rate;
        CHECK(std::abs(fra_em_value(m, kEmpty, 0.0, {0.25, 0.5, fair, std::nullopt}).value) <
              1e-15);
    }
    SUBCASE("post-reset branch discounts the frozen fixing") {
        const double v = fra_value_post_reset(m, kEmpty, 0.3, {0.25, 0.5, 0.05, std::nullopt},
                                              0.062);
        CHECK(v == doctest::Approx(m.conditional_bond(kEmpty, 0.3, 0.5) * 0.25 *
                                   (0.062 - 0.05))
                       .epsilon(1e-14));
        CHECK_THROWS_AS(fra_em_value(m, kEmpty, 0.3, {0.25, 0.5, 0.0, std::nullopt}),
                        std::invalid_argument);
    }
}

TEST_CASE("emerging-market IRS") {
    const auto m = det_model("y", 0.05);

    SUBCASE("fair rate on the flat curve") {
        const SwapSpec swap{Schedule::regular(0.0, 2.0, 1.0), 0.0};
        const auto q = irs_em_value(*m, kEmpty, 0.0, swap);
        const double expected =
            (1.0 - std::exp(-0.1)) / (std::exp(-0.05) + std::exp(-0.1));
        CHECK(q.fair_rate == doctest::Approx(expected).epsilon(1e-12));
        const SwapSpec at_fair{Schedule::regular(0.0, 2.0, 1.0), expected};
        CHECK(std::abs(irs_em_value(*m, kEmpty, 0.0, at_fair).value) < 1e-14);
    }
    SUBCASE("one-period swap is a FRA") {
        const SwapSpec swap{Schedule({0.25, 0.5}), 0.04};
        const FraSpec fra{0.25, 0.5, 0.04, std::nullopt};
        CHECK(irs_em_value(*m, kEmpty, 0.0, swap).value ==
              doctest::Approx(fra_em_value(*m, kEmpty, 0.0, fra).value).epsilon(1e-14));
    }
}

TEST_CASE("market-implied forward IBOR") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);

    SUBCASE("x = y reduces to the single-curve forward") {
        const double l = ibor_xy(*mx, kEmpty, *mx, kEmpty, 0.0, 0.25, 0.5);
        CHECK(l == doctest::Approx(std::expm1(0.05 * 0.25) / 0.25).epsilon(1e-12));
    }
    SUBCASE("deterministic hand value") {
        const double ly = std::expm1(0.07 * 0.25) / 0.25;
        const double q = std::exp(-0.02 * 0.5);
        CHECK(ibor_xy(*mx, kEmpty, *my, kEmpty, 0.0, 0.25, 0.5) ==
              doctest::Approx(q * ly).epsilon(1e-12));
    }
    SUBCASE("deflated converted IBOR is flat in t on deterministic kernels") {
        double ref = 0.0;
        for (int k = 0; k <= 4; ++k) {
            const double t = 0.05 * k;
            const double l = ibor_xy(*mx, kEmpty, *my, kEmpty, t, 0.25, 0.5);
            const double deflated = mx->kernel_value(kEmpty, t) *
                                    mx->conditional_bond(kEmpty, t, 0.5) * l;
            if (k == 0) {
                ref = deflated;
            } else {
                CHECK(deflated == doctest::Approx(ref).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("developed-market FRA") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);

    SUBCASE("x = y collapses onto the emerging FRA") {
        const FraSpec fra{0.25, 0.5, 0.03, std::nullopt};
        CHECK(fra_dm_value(*mx, kEmpty, *mx, kEmpty, 0.0, fra).value ==
              doctest::Approx(fra_em_value(*mx, kEmpty, 0.0, fra).value).epsilon(1e-12));
    }
    SUBCASE("fair strike zeroes the value") {
        const double fair = fra_dm_value(*mx, kEmpty, *my, kEmpty, 0.0,
                                         {0.25, 0.5, 0.0, std::nullopt})
                                .fair_rate;
        FraSpec fra{0.25, 0.5, 0.0, fair};  // strike quoted in the x market
        CHECK(std::abs(fra_dm_value(*mx, kEmpty, *my, kEmpty, 0.0, fra).value) < 1e-15);
    }
    SUBCASE("deterministic hand value at zero strike") {
        const auto q = fra_dm_value(*mx, kEmpty, *my, kEmpty, 0.0, {0.25, 0.5, 0.0, std::nullopt});
        CHECK(q.value ==
              doctest::Approx(std::exp(-0.07 * 0.25) - std::exp(-0.07 * 0.5)).epsilon(1e-12));
        CHECK(q.value == doctest::Approx(0.017047).epsilon(1e-4));
    }
    SUBCASE("inconsistent dual strikes rejected") {
        FraSpec fra{0.25, 0.5, 0.05, 0.05};  // x-quote must be Q-adjusted, not equal
        CHECK_THROWS_AS(fra_dm_value(*mx, kEmpty, *my, kEmpty, 0.0, fra), std::runtime_error);
    }
    SUBCASE("dual representation agrees on random stochastic states") {
        const auto rx = stoch_model("x", 0.04, 0.10, 0.3);
        const auto ry = stoch_model("y", 0.06, 0.15, 0.25);
        std::mt19937_64 gen(5);
        std::normal_distribution<double> n(0.0, 0.7);
        for (int i = 0; i < 1000; ++i) {
            const State sx{n(gen)}, sy{n(gen)};
            const auto q = fra_dm_value(*rx, sx, *ry, sy, 0.1, {1.0, 1.25, 0.04, std::nullopt});
            CHECK(q.representation_gap <= 1e-12 * std::max(1.0, std::abs(q.value)));
        }
    }
}

TEST_CASE("developed-market IRS") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);

    SUBCASE("x = y collapses onto the emerging IRS") {
        const SwapSpec swap{Schedule::regular(0.0, 2.0, 0.5), 0.04};
        CHECK(irs_dm_value(*mx, kEmpty, *mx, kEmpty, 0.0, swap).value ==
              doctest::Approx(irs_em_value(*mx, kEmpty, 0.0, swap).value).epsilon(1e-12));
    }
    SUBCASE("deterministic fair rate") {
        const SwapSpec swap{Schedule::regular(0.0, 2.0, 1.0), 0.0, true};
        const auto q = irs_dm_value(*mx, kEmpty, *my, kEmpty, 0.0, swap);
        const double expected =
            (1.0 - std::exp(-0.14)) / (std::exp(-0.05) + std::exp(-0.10));
        CHECK(q.fair_rate == doctest::Approx(expected).epsilon(1e-12));
        const SwapSpec at_fair{Schedule::regular(0.0, 2.0, 1.0), expected, true};
        CHECK(std::abs(irs_dm_value(*mx, kEmpty, *my, kEmpty, 0.0, at_fair).value) < 1e-14);
    }
    SUBCASE("empty schedule rejected") {
        CHECK_THROWS_AS(Schedule(std::vector<double>{1.0}), std::invalid_argument);
    }
}

TEST_CASE("emerging multi-curve FRA") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);

    SUBCASE("x = y collapses onto the emerging FRA") {
        const FraSpec fra{0.25, 0.5, 0.03, std::nullopt};
        CHECK(fra_em_multicurve_value(*mx, kEmpty, *mx, kEmpty, 0.0, fra).value ==
              doctest::Approx(fra_em_value(*mx, kEmpty, 0.0, fra).value).epsilon(1e-12));
    }
    SUBCASE("fair rate is the plain y forward") {
        const auto q = fra_em_multicurve_value(*mx, kEmpty, *my, kEmpty, 0.0,
                                               {0.25, 0.5, 0.0, std::nullopt});
        CHECK(q.fair_rate == doctest::Approx(std::expm1(0.07 * 0.25) / 0.25).epsilon(1e-12));
        const FraSpec at_fair{0.25, 0.5, q.fair_rate, std::nullopt};
        CHECK(std::abs(fra_em_multicurve_value(*mx, kEmpty, *my, kEmpty, 0.0, at_fair).value) <
              1e-15);
    }
    SUBCASE("zero strike matches the developed FRA for deterministic kernels") {
        const auto em = fra_em_multicurve_value(*mx, kEmpty, *my, kEmpty, 0.0,
                                                {0.25, 0.5, 0.0, std::nullopt});
        const auto dm = fra_dm_value(*mx, kEmpty, *my, kEmpty, 0.0, {0.25, 0.5, 0.0, std::nullopt});
        CHECK(em.value == doctest::Approx(dm.value).epsilon(1e-12));
    }
}

TEST_CASE("NS-variant converted FCF rate") {
    const auto mx = det_model("x", 0.05);
    const auto my = det_model("y", 0.07);

    SUBCASE("x = y reduces to the single-curve forward") {
        const auto q = ns_variant_ibor(*mx, kEmpty, *mx, kEmpty, 0.0, 0.25, 0.5);
        CHECK(q.rate == doctest::Approx(std::expm1(0.05 * 0.25) / 0.25).epsilon(1e-12));
        CHECK(q.spread_factor == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("deterministic hand value") {
        const auto q = ns_variant_ibor(*mx, kEmpty, *my, kEmpty, 0.0, 0.25, 0.5);
        CHECK(q.rate == doctest::Approx(std::expm1(0.0075) / 0.25).epsilon(1e-12));
    }
    SUBCASE("additive gap to the converted IBOR") {
        const double delta = 0.25;
        const auto q = ns_variant_ibor(*mx, kEmpty, *my, kEmpty, 0.0, 0.25, 0.5);
        const double lxy = ibor_xy(*mx, kEmpty, *my, kEmpty, 0.0, 0.25, 0.5);
        const double q_pay = q_forward(*mx, kEmpty, *my, kEmpty, 0.0, 0.5);
        CHECK(q.rate - lxy == doctest::Approx((q_pay - 1.0) / delta).epsilon(1e-12));
    }
    SUBCASE("spread identity holds on stochastic states") {
        const auto rx = stoch_model("x", 0.04, 0.10, 0.3);
        const auto ry = stoch_model("y", 0.06, 0.15, 0.25);
        std::mt19937_64 gen(13);
        std::normal_distribution<double> n(0.0, 0.7);
        for (int i = 0; i < 500; ++i) {
            const State sx{n(gen)}, sy{n(gen)};
            const auto q = ns_variant_ibor(*rx, sx, *ry, sy, 0.2, 1.0, 1.25);
            CHECK(q.spread_factor ==
                  doctest::Approx(q_forward(*rx, sx, *ry, sy, 0.2, 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("inflation-linked bond") {
    const auto mn = det_model("N", 0.05);
    const auto mr = det_model("R", 0.02);

    CHECK(inflation_bond(*mn, kEmpty, *mn, kEmpty, 0.0, 1.0) ==
          doctest::Approx(std::exp(-0.05)).epsilon(1e-12));
    const double p = inflation_bond(*mn, kEmpty, *mr, kEmpty, 0.0, 1.0);
    CHECK(p == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
    // market-implied conversion factor
    CHECK(p / mn->conditional_bond(kEmpty, 0.0, 1.0) ==
          doctest::Approx(q_forward(*mn, kEmpty, *mr, kEmpty, 0.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("FX forward") {
    const auto mi = det_model("usd", 0.05);
    const auto mj = det_model("gbp", 0.07);

    SUBCASE("spot at expiry") {
        const auto q = fx_forward(*mi, kEmpty, *mj, kEmpty, 1.25, 1.0, 1.0, 0.0);
        CHECK(q.fair == doctest::Approx(1.25 * std::exp(-0.02)).epsilon(1e-12));
    }
    SUBCASE("hand value and fair strike") {
        const auto q = fx_forward(*mi, kEmpty, *mj, kEmpty, 1.25, 0.0, 1.0, 0.0);
        CHECK(q.fair == doctest::Approx(1.25 * std::exp(-0.02)).epsilon(1e-12));
        const auto at_fair = fx_forward(*mi, kEmpty, *mj, kEmpty, 1.25, 0.0, 1.0, q.fair);
        CHECK(std::abs(at_fair.value) < 1e-15);
    }
    SUBCASE("triangle consistency") {
        const auto mk = det_model("eur", 0.03);
        const double x_ij = 1.25, x_jk = 0.8, x_ik = x_ij * x_jk;
        const double f_ij = fx_forward(*mi, kEmpty, *mj, kEmpty, x_ij, 0.5, 2.0, 0.0).fair;
        const double f_jk = fx_forward(*mj, kEmpty, *mk, kEmpty, x_jk, 0.5, 2.0, 0.0).fair;
        const double f_ik = fx_forward(*mi, kEmpty, *mk, kEmpty, x_ik, 0.5, 2.0, 0.0).fair;
        CHECK(f_ik == doctest::Approx(f_ij * f_jk / (x_ij * x_jk) * x_ik).epsilon(1e-12));
    }
}

TEST_CASE("FX-IBOR hybrid forward") {
    const auto mx_usd = det_model("x_usd", 0.045);
    const auto mx_gbp = det_model("x_gbp", 0.05);
    const auto my_gbp = det_model("y_gbp", 0.07);

    SUBCASE("same currency reduces to the converted IBOR") {
        const double k = fx_libor_forward(*mx_gbp, kEmpty, *mx_gbp, kEmpty, *my_gbp, kEmpty,
                                          1.0, 0.0, 0.25, 0.5);
        CHECK(k == doctest::Approx(ibor_xy(*mx_gbp, kEmpty, *my_gbp, kEmpty, 0.0, 0.25, 0.5))
                       .epsilon(1e-12));
    }
    SUBCASE("deterministic composition") {
        const double k = fx_libor_forward(*mx_usd, kEmpty, *mx_gbp, kEmpty, *my_gbp, kEmpty,
                                          1.25, 0.0, 0.25, 0.5);
        const double fx_factor = std::exp(-(0.05 - 0.045) * 0.5);
        const double l_gbp = ibor_xy(*mx_gbp, kEmpty, *my_gbp, kEmpty, 0.0, 0.25, 0.5);
        CHECK(k == doctest::Approx(fx_factor * l_gbp).epsilon(1e-12));
    }
    SUBCASE("stochastic states keep both routes equal") {
        const auto rx = stoch_model("x_usd", 0.045, 0.08, 0.3);
        const auto rg = stoch_model("x_gbp", 0.05, 0.12, 0.2);
        const auto ry = stoch_model("y_gbp", 0.07, 0.15, 0.25);
        std::mt19937_64 gen(41);
        std::normal_distribution<double> n(0.0, 0.6);
        for (int i = 0; i < 300; ++i) {
            const State s1{n(gen)}, s2{n(gen)}, s3{n(gen)};
            CHECK_NOTHROW(fx_libor_forward(*rx, s1, *rg, s2, *ry, s3, 1.25, 0.2, 1.0, 1.25));
        }
    }
}

TEST_CASE("inflation-linked FX forward") {
    const auto m_ni = det_model("N_i", 0.05);
    const auto m_nj = det_model("N_j", 0.06);
    const auto m_rj = det_model("R_j", 0.02);

    SUBCASE("fair strike zeroes the value") {
        const auto q = inflation_fx_forward(*m_ni, kEmpty, *m_rj, kEmpty, *m_nj, kEmpty, 1.1,
                                            0.0, 2.0, 0.0);
        const auto at_fair = inflation_fx_forward(*m_ni, kEmpty, *m_rj, kEmpty, *m_nj, kEmpty,
                                                  1.1, 0.0, 2.0, q.fair);
        CHECK(std::abs(at_fair.value) < 1e-15);
    }
    SUBCASE("deterministic composition") {
        const auto q = inflation_fx_forward(*m_ni, kEmpty, *m_rj, kEmpty, *m_nj, kEmpty, 1.1,
                                            0.0, 2.0, 0.0);
        CHECK(q.fair == doctest::Approx(1.1 * std::exp(-(0.02 - 0.05) * 2.0)).epsilon(1e-12));
        CHECK(q.value == doctest::Approx(1.1 * std::exp(-0.02 * 2.0)).epsilon(1e-12));
    }
    SUBCASE("domestic inflation reduction") {
        const auto q = inflation_fx_forward(*m_nj, kEmpty, *m_rj, kEmpty, *m_nj, kEmpty, 1.0,
                                            0.0, 2.0, 0.0);
        const double p_nr = inflation_bond(*m_nj, kEmpty, *m_rj, kEmpty, 0.0, 2.0);
        CHECK(q.fair ==
              doctest::Approx(p_nr / m_nj->conditional_bond(kEmpty, 0.0, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("FCF domination and return ordering on sampled states") {
    // h^y <= h^x pathwise: the x kernel carries a loading that turns on with
    // the curve spread; y is the higher-yield deterministic market.
    const auto mx = std::make_shared<RationalMultiplicativeModel>(
        Curve::flat("x", 0.05, 40.0),
        std::vector<RationalFactor>{{TimeFunction::one_minus_exp(0.9, 0.02), 0.05}});
    const auto my = det_model("y", 0.07);
    std::mt19937_64 gen(57);
    std::normal_distribution<double> n(0.0, 1.0);
    const double t = 1.0, t_prev = 1.25, t_next = 1.5, delta = 0.25;

    int states = 0;
    for (int i = 0; i < 2000; ++i) {
        const State sx{n(gen) * std::sqrt(t)};
        const State sy;
        REQUIRE(my->kernel_value(sy, t) <= mx->kernel_value(sx, t));
        const double vx = mx->conditional_bond(sx, t, t_prev) /
                          mx->conditional_bond(sx, t, t_next);
        REQUIRE(vx >= 1.0);
        const double lxy = ibor_xy(*mx, sx, *my, sy, t, t_prev, t_next);
        const double lx = (vx - 1.0) / delta;
        CHECK(1.0 + delta * lxy >= vx);  // FCF domination, zero violations
        CHECK(lxy >= lx);

        // Return ordering: collateralised (x-discounted) FRA returns less.
        const double v_yy = fra_em_value(*my, sy, t, {t_prev, t_next, 0.0, std::nullopt}).value;
        const double v_yy0 =
            fra_em_value(*my, sy, 0.0, {t_prev, t_next, 0.0, std::nullopt}).value;
        const double v_xy =
            fra_em_multicurve_value(*mx, sx, *my, sy, t, {t_prev, t_next, 0.0, std::nullopt})
                .value;
        if (q_forward(*mx, sx, *my, sy, t, t_next) < 1.0 && v_yy0 > 0.0) {
            CHECK(v_yy / v_yy0 > v_xy / v_yy0);
        }
        ++states;
    }
    CHECK(states == 2000);
}

TEST_CASE("NS-variant inequality under the reversed kernel ordering") {
    // h^x <= h^y pathwise: mirror construction.
    const auto mx = det_model("x", 0.07);
    const auto my = std::make_shared<RationalMultiplicativeModel>(
        Curve::flat("y", 0.05, 40.0),
        std::vector<RationalFactor>{{TimeFunction::one_minus_exp(0.9, 0.02), 0.05}});
    std::mt19937_64 gen(61);
    std::normal_distribution<double> n(0.0, 1.0);
    const double t = 1.0, t_prev = 1.25, t_next = 1.5, delta = 0.25;
    for (int i = 0; i < 2000; ++i) {
        const State sy{n(gen) * std::sqrt(t)};
        const State sx;
        REQUIRE(mx->kernel_value(sx, t) <= my->kernel_value(sy, t));
        const auto q = ns_variant_ibor(*mx, sx, *my, sy, t, t_prev, t_next);
        const double lx = (mx->conditional_bond(sx, t, t_prev) /
                               mx->conditional_bond(sx, t, t_next) -
                           1.0) /
                          delta;
        CHECK(q.rate >= lx);
    }
}
