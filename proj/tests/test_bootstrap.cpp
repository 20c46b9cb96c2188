#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crosscurve/bootstrap.hpp"
#include "crosscurve/conversion.hpp"
#include "crosscurve/instruments.hpp"

using namespace xc;

namespace {

QuoteSet synthetic_quotes(double depo, double fra1, double fra2, double swap1, double swap2) {
    QuoteSet q;
    q.market = "y3m";
    q.deposit = DepositQuote{0.25, depo};
    q.fras = {{0.25, 0.5, fra1}, {0.5, 0.75, fra2}};
    q.swaps = {{1.0, swap1}, {2.0, swap2}};
    return q;
}

}  // namespace

TEST_CASE("emerging bootstrap hand rows") {
    QuoteSet q;
    q.market = "y";
    q.deposit = DepositQuote{0.25, 0.06};
    q.fras = {{0.25, 0.5, 0.065}};
    const auto result = bootstrap_emerging(q);
    CHECK(result.curve.df(0.25) == doctest::Approx(1.0 / 1.015).epsilon(1e-12));
    CHECK(result.curve.df(0.5) == doctest::Approx(1.0 / 1.015 / 1.01625).epsilon(1e-12));
    CHECK(result.max_abs_residual() < 1e-12);
}

TEST_CASE("zero rates give a unit curve") {
    QuoteSet q;
    q.market = "y";
    q.deposit = DepositQuote{0.25, 0.0};
    q.fras = {{0.25, 0.5, 0.0}};
    q.swaps = {{1.0, 0.0}};
    const auto result = bootstrap_emerging(q);
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        CHECK(result.curve.df(t) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("emerging bootstrap round-trips its quotes") {
    const auto q = synthetic_quotes(0.06, 0.065, 0.066, 0.064, 0.0655);
    const auto result = bootstrap_emerging(q);
    CHECK(result.residuals.size() == 5);
    CHECK(result.max_abs_residual() < 1e-10);
    // pillars at every quote maturity
    CHECK(result.curve.df(2.0) > 0.0);
}

TEST_CASE("emerging bootstrap with a gap between FRAs and swaps") {
    QuoteSet q;
    q.market = "y";
    q.deposit = DepositQuote{0.25, 0.06};
    q.fras = {{0.25, 0.5, 0.065}};
    q.swaps = {{2.0, 0.063}, {3.0, 0.061}};  // several grid steps beyond the FRA strip
    const auto result = bootstrap_emerging(q);
    CHECK(result.max_abs_residual() < 1e-10);
    // df stays positive and monotone for positive rates
    double prev = 1.0;
    for (double t = 0.25; t <= 3.0; t += 0.25) {
        const double df = result.curve.df(t);
        CHECK(df > 0.0);
        CHECK(df < prev);
        prev = df;
    }
}

TEST_CASE("infeasible quotes are rejected") {
    QuoteSet q;
    q.market = "y";
    q.deposit = DepositQuote{0.25, 0.06};
    q.fras = {{0.25, 0.5, 0.065}};
    q.swaps = {{1.0, 5.0}};  // no positive df can reprice a 500% swap here
    CHECK_THROWS_AS(bootstrap_emerging(q), std::runtime_error);

    QuoteSet depo_bad;
    depo_bad.market = "y";
    depo_bad.deposit = DepositQuote{1.0, 5.0};  // forecast df would turn negative
    CHECK_THROWS_AS(bootstrap_developed(depo_bad, Curve::flat("x", 0.0, 10.0)),
                    std::runtime_error);
}

TEST_CASE("developed bootstrap hand row") {
    QuoteSet q;
    q.market = "y";
    q.deposit = DepositQuote{0.25, 0.06};
    const Curve x = Curve::flat("x", 0.05, 10.0);
    const auto result = bootstrap_developed(q, x);
    CHECK(result.curve.df(0.25) ==
          doctest::Approx(1.0 - 0.015 * std::exp(-0.0125)).epsilon(1e-12));
}

TEST_CASE("developed bootstrap round-trips its quotes") {
    const auto q = synthetic_quotes(0.06, 0.065, 0.066, 0.064, 0.0655);
    const Curve x = Curve::flat("x", 0.045, 10.0);
    const auto result = bootstrap_developed(q, x);
    CHECK(result.max_abs_residual() < 1e-10);
}

TEST_CASE("developed bootstrap with the curve's own single-curve solution is a fixed point") {
    const auto q = synthetic_quotes(0.06, 0.065, 0.066, 0.064, 0.0655);
    const auto own = bootstrap_emerging(q);
    const auto redone = bootstrap_developed(q, own.curve);
    for (double t : {0.25, 0.5, 0.75, 1.0, 2.0}) {
        CHECK(redone.curve.df(t) == doctest::Approx(own.curve.df(t)).epsilon(1e-12));
    }
    // and then the quanto bond pins P^{xy}_{0t} = P^y_{0t}
    const DeterministicKernelModel mx(own.curve);
    const DeterministicKernelModel my(redone.curve);
    const State s;
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
        CHECK(quanto_bond(mx, s, my, s, 0.0, t) ==
              doctest::Approx(redone.curve.df(t)).epsilon(1e-12));
    }
}

TEST_CASE("practitioner curve differs from the developed curve off a non-flat x") {
    const auto q = synthetic_quotes(0.06, 0.065, 0.066, 0.064, 0.0655);
    const Curve x = Curve::flat("x", 0.045, 10.0);
    const auto developed = bootstrap_developed(q, x);
    const auto practitioner = bootstrap_practitioner(q);
    CHECK(practitioner.max_abs_residual() < 1e-10);
    CHECK(std::abs(practitioner.curve.df(2.0) - developed.curve.df(2.0)) > 1e-6);

    // flat quotes sanity: P = (1+r)^-k on an annual grid
    QuoteSet flat;
    flat.market = "y";
    flat.deposit = DepositQuote{1.0, 0.05};
    flat.swaps = {{2.0, 0.05}};
    const auto bar = bootstrap_practitioner(flat);
    CHECK(bar.curve.df(1.0) == doctest::Approx(1.0 / 1.05).epsilon(1e-10));
    CHECK(bar.curve.df(2.0) == doctest::Approx(1.0 / (1.05 * 1.05)).epsilon(1e-10));
}

TEST_CASE("practitioner equals emerging on the same quotes") {
    const auto q = synthetic_quotes(0.06, 0.065, 0.066, 0.064, 0.0655);
    const auto em = bootstrap_emerging(q);
    const auto bar = bootstrap_practitioner(q);
    for (double t : {0.25, 0.5, 0.75, 1.0, 2.0}) {
        CHECK(bar.curve.df(t) == doctest::Approx(em.curve.df(t)).epsilon(1e-14));
    }
}

TEST_CASE("discount curve must cover the quotes") {
    const auto q = synthetic_quotes(0.06, 0.065, 0.066, 0.064, 0.0655);
    const Curve x_short("x", {{0.5, 0.99}});
    CHECK_THROWS_AS(bootstrap_developed(q, x_short), std::invalid_argument);
}
