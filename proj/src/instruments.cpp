#include "crosscurve/instruments.hpp"

#include <cmath>

#include "crosscurve/conversion.hpp"
#include "crosscurve/rates.hpp"

namespace xc {

namespace {

constexpr double kGapTol = 1e-12;

void check_gap(double a, double b, const char* what) {
    ensure(std::abs(a - b) <= kGapTol * std::max(1.0, std::abs(a)),
           std::string(what) + ": dual representations disagree");
}

}  // namespace

PriceQuote fra_em_value(const KernelModel& my, std::span<const double> sy, double t,
                        const FraSpec& fra) {
    fra.validate();
    require(t <= fra.reset, "fra_em_value: valuation after reset; use the post-reset branch");
    require(!fra.strike_x.has_value() || fra.strike_x == fra.strike_y,
            "emerging-market FRA strike lives on the y-curve only");
    const double p0 = my.conditional_bond(sy, t, fra.reset);
    const double p1 = my.conditional_bond(sy, t, fra.pay);
    const double delta = fra.accrual();
    const double fair = (p0 / p1 - 1.0) / delta;
    const double value = p0 - (1.0 + delta * fra.strike_y) * p1;
    const double via_rate = delta * p1 * (fair - fra.strike_y);
    check_gap(value, via_rate, "fra_em_value");
    return {value, fair, std::abs(value - via_rate)};
}

double fra_value_post_reset(const KernelModel& m, std::span<const double> s, double t,
                            const FraSpec& fra, double frozen_fixing) {
    fra.validate();
    require(t > fra.reset && t <= fra.pay, "post-reset valuation needs reset < t <= pay");
    return m.conditional_bond(s, t, fra.pay) * fra.accrual() * (frozen_fixing - fra.strike_y);
}

PriceQuote irs_em_value(const KernelModel& my, std::span<const double> sy, double t,
                        const SwapSpec& swap) {
    const auto& times = swap.schedule.times();
    require(swap.schedule.periods() >= 1, "empty swap schedule");
    require(t <= times.front(), "irs_em_value: valuation after first reset");
    require(!swap.rate_in_x, "emerging-market IRS rate lives on the y-curve only");
    double annuity = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        annuity += swap.schedule.accrual(i - 1) * my.conditional_bond(sy, t, times[i]);
    }
    const double p_front = my.conditional_bond(sy, t, times.front());
    const double p_back = my.conditional_bond(sy, t, times.back());
    const double fair = (p_front - p_back) / annuity;
    const double value = p_front - p_back - swap.fixed_rate * annuity;
    return {value, fair, 0.0};
}

double ibor_xy(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
               std::span<const double> sy, double t, double t_prev, double t_next) {
    require(t <= t_prev && t_prev < t_next, "ibor_xy: need t <= T_prev < T_next");
    const double delta = t_next - t_prev;
    const double ly = (my.conditional_bond(sy, t, t_prev) / my.conditional_bond(sy, t, t_next) -
                       1.0) /
                      delta;
    const double via_q = q_forward(mx, sx, my, sy, t, t_next) * ly;
    const double pxy_prev = quanto_bond(mx, sx, my, sy, t, t_prev);
    const double pxy_next = quanto_bond(mx, sx, my, sy, t, t_next);
    const double via_quanto = (pxy_prev - pxy_next) /
                              (delta * mx.conditional_bond(sx, t, t_next));
    check_gap(via_q, via_quanto, "ibor_xy");
    return via_q;
}

PriceQuote fra_dm_value(const KernelModel& mx, std::span<const double> sx,
                        const KernelModel& my, std::span<const double> sy, double t,
                        const FraSpec& fra) {
    fra.validate();
    require(t <= fra.reset, "fra_dm_value: valuation after reset; use the post-reset branch");
    const double delta = fra.accrual();
    const double q_pay = q_forward(mx, sx, my, sy, t, fra.pay);
    const double strike_y = fra.strike_y;
    if (fra.strike_x.has_value()) {
        // A redundant dual quote must respect K^x = Q^{xy}_{tT_i} K^y.
        ensure(std::abs(*fra.strike_x - q_pay * strike_y) <= 1e-12 * std::max(1.0, std::abs(*fra.strike_x)),
               "fra_dm_value: inconsistent dual strike quotes");
    }
    const double strike_x = fra.strike_x.value_or(q_pay * strike_y);

    const double lxy = ibor_xy(mx, sx, my, sy, t, fra.reset, fra.pay);
    const double via_theorem = delta * mx.conditional_bond(sx, t, fra.pay) * (lxy - strike_x);
    const double via_quanto = quanto_bond(mx, sx, my, sy, t, fra.reset) -
                              (1.0 + delta * strike_y) * quanto_bond(mx, sx, my, sy, t, fra.pay);
    check_gap(via_theorem, via_quanto, "fra_dm_value");
    return {via_theorem, lxy, std::abs(via_theorem - via_quanto)};
}

PriceQuote irs_dm_value(const KernelModel& mx, std::span<const double> sx,
                        const KernelModel& my, std::span<const double> sy, double t,
                        const SwapSpec& swap) {
    const auto& times = swap.schedule.times();
    require(swap.schedule.periods() >= 1, "empty swap schedule");
    require(t <= times.front(), "irs_dm_value: valuation after first reset");

    double annuity_x = 0.0;
    double annuity_xy = 0.0;
    double float_leg = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double delta = swap.schedule.accrual(i - 1);
        const double px = mx.conditional_bond(sx, t, times[i]);
        annuity_x += delta * px;
        annuity_xy += delta * quanto_bond(mx, sx, my, sy, t, times[i]);
        float_leg += delta * px * ibor_xy(mx, sx, my, sy, t, times[i - 1], times[i]);
    }
    const double pxy_front = quanto_bond(mx, sx, my, sy, t, times.front());
    const double pxy_back = quanto_bond(mx, sx, my, sy, t, times.back());
    const double fair = (pxy_front - pxy_back) / annuity_x;

    const double rate_x = swap.rate_in_x ? swap.fixed_rate
                                         : swap.fixed_rate * annuity_xy / annuity_x;
    const double rate_y = swap.rate_in_x ? swap.fixed_rate * annuity_x / annuity_xy
                                         : swap.fixed_rate;
    const double via_theorem = float_leg - rate_x * annuity_x;
    const double via_quanto = pxy_front - pxy_back - rate_y * annuity_xy;
    check_gap(via_theorem, via_quanto, "irs_dm_value");
    return {via_theorem, fair, std::abs(via_theorem - via_quanto)};
}

PriceQuote fra_em_multicurve_value(const KernelModel& mx, std::span<const double> sx,
                                   const KernelModel& my, std::span<const double> sy, double t,
                                   const FraSpec& fra) {
    fra.validate();
    require(t <= fra.reset, "fra_em_multicurve_value: valuation after reset");
    require(!fra.strike_x.has_value(), "emerging multi-curve FRA strike lives on the y-curve");
    const double delta = fra.accrual();
    const double pxy_prev = quanto_bond(mx, sx, my, sy, t, fra.reset);
    const double pxy_next = quanto_bond(mx, sx, my, sy, t, fra.pay);
    const double ly = (my.conditional_bond(sy, t, fra.reset) /
                           my.conditional_bond(sy, t, fra.pay) -
                       1.0) /
                      delta;
    const double value = pxy_prev - (1.0 + delta * fra.strike_y) * pxy_next;
    // P^{xy} ratios reproduce the y-IBOR, so the rate form is equivalent.
    const double via_rate = delta * pxy_next * (ly - fra.strike_y);
    check_gap(value, via_rate, "fra_em_multicurve_value");
    return {value, ly, std::abs(value - via_rate)};
}

NsVariantIbor ns_variant_ibor(const KernelModel& mx, std::span<const double> sx,
                              const KernelModel& my, std::span<const double> sy, double t,
                              double t_prev, double t_next) {
    require(t <= t_prev && t_prev < t_next, "ns_variant_ibor: need t <= T_prev < T_next");
    const double delta = t_next - t_prev;
    const double v_y = my.conditional_bond(sy, t, t_prev) / my.conditional_bond(sy, t, t_next);
    const double v_xy = q_forward(mx, sx, my, sy, t, t_next) * v_y;
    const double rate = (v_xy - 1.0) / delta;
    const double lx = (mx.conditional_bond(sx, t, t_prev) / mx.conditional_bond(sx, t, t_next) -
                       1.0) /
                      delta;
    const double spread = (1.0 + delta * rate) / (1.0 + delta * lx);
    const double q_prev = q_forward(mx, sx, my, sy, t, t_prev);
    ensure(std::abs(spread - q_prev) <= 1e-12 * std::max(1.0, std::abs(q_prev)),
           "ns_variant_ibor: spread identity violated");
    return {rate, spread};
}

double inflation_bond(const KernelModel& mn, std::span<const double> sn, const KernelModel& mr,
                      std::span<const double> sr, double t, double T) {
    return quanto_bond(mn, sn, mr, sr, t, T);
}

FxForwardQuote fx_forward(const KernelModel& mi, std::span<const double> si,
                          const KernelModel& mj, std::span<const double> sj, double spot0,
                          double t, double T, double strike) {
    require(spot0 > 0.0, "fx_forward: spot must be positive");
    require(0.0 <= t && t <= T, "fx_forward: need 0 <= t <= T");
    const double fair_via_q = spot0 * q_forward(mi, si, mj, sj, t, T);
    const double spot_t = spot0 * q_spot(mi, si, mj, sj, t);
    const double fair_via_bonds = spot_t * mj.conditional_bond(sj, t, T) /
                                  mi.conditional_bond(si, t, T);
    check_gap(fair_via_q, fair_via_bonds, "fx_forward");
    const double value = mi.conditional_bond(si, t, T) * (fair_via_q - strike);
    return {fair_via_q, value};
}

double fx_libor_forward(const KernelModel& mx_dom, std::span<const double> sx_dom,
                        const KernelModel& mx_for, std::span<const double> sx_for,
                        const KernelModel& my_for, std::span<const double> sy_for,
                        double spot0, double t, double t_prev, double t_next) {
    require(t <= t_prev && t_prev < t_next, "fx_libor_forward: need t <= T_prev < T_next");
    // Route 1: foreign-market converted IBOR scaled by the FX conversion factor.
    const double l_foreign = ibor_xy(mx_for, sx_for, my_for, sy_for, t, t_prev, t_next);
    const double fx_factor = fx_forward(mx_dom, sx_dom, mx_for, sx_for, spot0, t, t_next, 0.0)
                                 .fair /
                             spot0;
    const double via_fx = fx_factor * l_foreign;
    // Route 2: direct conversion from the foreign forecast market into the
    // domestic discount market.
    const double ly = (my_for.conditional_bond(sy_for, t, t_prev) /
                           my_for.conditional_bond(sy_for, t, t_next) -
                       1.0) /
                      (t_next - t_prev);
    const double via_direct = q_forward(mx_dom, sx_dom, my_for, sy_for, t, t_next) * ly;
    check_gap(via_fx, via_direct, "fx_libor_forward");
    return via_fx;
}

InflationFxQuote inflation_fx_forward(const KernelModel& m_ni, std::span<const double> s_ni,
                                      const KernelModel& m_rj, std::span<const double> s_rj,
                                      const KernelModel& m_nj, std::span<const double> s_nj,
                                      double spot0, double t, double T, double strike) {
    require(spot0 > 0.0, "inflation_fx_forward: spot must be positive");
    require(0.0 <= t && t <= T, "inflation_fx_forward: need 0 <= t <= T");
    const double q_ni_rj = q_forward(m_ni, s_ni, m_rj, s_rj, t, T);
    const double q_ij = q_forward(m_ni, s_ni, m_nj, s_nj, t, T);
    const double q_nj_rj = q_forward(m_nj, s_nj, m_rj, s_rj, t, T);
    ensure(std::abs(q_ni_rj - q_ij * q_nj_rj) <= 1e-12 * std::max(1.0, q_ni_rj),
           "inflation_fx_forward: conversion chain identity violated");

    const double p_ni = m_ni.conditional_bond(s_ni, t, T);
    const double value = spot0 * p_ni * q_ni_rj - strike * p_ni;
    const double fair = spot0 * q_ni_rj;
    // Equivalent hedge representation F^{ij} P^{N_j R_j} / P^{N_j}.
    const double fair_hedge = spot0 * q_ij *
                              quanto_bond(m_nj, s_nj, m_rj, s_rj, t, T) /
                              m_nj.conditional_bond(s_nj, t, T);
    check_gap(fair, fair_hedge, "inflation_fx_forward");
    return {value, fair};
}

}  // namespace xc
