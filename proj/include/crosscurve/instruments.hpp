#pragma once

#include <optional>
#include <span>

#include "crosscurve/kernel_model.hpp"
#include "crosscurve/schedule.hpp"

namespace xc {

// Forward rate agreement over one accrual period. The strike may be quoted in
// the forecast (y) or the discount (x) market; across-curve pricers convert
// with Q^{xy}_{tT_i} at valuation time. If both quotes are supplied they must
// be consistent.
struct FraSpec {
    double reset;  // T_{i-1}
    double pay;    // T_i
    double strike_y = 0.0;
    std::optional<double> strike_x;  // optional x-market quote of the same strike

    double accrual() const { return pay - reset; }
    void validate() const {
        require(reset >= 0.0 && pay > reset, "FRA needs 0 <= reset < pay");
    }
};

struct SwapSpec {
    Schedule schedule;
    double fixed_rate;        // S^y for emerging, S^x for developed pricing
    bool rate_in_x = false;   // developed-market quotes live in the x-market
};

struct PriceQuote {
    double value;
    double fair_rate;
    double representation_gap;  // |route 1 - route 2| where the paper gives two
};

// --- emerging market (same curve forecasts and discounts) ---------------

PriceQuote fra_em_value(const KernelModel& my, std::span<const double> sy, double t,
                        const FraSpec& fra);

// Valuation after the reset: the fixing is frozen, the remaining cash flow is
// fixed and discounted on the same curve.
double fra_value_post_reset(const KernelModel& m, std::span<const double> s, double t,
                            const FraSpec& fra, double frozen_fixing);

PriceQuote irs_em_value(const KernelModel& my, std::span<const double> sy, double t,
                        const SwapSpec& swap);

// --- developed market (forecast y, discount x) ---------------------------

// Market-implied y-tenored forward IBOR L^{xy}_t = Q^{xy}_{tT_i} L^y_t,
// computed through both displayed representations.
double ibor_xy(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
               std::span<const double> sy, double t, double t_prev, double t_next);

PriceQuote fra_dm_value(const KernelModel& mx, std::span<const double> sx,
                        const KernelModel& my, std::span<const double> sy, double t,
                        const FraSpec& fra);

PriceQuote irs_dm_value(const KernelModel& mx, std::span<const double> sx,
                        const KernelModel& my, std::span<const double> sy, double t,
                        const SwapSpec& swap);

// Emerging-market multi-curve FRA: quanto-bond form with the plain y-IBOR as
// underlying and fair rate L^y_t.
PriceQuote fra_em_multicurve_value(const KernelModel& mx, std::span<const double> sx,
                                   const KernelModel& my, std::span<const double> sy, double t,
                                   const FraSpec& fra);

// Nguyen-Seifried style converted-FCF rate and its multiplicative spread
// identity factor.
struct NsVariantIbor {
    double rate;           // (Q^{xy}_{tT_i} v^y_t - 1) / delta
    double spread_factor;  // (1 + d L-bar)/(1 + d L^x) = Q^{xy}_{tT_{i-1}}
};

NsVariantIbor ns_variant_ibor(const KernelModel& mx, std::span<const double> sx,
                              const KernelModel& my, std::span<const double> sy, double t,
                              double t_prev, double t_next);

// --- inflation and FX -----------------------------------------------------

// Inflation-linked discount bond P^{NR}_{tT} with nominal N and real R markets.
double inflation_bond(const KernelModel& mn, std::span<const double> sn, const KernelModel& mr,
                      std::span<const double> sr, double t, double T);

struct FxForwardQuote {
    double fair;   // F^{ij}_{tT}
    double value;  // of the contract paying X_T - K at T, in i-currency units
};

// Spot FX follows X^{ij}_t = X^{ij}_0 h^j_t / h^i_t; the fair forward is
// X_0 Q^{ij}_{tT}, checked against X_t P^j_{tT} / P^i_{tT}.
FxForwardQuote fx_forward(const KernelModel& mi, std::span<const double> si,
                          const KernelModel& mj, std::span<const double> sj, double spot0,
                          double t, double T, double strike);

// Fair rate of a domestic-currency forward on a foreign-market IBOR, via the
// FX-scaled route and the direct conversion route (must agree to 1e-12).
double fx_libor_forward(const KernelModel& mx_dom, std::span<const double> sx_dom,
                        const KernelModel& mx_for, std::span<const double> sx_for,
                        const KernelModel& my_for, std::span<const double> sy_for,
                        double spot0, double t, double t_prev, double t_next);

struct InflationFxQuote {
    double value;
    double fair;  // F^{N_i R_j}_{tT}
};

// Forward on the foreign price index paid in domestic currency; asserts the
// conversion-chain identity Q^{N_i R_j} = Q^{ij} Q^{N_j R_j}.
InflationFxQuote inflation_fx_forward(const KernelModel& m_ni, std::span<const double> s_ni,
                                      const KernelModel& m_rj, std::span<const double> s_rj,
                                      const KernelModel& m_nj, std::span<const double> s_nj,
                                      double spot0, double t, double T, double strike);

}  // namespace xc
