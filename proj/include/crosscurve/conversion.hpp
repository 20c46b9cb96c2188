#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "crosscurve/kernel_model.hpp"
#include "crosscurve/market_system.hpp"

namespace xc {

// Spot curve-conversion factor Q^{xy}_{tt} = h^y_t / h^x_t.
double q_spot(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
              std::span<const double> sy, double t);

// Forward curve-conversion factor
// Q^{xy}_{tT} = E[h^y_T|F_t] / E[h^x_T|F_t] = h^y_t P^y_{tT} / (h^x_t P^x_{tT}).
double q_forward(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
                 std::span<const double> sy, double t, double T);

// x-market present value of a unit y-market payoff at T:
// P^{xy}_{tT} = P^x_{tT} Q^{xy}_{tT} = Q^{xy}_{tt} P^y_{tT}.
// Both representations are evaluated; disagreement beyond 1e-12 signals an
// inconsistent model pair and throws.
double quanto_bond(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
                   std::span<const double> sy, double t, double T);

// y-market cash flow fixed at t and paid at T, described through the combed
// form H^y_t(t,T) * P^y_{tT} = sum_j coeff_j * P^y_{t,maturity_j}. FRA, IRS
// and bond payoffs all fit; this is what makes the s < t branch of the
// across-curve formula closed-form.
struct DeflatedLinearPayoff {
    std::vector<std::pair<double, double>> bond_terms;  // (maturity, coeff)
};

// Across-curve value at s <= fixing time t of the payoff above:
// (1/h^x_s) E[h^x_t P^x_{tT} Q^{xy}_{tT} H^y_t | F_s] = (1/h^x_s) sum_j c_j h^y_s P^y_{s,M_j}.
double across_curve_price(const KernelModel& mx, std::span<const double> sx,
                          const KernelModel& my, std::span<const double> sy, double s,
                          double fixing_time, double pay_time,
                          const DeflatedLinearPayoff& payoff);

// Branch t <= s <= T of the across-curve formula with the fixing (and its
// conversion factor) frozen at the fixing time: P^x_{sT} * Q^{xy}_{tT} * H^y_t.
double across_curve_price_fixed(const KernelModel& mx, std::span<const double> sx, double s,
                                double pay_time, double frozen_q, double frozen_fixing);

// Generic fixing evaluated at (model_y, state_y, t).
using FixingFunction =
    std::function<double(const KernelModel&, std::span<const double>, double)>;

// Monte Carlo evaluation of the s < t branch for an arbitrary measurable
// fixing: paths of the joint system run from (s, state) to the fixing time.
double across_curve_price_mc(const MarketSystem& system, int market_x, int market_y,
                             const State& joint_state, double s, double fixing_time,
                             double pay_time, const FixingFunction& fixing, int n_paths,
                             std::uint64_t seed, double dt = 1.0 / 250.0);

}  // namespace xc
