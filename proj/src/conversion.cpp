#include "crosscurve/conversion.hpp"

#include <cmath>

#include "crosscurve/mc/philox.hpp"

namespace xc {

double q_spot(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
              std::span<const double> sy, double t) {
    require(t >= 0.0, "q_spot: negative time");
    return my.kernel_value(sy, t) / mx.kernel_value(sx, t);
}

double q_forward(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
                 std::span<const double> sy, double t, double T) {
    require(0.0 <= t && t <= T, "q_forward: need 0 <= t <= T");
    return my.kernel_value(sy, t) * my.conditional_bond(sy, t, T) /
           (mx.kernel_value(sx, t) * mx.conditional_bond(sx, t, T));
}

double quanto_bond(const KernelModel& mx, std::span<const double> sx, const KernelModel& my,
                   std::span<const double> sy, double t, double T) {
    require(0.0 <= t && t <= T, "quanto_bond: need 0 <= t <= T");
    const double via_forward =
        mx.conditional_bond(sx, t, T) * q_forward(mx, sx, my, sy, t, T);
    const double via_spot = q_spot(mx, sx, my, sy, t) * my.conditional_bond(sy, t, T);
    ensure(std::abs(via_forward - via_spot) <= 1e-12 * std::max(1.0, std::abs(via_spot)),
           "quanto bond representations disagree");
    return via_forward;
}

double across_curve_price(const KernelModel& mx, std::span<const double> sx,
                          const KernelModel& my, std::span<const double> sy, double s,
                          double fixing_time, double pay_time,
                          const DeflatedLinearPayoff& payoff) {
    require(0.0 <= s && s <= fixing_time && fixing_time <= pay_time,
            "across_curve_price: need s <= fixing time <= pay time");
    // h^x_t P^x_{tT} Q^{xy}_{tT} = h^y_t P^y_{tT}, so the conditional
    // expectation telescopes through the y-market martingales.
    double acc = 0.0;
    for (const auto& [maturity, coeff] : payoff.bond_terms) {
        require(maturity >= fixing_time, "payoff bond term matures before the fixing");
        acc += coeff * my.conditional_bond(sy, s, maturity);
    }
    return acc * my.kernel_value(sy, s) / mx.kernel_value(sx, s);
}

double across_curve_price_fixed(const KernelModel& mx, std::span<const double> sx, double s,
                                double pay_time, double frozen_q, double frozen_fixing) {
    require(s <= pay_time, "across_curve_price_fixed: s beyond pay time");
    return mx.conditional_bond(sx, s, pay_time) * frozen_q * frozen_fixing;
}

double across_curve_price_mc(const MarketSystem& system, int market_x, int market_y,
                             const State& joint_state, double s, double fixing_time,
                             double pay_time, const FixingFunction& fixing, int n_paths,
                             std::uint64_t seed, double dt) {
    require(0.0 <= s && s <= fixing_time && fixing_time <= pay_time,
            "across_curve_price_mc: need s <= fixing time <= pay time");
    const auto& mx = system.model(market_x);
    const auto& my = system.model(market_y);
    const double hx_s = mx.kernel_value(system.state_of(market_x, joint_state), s);

    if (fixing_time == s) {
        const auto sy = system.state_of(market_y, joint_state);
        return my.kernel_value(sy, s) * my.conditional_bond(sy, s, pay_time) *
               fixing(my, sy, s) / hx_s;
    }

    const NormalStream rng(seed);
    const int n_steps = std::max(1, static_cast<int>(std::ceil((fixing_time - s) / dt)));
    const double step = (fixing_time - s) / n_steps;
    std::vector<double> z(static_cast<std::size_t>(system.joint_noise_dim()));
    State work = joint_state;
    double sum = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        work = joint_state;
        double t = s;
        for (int k = 0; k < n_steps; ++k) {
            rng.fill(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k),
                     static_cast<std::uint32_t>(z.size()), z.data());
            system.evolve(work, t, step, z);
            t += step;
        }
        const auto sy = system.state_of(market_y, work);
        sum += my.kernel_value(sy, fixing_time) *
               my.conditional_bond(sy, fixing_time, pay_time) * fixing(my, sy, fixing_time);
    }
    return sum / (n_paths * hx_s);
}

}  // namespace xc
