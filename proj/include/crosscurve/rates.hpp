#pragma once

#include "crosscurve/common.hpp"
#include "crosscurve/curve.hpp"

namespace xc {

// Simple spot rate implied by a discount factor over an accrual period:
// L = (1/P - 1) / delta.
inline double spot_ibor(double df_value, double delta) {
    require(df_value > 0.0, "spot_ibor: discount factor must be positive");
    require(delta > 0.0, "spot_ibor: accrual must be positive");
    return (1.0 / df_value - 1.0) / delta;
}

// Forward capitalisation factor v = 1 + delta * rate.
inline double fcf(double rate, double delta) {
    require(delta > 0.0, "fcf: accrual must be positive");
    require(rate > -1.0 / delta, "fcf: rate at or below -1/delta");
    return 1.0 + delta * rate;
}

// Single-curve forward rate over [T_prev, T_next] off an initial curve.
inline double forward_ibor_single_curve(const Curve& curve, double t_prev, double t_next) {
    require(t_prev >= 0.0 && t_next > t_prev, "forward_ibor: need 0 <= T_prev < T_next");
    return (curve.df(t_prev) / curve.df(t_next) - 1.0) / (t_next - t_prev);
}

}  // namespace xc
