#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crosscurve/kernel_model.hpp"
#include "crosscurve/time_fn.hpp"

namespace xc {

// One bond-volatility component sigma(t,u) = scale * exp(-decay (u - t));
// its maturity integral Sigma_{tT} is closed-form.
struct HjmVol {
    double scale = 0.0;
    double decay = 0.0;

    double operator()(double t, double u) const;
    double integrated(double t, double T) const;  // int_t^T sigma(t,u) du
};

// Gaussian market under the pricing-kernel HJM dynamics
//   dh/h = -r dt - lambda dW,   dP_/P = (r - A + |Sigma|^2/2 - lambda Sigma) dt - Sigma dW,
// with deterministic r, lambda, sigma. The state carries ln h, the log bonds
// on a fixed maturity grid and the instantaneous forwards at the same
// maturities. With frozen per-step coefficients the log-Euler increments are
// exact in distribution, so h P_{tT} is a discrete-time martingale at any dt.
//
// The y-market of a pair loads on the shared Brownian coordinates first
// (sigma over `shared` components) and its idiosyncratic ones after. Its
// maturity drift A is either the classical drift condition |Sigma|^2/2 or the
// tenor-recursion that makes h^x P^x v^y driftless; the recursion needs the
// x-market vols and the idiosyncratic risk premia.
struct HjmSpec {
    std::string label;
    Curve initial_curve;
    TimeFunction short_rate;
    std::vector<HjmVol> sigma;      // all loadings, shared coordinates first
    std::vector<double> lambda;     // market price of risk per coordinate
    std::vector<double> maturities; // bond grid, strictly increasing

    enum class DriftMode { Classical, TenorRecursion };
    DriftMode drift_mode = DriftMode::Classical;
    int shared = -1;                    // # shared coordinates (default: all)
    std::vector<HjmVol> x_sigma;        // x-market vols, TenorRecursion only
    double drift_offset = 0.0;
};

class HjmMarketModel final : public KernelModel {
  public:
    explicit HjmMarketModel(HjmSpec spec);

    int state_dim() const override;
    int noise_dim() const override { return static_cast<int>(spec_.sigma.size()); }
    State initial_state() const override;

    double conditional_bond(std::span<const double> state, double t, double T) const override;
    double initial_df(double T) const override { return spec_.initial_curve.df(T); }
    void evolve(std::span<double> state, double t, double dt,
                std::span<const double> z) const override;

    std::optional<double> deterministic_short_rate(double t) const override {
        return spec_.short_rate(t);
    }

    double forward_rate(std::span<const double> state, std::size_t maturity_index) const;
    const HjmSpec& spec() const { return spec_; }

    // Maturity drift A_{tT} for grid node j under the configured mode.
    double maturity_drift(double t, std::size_t j) const;

    // Integrated vol vector Sigma_{tT} over all coordinates.
    std::vector<double> integrated_vol(double t, double T) const;

  private:
    double base_kernel(std::span<const double> state, double t) const override;

    HjmSpec spec_;
};

// Residual of the tenor parameter restriction at (t; T_prev, T_next):
// [A^y_{tT_next} - A^y_{tT_prev}] - [ -|S^y_n - S^y_p|^2/2
//   + S^x_n (S^w_n - S^w_p) - lambda^z (S^z_n - S^z_p) ].
// Zero means h^x P^x_{tT_next} v^y(T_prev,T_next) is driftless.
double model_ii_restriction(const HjmMarketModel& y_model, double t, double t_prev,
                            double t_next);

// One-step comparison of the simulated conversion-factor increments against
// the displayed SDE (log form, same noise), plus the exact coordinate
// identity lambda^x dW^x - lambda^y dW^y = -lambda^z dZ.
struct QDynamicsReport {
    double max_abs_log_error;       // forward Q, engine vs SDE discretisation
    double max_abs_spot_log_error;  // spot Q
    double max_coordinate_residual;
    int steps;
};

QDynamicsReport hjm_q_dynamics_check(const HjmMarketModel& x_model, const HjmMarketModel& y_model,
                                     double maturity, double dt, int n_steps,
                                     std::uint64_t seed);

}  // namespace xc
