#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crosscurve/kernel_model.hpp"
#include "crosscurve/time_fn.hpp"

namespace xc {

// One multiplicative factor (1 + b(t) A_t) with A_t = exp(a W_t - a^2 t/2) - 1
// an exponential-martingale driver; drivers across factors are independent.
struct RationalFactor {
    TimeFunction loading;  // b(t), constrained to [0, 1) so 1 + b A > 0
    double vol;            // a
};

// Multiplicative rational kernel h_t = P_{0t} prod_l (1 + b_l(t) A_{t,l}).
// Conditional bonds are closed-form because the drivers are independent
// martingales. State = the Brownian coordinates W_l.
class RationalMultiplicativeModel final : public KernelModel {
  public:
    RationalMultiplicativeModel(Curve initial_curve, std::vector<RationalFactor> factors,
                                double drift_offset = 0.0);

    int state_dim() const override { return static_cast<int>(factors_.size()); }
    int noise_dim() const override { return static_cast<int>(factors_.size()); }
    State initial_state() const override { return State(factors_.size(), 0.0); }

    double conditional_bond(std::span<const double> state, double t, double T) const override;
    double initial_df(double T) const override { return curve_.df(T); }
    void evolve(std::span<double> state, double t, double dt,
                std::span<const double> z) const override;

    // A_{t,l} for the stored Brownian coordinate.
    double driver(std::span<const double> state, double t, std::size_t l) const;

    const Curve& curve() const { return curve_; }
    const std::vector<RationalFactor>& factors() const { return factors_; }

  private:
    double base_kernel(std::span<const double> state, double t) const override;

    Curve curve_;
    std::vector<RationalFactor> factors_;
};

// Short rate r_t = -(d/dt ln P_{0t} + sum_l theta_{t,l}) of the multiplicative
// model, with the per-factor components returned alongside.
struct RationalShortRate {
    double rate;
    double curve_part;           // -d/dt ln P_{0t}
    std::vector<double> thetas;  // theta_{t,l} = b'_l(t) A_{t,l} / (1 + b_l(t) A_{t,l})
};

RationalShortRate short_rate_rational(const RationalMultiplicativeModel& model,
                                      std::span<const double> state, double t);

// Spread P^{y+}_{tT} / P^y_{tT} between two ladder models sharing their first
// factors; the extra factors of `longer` carry the stochastic part.
struct SpreadDecomposition {
    double spread;
    double curve_ratio;       // (P^y_{0t}/P^{y+}_{0t}) * (P^{y+}_{0T}/P^y_{0T})
    double stochastic_delta;  // prod over extra factors of (1+b(T)A)/(1+b(t)A)
};

SpreadDecomposition rational_spread(const RationalMultiplicativeModel& shorter,
                                    const RationalMultiplicativeModel& longer,
                                    std::span<const double> state_longer, double t, double T);

// One-factor additive rational kernel h_t = P_{0t} + b(t) A_t with the same
// exponential-martingale driver. b(t) must stay inside [0, P_{0t}).
class AdditiveRationalModel final : public KernelModel {
  public:
    AdditiveRationalModel(Curve initial_curve, TimeFunction loading, double vol,
                          double drift_offset = 0.0);

    int state_dim() const override { return 1; }
    int noise_dim() const override { return 1; }
    State initial_state() const override { return {0.0}; }

    double conditional_bond(std::span<const double> state, double t, double T) const override;
    double initial_df(double T) const override { return curve_.df(T); }
    void evolve(std::span<double> state, double t, double dt,
                std::span<const double> z) const override;

    const Curve& curve() const { return curve_; }
    const TimeFunction& loading() const { return loading_; }
    double vol() const { return vol_; }

  private:
    double base_kernel(std::span<const double> state, double t) const override;

    Curve curve_;
    TimeFunction loading_;
    double vol_;
};

// Additive-rational bond form with an m-dimensional martingale state:
// (P_{0T} + b(T).A) / (P_{0t} + b(t).A).
double additive_rational_bond(double p0_t, double p0_T, std::span<const double> b_t,
                              std::span<const double> b_T, std::span<const double> a_state);

// Kernel estimated from a liquid tenor: h^y_t = f(h^{y*}_t) / f(1), with the
// derived bond E[f(h^{y*}_T)|F_t] / f(h^{y*}_t) closed-form for linear f and
// nested Monte Carlo otherwise.
class DerivedKernelModel final : public KernelModel {
  public:
    enum class Transform { Identity, Scale, Power };

    struct McSettings {
        int paths = 20000;
        double dt = 1.0 / 250.0;
        std::uint64_t seed = 0x9d2c5680;
    };

    DerivedKernelModel(KernelModelPtr base, Transform transform, double param)
        : DerivedKernelModel(std::move(base), transform, param, McSettings()) {}
    DerivedKernelModel(KernelModelPtr base, Transform transform, double param, McSettings mc);

    int state_dim() const override { return base_->state_dim(); }
    int noise_dim() const override { return base_->noise_dim(); }
    State initial_state() const override { return base_->initial_state(); }

    double conditional_bond(std::span<const double> state, double t, double T) const override;
    double initial_df(double T) const override;
    void evolve(std::span<double> state, double t, double dt,
                std::span<const double> z) const override {
        base_->evolve(state, t, dt, z);
    }

    double transform_value(double h) const;
    const KernelModel& base() const { return *base_; }

  private:
    double base_kernel(std::span<const double> state, double t) const override;

    KernelModelPtr base_;
    Transform transform_;
    double param_;
    McSettings mc_;
};

}  // namespace xc
