#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crosscurve/common.hpp"
#include "crosscurve/curve.hpp"

namespace xc {

using State = std::vector<double>;

// A market's pricing kernel model: positive process h_t with h_0 = 1 and
// conditional bond prices P_{tT} = E[h_T | F_t] / h_t. Evolution is pure in
// (state, noise), so paths parallelise freely.
//
// `drift_offset` multiplies the kernel by exp(offset * t). Zero in any real
// configuration; nonzero values break the martingale property of h_t P_{tT}
// on purpose and exist as negative controls for the diagnostics engine.
class KernelModel {
  public:
    KernelModel(std::string label, double drift_offset)
        : label_(std::move(label)), drift_offset_(drift_offset) {}
    virtual ~KernelModel() = default;

    const std::string& label() const { return label_; }
    double drift_offset() const { return drift_offset_; }

    virtual int state_dim() const = 0;
    virtual int noise_dim() const = 0;
    virtual State initial_state() const = 0;

    double kernel_value(std::span<const double> state, double t) const {
        const double h = base_kernel(state, t);
        ensure(h > 0.0, "kernel value not positive for model " + label_);
        return drift_offset_ == 0.0 ? h : h * std::exp(drift_offset_ * t);
    }

    virtual double conditional_bond(std::span<const double> state, double t, double T) const = 0;

    // Initial term structure P_{0T}.
    virtual double initial_df(double T) const = 0;

    // One step with standard normal draws z (length noise_dim).
    virtual void evolve(std::span<double> state, double t, double dt,
                        std::span<const double> z) const = 0;

    // Set when r_t is a deterministic function of time; enables the
    // discount-factor/density factorisation used by the measure diagnostics.
    virtual std::optional<double> deterministic_short_rate(double /*t*/) const {
        return std::nullopt;
    }

  private:
    virtual double base_kernel(std::span<const double> state, double t) const = 0;

    std::string label_;
    double drift_offset_;
};

using KernelModelPtr = std::shared_ptr<const KernelModel>;

// Deterministic market: h_t = P_{0t}, P_{tT} = P_{0T}/P_{0t}. Bridges plain
// curves (e.g. bootstrap output) into every model-based pricer.
class DeterministicKernelModel final : public KernelModel {
  public:
    explicit DeterministicKernelModel(Curve curve, double drift_offset = 0.0)
        : KernelModel(curve.label(), drift_offset), curve_(std::move(curve)) {}

    int state_dim() const override { return 0; }
    int noise_dim() const override { return 0; }
    State initial_state() const override { return {}; }

    double conditional_bond(std::span<const double>, double t, double T) const override {
        require(0.0 <= t && t <= T, "conditional_bond: need 0 <= t <= T");
        return curve_.df(T) / curve_.df(t);
    }

    double initial_df(double T) const override { return curve_.df(T); }

    void evolve(std::span<double>, double, double, std::span<const double>) const override {}

    std::optional<double> deterministic_short_rate(double t) const override {
        return -curve_.log_df_slope(t);
    }

    const Curve& curve() const { return curve_; }

  private:
    double base_kernel(std::span<const double>, double t) const override { return curve_.df(t); }

    Curve curve_;
};

}  // namespace xc
