#include "crosscurve/rational.hpp"

#include <algorithm>
#include <cmath>

#include "crosscurve/mc/philox.hpp"

namespace xc {

namespace {

// The loading must keep 1 + b(t) A_t positive for drivers A > -1, which holds
// for 0 <= b(t) < 1. Parametric kinds are monotone or bounded, so a coarse
// scan over the horizon is a sound check.
void check_loading_range(const TimeFunction& b) {
    for (double t = 0.0; t <= 100.0; t += 0.25) {
        const double v = b(t);
        require(v >= 0.0 && v < 1.0, "factor loading must stay in [0, 1)");
    }
}

}  // namespace

RationalMultiplicativeModel::RationalMultiplicativeModel(Curve initial_curve,
                                                         std::vector<RationalFactor> factors,
                                                         double drift_offset)
    : KernelModel(initial_curve.label(), drift_offset),
      curve_(std::move(initial_curve)),
      factors_(std::move(factors)) {
    for (const auto& f : factors_) {
        require(f.vol >= 0.0, "factor vol must be non-negative");
        check_loading_range(f.loading);
    }
}

double RationalMultiplicativeModel::driver(std::span<const double> state, double t,
                                           std::size_t l) const {
    const double a = factors_[l].vol;
    return std::expm1(a * state[l] - 0.5 * a * a * t);
}

double RationalMultiplicativeModel::base_kernel(std::span<const double> state, double t) const {
    double h = curve_.df(t);
    for (std::size_t l = 0; l < factors_.size(); ++l) {
        const double z = 1.0 + factors_[l].loading(t) * driver(state, t, l);
        ensure(z > 0.0, "rational factor turned non-positive");
        h *= z;
    }
    return h;
}

double RationalMultiplicativeModel::conditional_bond(std::span<const double> state, double t,
                                                     double T) const {
    require(0.0 <= t && t <= T, "conditional_bond: need 0 <= t <= T");
    double num = curve_.df(T);
    double den = curve_.df(t);
    for (std::size_t l = 0; l < factors_.size(); ++l) {
        const double a = driver(state, t, l);
        num *= 1.0 + factors_[l].loading(T) * a;
        den *= 1.0 + factors_[l].loading(t) * a;
    }
    ensure(num > 0.0 && den > 0.0, "rational bond factor turned non-positive");
    return num / den;
}

void RationalMultiplicativeModel::evolve(std::span<double> state, double /*t*/, double dt,
                                         std::span<const double> z) const {
    const double s = std::sqrt(dt);
    for (std::size_t l = 0; l < factors_.size(); ++l) state[l] += s * z[l];
}

RationalShortRate short_rate_rational(const RationalMultiplicativeModel& model,
                                      std::span<const double> state, double t) {
    RationalShortRate out;
    out.curve_part = -model.curve().log_df_slope(t);
    double sum = 0.0;
    const auto& factors = model.factors();
    out.thetas.resize(factors.size());
    for (std::size_t l = 0; l < factors.size(); ++l) {
        const double a = model.driver(state, t, l);
        out.thetas[l] = factors[l].loading.derivative(t) * a / (1.0 + factors[l].loading(t) * a);
        sum += out.thetas[l];
    }
    out.rate = out.curve_part - sum;
    return out;
}

SpreadDecomposition rational_spread(const RationalMultiplicativeModel& shorter,
                                    const RationalMultiplicativeModel& longer,
                                    std::span<const double> state_longer, double t, double T) {
    require(0.0 <= t && t <= T, "rational_spread: need 0 <= t <= T");
    const auto& fs = shorter.factors();
    const auto& fl = longer.factors();
    require(fl.size() >= fs.size(), "longer-tenor model must extend the shorter one");
    for (std::size_t l = 0; l < fs.size(); ++l) {
        const bool same = fs[l].vol == fl[l].vol &&
                          fs[l].loading.kind_name() == fl[l].loading.kind_name() &&
                          fs[l].loading.param_a() == fl[l].loading.param_a() &&
                          fs[l].loading.param_b() == fl[l].loading.param_b();
        require(same, "shared factors of the two tenor models differ");
    }

    SpreadDecomposition out;
    out.curve_ratio = (shorter.curve().df(t) / longer.curve().df(t)) *
                      (longer.curve().df(T) / shorter.curve().df(T));
    out.stochastic_delta = 1.0;
    for (std::size_t l = fs.size(); l < fl.size(); ++l) {
        const double a = longer.driver(state_longer, t, l);
        out.stochastic_delta *= (1.0 + fl[l].loading(T) * a) / (1.0 + fl[l].loading(t) * a);
    }
    out.spread = out.curve_ratio * out.stochastic_delta;
    return out;
}

AdditiveRationalModel::AdditiveRationalModel(Curve initial_curve, TimeFunction loading, double vol,
                                             double drift_offset)
    : KernelModel(initial_curve.label(), drift_offset),
      curve_(std::move(initial_curve)),
      loading_(std::move(loading)),
      vol_(vol) {
    require(vol_ >= 0.0, "driver vol must be non-negative");
    for (double t = 0.0; t <= 100.0; t += 0.25) {
        const double b = loading_(t);
        require(b >= 0.0 && b < curve_.df(t), "additive loading must stay in [0, P_{0t})");
    }
}

double AdditiveRationalModel::base_kernel(std::span<const double> state, double t) const {
    const double a = std::expm1(vol_ * state[0] - 0.5 * vol_ * vol_ * t);
    const double h = curve_.df(t) + loading_(t) * a;
    ensure(h > 0.0, "additive kernel turned non-positive");
    return h;
}

double AdditiveRationalModel::conditional_bond(std::span<const double> state, double t,
                                               double T) const {
    require(0.0 <= t && t <= T, "conditional_bond: need 0 <= t <= T");
    const double a = std::expm1(vol_ * state[0] - 0.5 * vol_ * vol_ * t);
    const double num = curve_.df(T) + loading_(T) * a;
    const double den = curve_.df(t) + loading_(t) * a;
    ensure(num > 0.0 && den > 0.0, "additive bond turned non-positive");
    return num / den;
}

void AdditiveRationalModel::evolve(std::span<double> state, double /*t*/, double dt,
                                   std::span<const double> z) const {
    state[0] += std::sqrt(dt) * z[0];
}

double additive_rational_bond(double p0_t, double p0_T, std::span<const double> b_t,
                              std::span<const double> b_T, std::span<const double> a_state) {
    double num = p0_T;
    double den = p0_t;
    for (std::size_t i = 0; i < a_state.size(); ++i) {
        num += b_T[i] * a_state[i];
        den += b_t[i] * a_state[i];
    }
    ensure(num > 0.0 && den > 0.0, "additive bond form turned non-positive");
    return num / den;
}

DerivedKernelModel::DerivedKernelModel(KernelModelPtr base, Transform transform, double param,
                                       McSettings mc)
    : KernelModel("derived_" + base->label(), 0.0),
      base_(std::move(base)),
      transform_(transform),
      param_(param),
      mc_(mc) {
    if (transform_ == Transform::Scale) require(param_ > 0.0, "scale must be positive");
    if (transform_ == Transform::Power) require(param_ > 0.0, "power must be positive");
}

double DerivedKernelModel::transform_value(double h) const {
    ensure(h > 0.0, "derived transform needs a positive kernel");
    switch (transform_) {
        case Transform::Identity: return h;
        case Transform::Scale: return param_ * h;
        case Transform::Power: return std::pow(h, param_);
    }
    return h;
}

double DerivedKernelModel::base_kernel(std::span<const double> state, double t) const {
    // Normalised so that h_0 = 1; scales cancel in every bond and conversion.
    return transform_value(base_->kernel_value(state, t)) / transform_value(1.0);
}

double DerivedKernelModel::conditional_bond(std::span<const double> state, double t,
                                            double T) const {
    require(0.0 <= t && t <= T, "conditional_bond: need 0 <= t <= T");
    if (transform_ == Transform::Identity || transform_ == Transform::Scale ||
        param_ == 1.0) {
        return base_->conditional_bond(state, t, T);
    }
    if (t == T) return 1.0;
    // Nested Monte Carlo over the base model's own evolution.
    const NormalStream rng(mc_.seed);
    const int n_steps = std::max(1, static_cast<int>(std::ceil((T - t) / mc_.dt)));
    const double dt = (T - t) / n_steps;
    const int nd = base_->noise_dim();
    std::vector<double> z(static_cast<std::size_t>(nd));
    State work(state.begin(), state.end());
    double sum = 0.0;
    for (int p = 0; p < mc_.paths; ++p) {
        std::copy(state.begin(), state.end(), work.begin());
        double s = t;
        for (int k = 0; k < n_steps; ++k) {
            rng.fill(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k),
                     static_cast<std::uint32_t>(nd), z.data());
            base_->evolve(work, s, dt, z);
            s += dt;
        }
        sum += transform_value(base_->kernel_value(work, T));
    }
    return (sum / mc_.paths) / transform_value(base_->kernel_value(state, t));
}

double DerivedKernelModel::initial_df(double T) const {
    return conditional_bond(initial_state(), 0.0, T);
}

}  // namespace xc
