#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "crosscurve/common.hpp"

namespace xc {

// Small family of deterministic functions of time used for factor loadings,
// short rates and market prices of risk. The parametric kinds carry analytic
// derivatives; Custom falls back to a central difference with step 1e-6.
class TimeFunction {
  public:
    TimeFunction() : kind_(Kind::Constant), a_(0.0), b_(0.0) {}

    static TimeFunction constant(double v) { return TimeFunction(Kind::Constant, v, 0.0); }
    static TimeFunction linear(double intercept, double slope) {
        return TimeFunction(Kind::Linear, intercept, slope);
    }
    // a * exp(-b t)
    static TimeFunction exp_decay(double value0, double rate) {
        return TimeFunction(Kind::ExpDecay, value0, rate);
    }
    // a * (1 - exp(-b t)); vanishes at t = 0 and saturates at a.
    static TimeFunction one_minus_exp(double scale, double rate) {
        return TimeFunction(Kind::OneMinusExp, scale, rate);
    }
    static TimeFunction custom(std::function<double(double)> f,
                               std::optional<std::function<double(double)>> df = std::nullopt) {
        TimeFunction out(Kind::Custom, 0.0, 0.0);
        out.f_ = std::move(f);
        out.df_ = std::move(df);
        return out;
    }

    double operator()(double t) const {
        switch (kind_) {
            case Kind::Constant: return a_;
            case Kind::Linear: return a_ + b_ * t;
            case Kind::ExpDecay: return a_ * std::exp(-b_ * t);
            case Kind::OneMinusExp: return a_ * (1.0 - std::exp(-b_ * t));
            case Kind::Custom: return f_(t);
        }
        return 0.0;
    }

    double derivative(double t) const {
        switch (kind_) {
            case Kind::Constant: return 0.0;
            case Kind::Linear: return b_;
            case Kind::ExpDecay: return -a_ * b_ * std::exp(-b_ * t);
            case Kind::OneMinusExp: return a_ * b_ * std::exp(-b_ * t);
            case Kind::Custom:
                if (df_) return (*df_)(t);
                return ((*this)(t + kFdStep) - (*this)(std::max(0.0, t - kFdStep))) /
                       (t >= kFdStep ? 2.0 * kFdStep : t + kFdStep);
        }
        return 0.0;
    }

    bool is_constant() const { return kind_ == Kind::Constant || (kind_ == Kind::Linear && b_ == 0.0); }

    // Serialization handles the parametric kinds only.
    std::string kind_name() const;
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    static TimeFunction from_kind(const std::string& kind, double a, double b);

  private:
    enum class Kind { Constant, Linear, ExpDecay, OneMinusExp, Custom };
    static constexpr double kFdStep = 1e-6;

    TimeFunction(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

    Kind kind_;
    double a_, b_;
    std::function<double(double)> f_;
    std::optional<std::function<double(double)>> df_;
};

inline std::string TimeFunction::kind_name() const {
    switch (kind_) {
        case Kind::Constant: return "const";
        case Kind::Linear: return "linear";
        case Kind::ExpDecay: return "exp_decay";
        case Kind::OneMinusExp: return "one_minus_exp";
        case Kind::Custom: return "custom";
    }
    return "const";
}

inline TimeFunction TimeFunction::from_kind(const std::string& kind, double a, double b) {
    if (kind == "const") return constant(a);
    if (kind == "linear") return linear(a, b);
    if (kind == "exp_decay") return exp_decay(a, b);
    if (kind == "one_minus_exp") return one_minus_exp(a, b);
    throw std::invalid_argument("unknown time function kind: " + kind);
}

}  // namespace xc
