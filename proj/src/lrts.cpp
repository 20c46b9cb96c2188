#include "crosscurve/lrts.hpp"

#include <algorithm>
#include <cmath>

namespace xc {

namespace {

// Deterministic part of the factor solution: D(t) = theta + e^{-kappa t}(Z_0 - theta).
std::vector<double> factor_mean(const LrtsSpec& s, double t) {
    std::vector<double> d(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        d[i] = s.theta[i] + std::exp(-s.kappa[i] * t) * (s.z0[i] - s.theta[i]);
    }
    return d;
}

}  // namespace

void LrtsSpec::validate() const {
    const std::size_t m = dim();
    require(m >= 1, "LRTS needs at least one factor");
    require(theta.size() == m && z0.size() == m && psi.size() == m && sigma.size() == m,
            "LRTS parameter vectors must share the dimension");
    double level = phi;
    for (std::size_t i = 0; i < m; ++i) {
        require(kappa[i] > 0.0, "kappa diagonal must be positive");
        require(theta[i] >= 0.0 && z0[i] >= 0.0, "factor space is the non-negative orthant");
        require(psi[i] >= 0.0, "psi must be non-negative to keep the kernel positive");
        require(sigma[i] >= 0.0, "sigma must be non-negative");
        // Feller-type condition keeps the square-root diffusion off the boundary.
        require(2.0 * kappa[i] * theta[i] >= sigma[i] * sigma[i] - 1e-12,
                "square-root diffusion violates the Feller condition");
        level += psi[i] * z0[i];
    }
    require(level > 0.0, "phi + psi.Z_0 must be positive");
}

LrtsModel::LrtsModel(LrtsSpec spec, std::string label)
    : KernelModel(std::move(label), spec.drift_offset), spec_(std::move(spec)) {
    spec_.validate();
}

std::vector<double> LrtsModel::factor(std::span<const double> state, double t) const {
    auto z = factor_mean(spec_, t);
    for (std::size_t i = 0; i < spec_.dim(); ++i) {
        z[i] += std::exp(-spec_.kappa[i] * t) * state[i];
    }
    return z;
}

double LrtsModel::zeta_normalised(std::span<const double> state, double t) const {
    const auto z = factor(state, t);
    double num = spec_.phi;
    double den = spec_.phi;
    for (std::size_t i = 0; i < spec_.dim(); ++i) {
        num += spec_.psi[i] * z[i];
        den += spec_.psi[i] * spec_.z0[i];
    }
    ensure(num > 0.0, "linear-rational kernel left the positive region");
    return std::exp(-spec_.alpha * t) * num / den;
}

double LrtsModel::base_kernel(std::span<const double> state, double t) const {
    return zeta_normalised(state, t);
}

double LrtsModel::conditional_bond(std::span<const double> state, double t, double T) const {
    require(0.0 <= t && t <= T, "conditional_bond: need 0 <= t <= T");
    const auto z = factor(state, t);
    double num = spec_.phi;
    double den = spec_.phi;
    for (std::size_t i = 0; i < spec_.dim(); ++i) {
        num += spec_.psi[i] *
               (spec_.theta[i] + std::exp(-spec_.kappa[i] * (T - t)) * (z[i] - spec_.theta[i]));
        den += spec_.psi[i] * z[i];
    }
    ensure(den > 0.0 && num > 0.0, "linear-rational bond left the positive region");
    return std::exp(-spec_.alpha * (T - t)) * num / den;
}

double LrtsModel::initial_df(double T) const {
    return conditional_bond(initial_state(), 0.0, T);
}

void LrtsModel::evolve(std::span<double> state, double t, double dt,
                       std::span<const double> z) const {
    // dA_i = e^{kappa_i t} sigma_i sqrt(Z_i^+) dW_i; the exponential factor is
    // deterministic, so A stays a martingale step by step.
    const auto zt = factor(state, t);
    const double sqdt = std::sqrt(dt);
    for (std::size_t i = 0; i < spec_.dim(); ++i) {
        const double pos = std::max(zt[i], 0.0);
        if (zt[i] < 0.0) ++boundary_hits_;
        state[i] += std::exp(spec_.kappa[i] * t) * spec_.sigma[i] * std::sqrt(pos) * sqdt * z[i];
    }
}

LrtsDecomposition lrts_decompose(const LrtsSpec& spec) {
    spec.validate();
    return LrtsDecomposition{spec};
}

double LrtsDecomposition::initial_df(double t) const {
    double num = spec.phi;
    double den = spec.phi;
    for (std::size_t i = 0; i < spec.dim(); ++i) {
        num += spec.psi[i] *
               (spec.theta[i] + std::exp(-spec.kappa[i] * t) * (spec.z0[i] - spec.theta[i]));
        den += spec.psi[i] * spec.z0[i];
    }
    return std::exp(-spec.alpha * t) * num / den;
}

std::vector<double> LrtsDecomposition::loading(double t) const {
    double den = spec.phi;
    for (std::size_t i = 0; i < spec.dim(); ++i) den += spec.psi[i] * spec.z0[i];
    std::vector<double> b(spec.dim());
    for (std::size_t i = 0; i < spec.dim(); ++i) {
        b[i] = std::exp(-spec.alpha * t) * spec.psi[i] * std::exp(-spec.kappa[i] * t) / den;
    }
    return b;
}

std::vector<double> LrtsDecomposition::loading_normalised(double t) const {
    auto b = loading(t);
    const double p = initial_df(t);
    for (auto& v : b) v /= p;
    return b;
}

double LrtsDecomposition::bond(std::span<const double> a_state, double t, double T) const {
    const auto bt = loading(t);
    const auto bT = loading(T);
    double num = initial_df(T);
    double den = initial_df(t);
    for (std::size_t i = 0; i < spec.dim(); ++i) {
        num += bT[i] * a_state[i];
        den += bt[i] * a_state[i];
    }
    ensure(num > 0.0 && den > 0.0, "additive form left the positive region");
    return num / den;
}

WhkSpec whk_build(const LrtsSpec& spec, std::vector<double> beta) {
    spec.validate();
    require(beta.size() == spec.dim(), "beta dimension mismatch");
    for (std::size_t i = 0; i < beta.size(); ++i) {
        require(beta[i] > 0.0, "beta diagonal must be positive");
        require(std::abs(beta[i] + spec.kappa[i]) > 1e-14, "beta + kappa must be invertible");
    }
    return WhkSpec{spec, std::move(beta)};
}

double WhkSpec::f0(double t) const {
    const auto f1_t = f1(t);
    double acc = std::exp(-lrts.alpha * t) * lrts.phi;
    for (std::size_t i = 0; i < lrts.dim(); ++i) {
        const double inv_diff = 1.0 / (beta[i] + lrts.kappa[i]) - 1.0 / beta[i];
        acc += f1_t[i] * inv_diff * std::exp(-beta[i] * t) * lrts.theta[i];
    }
    return acc;
}

std::vector<double> WhkSpec::f1(double t) const {
    std::vector<double> out(lrts.dim());
    for (std::size_t i = 0; i < lrts.dim(); ++i) {
        out[i] = std::exp(-lrts.alpha * t) * lrts.psi[i] * std::exp(beta[i] * t) *
                 (beta[i] + lrts.kappa[i]);
    }
    return out;
}

double WhkSpec::weight(std::size_t i, double t, double u) const {
    return std::exp(-beta[i] * (t + u));
}

double WhkSpec::value(std::span<const double> z_t, double t, int panels) const {
    // E[Z_{t+u} | F_t] = theta + e^{-kappa u}(Z_t - theta); integrand per
    // coordinate is w(t,u) * that.
    const double beta_min = *std::min_element(beta.begin(), beta.end());
    const double u_max = -std::log(1e-12) / beta_min;
    const auto f1_t = f1(t);

    auto integral_with = [&](int n_panels) {
        const double h = u_max / n_panels;
        double acc = 0.0;
        for (std::size_t i = 0; i < lrts.dim(); ++i) {
            auto g = [&](double u) {
                return weight(i, t, u) *
                       (lrts.theta[i] +
                        std::exp(-lrts.kappa[i] * u) * (z_t[i] - lrts.theta[i]));
            };
            double s = g(0.0) + g(u_max);
            for (int k = 1; k < n_panels; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * g(k * h);
            acc += f1_t[i] * s * h / 3.0;
        }
        return acc;
    };

    if (panels > 0) return f0(t) + integral_with(panels);

    int n = 64;
    double prev = integral_with(n);
    for (int round = 0; round < 12; ++round) {
        n *= 2;
        const double cur = integral_with(n);
        if (std::abs(cur - prev) < 1e-8) return f0(t) + cur;
        prev = cur;
    }
    return f0(t) + prev;
}

}  // namespace xc
