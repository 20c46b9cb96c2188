#include "crosscurve/hjm.hpp"

#include <algorithm>
#include <cmath>

#include "crosscurve/market_system.hpp"
#include "crosscurve/mc/philox.hpp"

namespace xc {

double HjmVol::operator()(double t, double u) const {
    return scale * std::exp(-decay * (u - t));
}

double HjmVol::integrated(double t, double T) const {
    if (decay == 0.0) return scale * (T - t);
    return scale * (1.0 - std::exp(-decay * (T - t))) / decay;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// RHS of the tenor restriction between two maturities, all vectors taken at
// observation time t.
double tenor_restriction_rhs(const HjmSpec& spec, double t, double t_prev, double t_next) {
    const std::size_t dim = spec.sigma.size();
    const std::size_t shared = static_cast<std::size_t>(spec.shared);
    std::vector<double> s_next(dim), s_prev(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        s_next[k] = spec.sigma[k].integrated(t, t_next);
        s_prev[k] = spec.sigma[k].integrated(t, t_prev);
    }
    double norm2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = s_next[k] - s_prev[k];
        norm2 += d * d;
    }
    double x_term = 0.0;
    for (std::size_t k = 0; k < shared; ++k) {
        x_term += spec.x_sigma[k].integrated(t, t_next) * (s_next[k] - s_prev[k]);
    }
    double z_term = 0.0;
    for (std::size_t k = shared; k < dim; ++k) {
        z_term += spec.lambda[k] * (s_next[k] - s_prev[k]);
    }
    return -0.5 * norm2 + x_term - z_term;
}

}  // namespace

HjmMarketModel::HjmMarketModel(HjmSpec spec) : KernelModel(spec.label, spec.drift_offset),
                                               spec_(std::move(spec)) {
    require(!spec_.sigma.empty(), "HJM market needs at least one volatility component");
    require(spec_.lambda.size() == spec_.sigma.size(),
            "lambda dimension must match the volatility dimension");
    require(spec_.maturities.size() >= 2, "HJM maturity grid needs at least two nodes");
    for (std::size_t j = 1; j < spec_.maturities.size(); ++j) {
        require(spec_.maturities[j] > spec_.maturities[j - 1],
                "HJM maturity grid must be strictly increasing");
    }
    if (spec_.shared < 0) spec_.shared = static_cast<int>(spec_.sigma.size());
    require(spec_.shared <= static_cast<int>(spec_.sigma.size()), "bad shared coordinate count");
    if (spec_.drift_mode == HjmSpec::DriftMode::TenorRecursion) {
        require(spec_.x_sigma.size() == static_cast<std::size_t>(spec_.shared),
                "tenor recursion needs the x-market vols on the shared coordinates");
    }
}

int HjmMarketModel::state_dim() const {
    return 1 + 2 * static_cast<int>(spec_.maturities.size());
}

State HjmMarketModel::initial_state() const {
    const std::size_t m = spec_.maturities.size();
    State s(1 + 2 * m);
    s[0] = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        s[1 + j] = std::log(spec_.initial_curve.df(spec_.maturities[j]));
        s[1 + m + j] = -spec_.initial_curve.log_df_slope(spec_.maturities[j]);
    }
    return s;
}

double HjmMarketModel::base_kernel(std::span<const double> state, double /*t*/) const {
    return std::exp(state[0]);
}

double HjmMarketModel::conditional_bond(std::span<const double> state, double t, double T) const {
    require(0.0 <= t && t <= T, "conditional_bond: need 0 <= t <= T");
    if (T - t < 1e-12) return 1.0;
    const auto& mats = spec_.maturities;
    const std::size_t m = mats.size();
    // Log-linear in maturity through (t, 0) and the live grid nodes.
    double t_lo = t, lnp_lo = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (mats[j] <= t + 1e-12) continue;
        if (std::abs(mats[j] - T) < 1e-9) return std::exp(state[1 + j]);
        if (mats[j] < T) {
            t_lo = mats[j];
            lnp_lo = state[1 + j];
            continue;
        }
        const double w = (T - t_lo) / (mats[j] - t_lo);
        return std::exp(lnp_lo + w * (state[1 + j] - lnp_lo));
    }
    ensure(false, "bond maturity beyond the simulated grid");
    return 0.0;
}

double HjmMarketModel::forward_rate(std::span<const double> state,
                                    std::size_t maturity_index) const {
    return state[1 + spec_.maturities.size() + maturity_index];
}

std::vector<double> HjmMarketModel::integrated_vol(double t, double T) const {
    std::vector<double> out(spec_.sigma.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec_.sigma[k].integrated(t, T);
    return out;
}

double HjmMarketModel::maturity_drift(double t, std::size_t j) const {
    const auto& mats = spec_.maturities;
    if (spec_.drift_mode == HjmSpec::DriftMode::Classical) {
        const auto s = integrated_vol(t, mats[j]);
        return 0.5 * dot(s, s);
    }
    // Tenor recursion: classical value at the first node, restriction
    // increments across the grid.
    const auto s0 = integrated_vol(t, mats[0]);
    double a = 0.5 * dot(s0, s0);
    for (std::size_t k = 1; k <= j; ++k) {
        a += tenor_restriction_rhs(spec_, t, mats[k - 1], mats[k]);
    }
    return a;
}

void HjmMarketModel::evolve(std::span<double> state, double t, double dt,
                            std::span<const double> z) const {
    const std::size_t dim = spec_.sigma.size();
    const std::size_t m = spec_.maturities.size();
    const double sqdt = std::sqrt(dt);
    std::vector<double> dw(dim);
    for (std::size_t k = 0; k < dim; ++k) dw[k] = sqdt * z[k];

    const double r = spec_.short_rate(t);
    double lam2 = 0.0, lam_dw = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        lam2 += spec_.lambda[k] * spec_.lambda[k];
        lam_dw += spec_.lambda[k] * dw[k];
    }
    state[0] += (-r - 0.5 * lam2) * dt - lam_dw;

    std::vector<double> sig(dim);
    for (std::size_t j = 0; j < m; ++j) {
        const double T = spec_.maturities[j];
        if (T <= t + 1e-12) continue;  // matured node stays frozen
        for (std::size_t k = 0; k < dim; ++k) sig[k] = spec_.sigma[k].integrated(t, T);
        const double a = maturity_drift(t, j);
        double lam_sig = 0.0, sig_dw = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            lam_sig += spec_.lambda[k] * sig[k];
            sig_dw += sig[k] * dw[k];
        }
        state[1 + j] += (r - a - lam_sig) * dt - sig_dw;

        if (spec_.drift_mode == HjmSpec::DriftMode::Classical) {
            double point_sig_dot = 0.0, point_lam = 0.0, point_dw = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double pv = spec_.sigma[k](t, T);
                point_sig_dot += pv * sig[k];
                point_lam += spec_.lambda[k] * pv;
                point_dw += pv * dw[k];
            }
            state[1 + m + j] += (point_sig_dot + point_lam) * dt + point_dw;
        }
    }
}

double model_ii_restriction(const HjmMarketModel& y_model, double t, double t_prev,
                            double t_next) {
    require(t <= t_prev && t_prev <= t_next, "model_ii_restriction: need t <= T_prev <= T_next");
    if (t_prev == t_next) return 0.0;
    const auto& spec = y_model.spec();
    const auto& mats = spec.maturities;
    auto drift_at = [&](double T) {
        if (spec.drift_mode == HjmSpec::DriftMode::Classical) {
            const auto s = y_model.integrated_vol(t, T);
            return 0.5 * dot(s, s);
        }
        for (std::size_t j = 0; j < mats.size(); ++j) {
            if (std::abs(mats[j] - T) < 1e-9) return y_model.maturity_drift(t, j);
        }
        throw std::invalid_argument("tenor-recursion drift is defined on grid nodes only");
    };
    const double lhs = drift_at(t_next) - drift_at(t_prev);
    return lhs - tenor_restriction_rhs(spec, t, t_prev, t_next);
}

QDynamicsReport hjm_q_dynamics_check(const HjmMarketModel& x_model, const HjmMarketModel& y_model,
                                     double maturity, double dt, int n_steps,
                                     std::uint64_t seed) {
    const auto& xs = x_model.spec();
    const auto& ys = y_model.spec();
    const std::size_t n = xs.sigma.size();
    const std::size_t dim_y = ys.sigma.size();
    require(static_cast<std::size_t>(ys.shared) == n, "y-market must share the x coordinates");
    for (std::size_t k = 0; k < n; ++k) {
        require(xs.lambda[k] == ys.lambda[k], "shared risk premia must coincide");
    }

    MarketSystem system;
    std::vector<int> x_idx(n), y_idx(dim_y);
    for (std::size_t k = 0; k < n; ++k) x_idx[k] = static_cast<int>(k);
    for (std::size_t k = 0; k < dim_y; ++k) y_idx[k] = static_cast<int>(k);
    auto xp = std::make_shared<HjmMarketModel>(xs);
    auto yp = std::make_shared<HjmMarketModel>(ys);
    system.add_market(xp, x_idx);
    system.add_market(yp, y_idx);

    State joint = system.initial_state();
    const NormalStream rng(seed);
    std::vector<double> z(dim_y);

    QDynamicsReport rep{0.0, 0.0, 0.0, n_steps};
    double t = 0.0;
    for (int step = 0; step < n_steps; ++step) {
        const auto sx = system.state_of(0, joint);
        const auto sy = system.state_of(1, joint);
        const double lnq_fwd_0 =
            std::log(y_model.kernel_value(sy, t) * y_model.conditional_bond(sy, t, maturity)) -
            std::log(x_model.kernel_value(sx, t) * x_model.conditional_bond(sx, t, maturity));
        const double lnq_spot_0 =
            std::log(y_model.kernel_value(sy, t)) - std::log(x_model.kernel_value(sx, t));

        rng.fill(0, static_cast<std::uint64_t>(step), static_cast<std::uint32_t>(dim_y),
                 z.data());
        std::vector<double> dw(dim_y);
        for (std::size_t k = 0; k < dim_y; ++k) dw[k] = std::sqrt(dt) * z[k];

        // Displayed SDE, in log form, with coefficients frozen at the step start.
        const auto sig_x = x_model.integrated_vol(t, maturity);
        const auto sig_y = y_model.integrated_vol(t, maturity);
        double drift = 0.0, noise = 0.0, spot_noise = 0.0, lam_z2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double dvol = sig_x[k] - sig_y[k];
            drift += dvol * (sig_x[k] + xs.lambda[k]) - 0.5 * dvol * dvol;
            noise += dvol * dw[k];
        }
        for (std::size_t k = n; k < dim_y; ++k) {
            const double v = sig_y[k] + ys.lambda[k];
            drift -= 0.5 * v * v;
            noise -= v * dw[k];
            spot_noise -= ys.lambda[k] * dw[k];
            lam_z2 += ys.lambda[k] * ys.lambda[k];
        }
        const double sde_fwd = drift * dt + noise;
        const double sde_spot =
            (xs.short_rate(t) - ys.short_rate(t) - 0.5 * lam_z2) * dt + spot_noise;

        // Coordinate identity lambda^x dW^x - lambda^y dW^y = -lambda^z dZ.
        double coord = 0.0;
        for (std::size_t k = 0; k < n; ++k) coord += xs.lambda[k] * dw[k];
        for (std::size_t k = 0; k < dim_y; ++k) coord -= ys.lambda[k] * dw[k];
        for (std::size_t k = n; k < dim_y; ++k) coord += ys.lambda[k] * dw[k];
        rep.max_coordinate_residual = std::max(rep.max_coordinate_residual, std::abs(coord));

        system.evolve(joint, t, dt, z);
        t += dt;

        const auto sx1 = system.state_of(0, joint);
        const auto sy1 = system.state_of(1, joint);
        const double lnq_fwd_1 =
            std::log(y_model.kernel_value(sy1, t) * y_model.conditional_bond(sy1, t, maturity)) -
            std::log(x_model.kernel_value(sx1, t) * x_model.conditional_bond(sx1, t, maturity));
        const double lnq_spot_1 =
            std::log(y_model.kernel_value(sy1, t)) - std::log(x_model.kernel_value(sx1, t));

        rep.max_abs_log_error =
            std::max(rep.max_abs_log_error, std::abs((lnq_fwd_1 - lnq_fwd_0) - sde_fwd));
        rep.max_abs_spot_log_error =
            std::max(rep.max_abs_spot_log_error, std::abs((lnq_spot_1 - lnq_spot_0) - sde_spot));
    }
    return rep;
}

}  // namespace xc
