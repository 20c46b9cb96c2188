#pragma once

#include <span>
#include <vector>

#include "crosscurve/kernel_model.hpp"

namespace xc {

// Linear-rational term structure: factor dZ = kappa (theta - Z) dt + dM with
// per-coordinate square-root martingale parts dM_i = sigma_i sqrt(Z_i) dW_i,
// kappa and (for the heat-kernel weight) beta diagonal, and pricing kernel
// zeta_t = exp(-alpha t) (phi + psi . Z_t).
struct LrtsSpec {
    std::vector<double> kappa;  // diagonal, > 0
    std::vector<double> theta;
    std::vector<double> z0;
    std::vector<double> psi;   // >= 0 so phi + psi.Z > 0 on Z >= 0
    std::vector<double> sigma;
    double alpha = 0.0;
    double phi = 1.0;
    double drift_offset = 0.0;

    std::size_t dim() const { return kappa.size(); }
    void validate() const;
};

// Kernel-model wrapper. The state holds the accumulated martingale
// coordinates A_t = int_0^t e^{kappa s} dM_s; the factor is reconstructed
// through the mean-reversion solution Z_t = D(t) + e^{-kappa t} A_t, so the
// martingale property of A and the additive-rational decomposition hold
// exactly in the discretisation. The diffusion increment uses the full
// truncation sqrt(Z^+).
class LrtsModel final : public KernelModel {
  public:
    explicit LrtsModel(LrtsSpec spec, std::string label = "lrts");

    int state_dim() const override { return static_cast<int>(spec_.dim()); }
    int noise_dim() const override { return static_cast<int>(spec_.dim()); }
    State initial_state() const override { return State(spec_.dim(), 0.0); }

    double conditional_bond(std::span<const double> state, double t, double T) const override;
    double initial_df(double T) const override;
    void evolve(std::span<double> state, double t, double dt,
                std::span<const double> z) const override;

    std::vector<double> factor(std::span<const double> state, double t) const;  // Z_t
    double zeta_normalised(std::span<const double> state, double t) const;      // zeta_t / zeta_0

    // Count of evolution steps that hit the sqrt truncation (factor below the
    // state-space boundary). Purely informational.
    long boundary_hits() const { return boundary_hits_; }

    const LrtsSpec& spec() const { return spec_; }

  private:
    double base_kernel(std::span<const double> state, double t) const override;

    LrtsSpec spec_;
    mutable long boundary_hits_ = 0;
};

// Additive-rational representation P_{tT} = (P_{0T} + b(T).A_t)/(P_{0t} + b(t).A_t)
// of the linear-rational bond, with A_t the model's stored martingale state.
struct LrtsDecomposition {
    LrtsSpec spec;

    double initial_df(double t) const;              // P_{0t}
    std::vector<double> loading(double t) const;    // b(t)
    double bond(std::span<const double> a_state, double t, double T) const;
    std::vector<double> loading_normalised(double t) const;  // b(t)/P_{0t}
};

LrtsDecomposition lrts_decompose(const LrtsSpec& spec);

// Weighted heat kernel pi_t = f_0(t) + f_1(t) int_0^inf w(t,u) E[Z_{t+u}|F_t] du
// with w(t,u) = e^{-beta(t+u)}, reproducing zeta_t. The integral is evaluated
// by composite Simpson, truncated where the weight drops below 1e-12 and
// refined until the change is below 1e-8.
struct WhkSpec {
    LrtsSpec lrts;
    std::vector<double> beta;  // diagonal, > 0, beta + kappa invertible

    double f0(double t) const;
    std::vector<double> f1(double t) const;
    double weight(std::size_t i, double t, double u) const;

    // pi_t given the factor value Z_t; `panels` (power of two) overrides the
    // adaptive refinement when positive.
    double value(std::span<const double> z_t, double t, int panels = 0) const;
};

WhkSpec whk_build(const LrtsSpec& spec, std::vector<double> beta);

}  // namespace xc
