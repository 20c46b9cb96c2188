#pragma once

#include <span>
#include <string>
#include <vector>

#include "crosscurve/kernel_model.hpp"

namespace xc {

// A set of kernel models sharing one filtration. Each market maps its noise
// coordinates into a joint Brownian vector, so cross-market dependence is
// configured by index overlap; the joint state is the concatenation of the
// per-market states.
class MarketSystem {
  public:
    // Empty noise_indices means "the next unused coordinates".
    int add_market(KernelModelPtr model, std::vector<int> noise_indices = {});

    int n_markets() const { return static_cast<int>(models_.size()); }
    int joint_state_dim() const { return total_state_; }
    int joint_noise_dim() const { return joint_noise_; }

    const KernelModel& model(int i) const { return *models_.at(static_cast<std::size_t>(i)); }
    KernelModelPtr model_ptr(int i) const { return models_.at(static_cast<std::size_t>(i)); }
    int find(const std::string& label) const;

    State initial_state() const;

    std::span<const double> state_of(int i, const State& joint) const {
        return {joint.data() + offsets_[static_cast<std::size_t>(i)],
                static_cast<std::size_t>(models_[static_cast<std::size_t>(i)]->state_dim())};
    }
    std::span<double> state_of(int i, State& joint) const {
        return {joint.data() + offsets_[static_cast<std::size_t>(i)],
                static_cast<std::size_t>(models_[static_cast<std::size_t>(i)]->state_dim())};
    }

    // z holds joint_noise_dim() standard normals for this step.
    void evolve(State& joint, double t, double dt, std::span<const double> z) const;

  private:
    std::vector<KernelModelPtr> models_;
    std::vector<std::vector<int>> noise_map_;
    std::vector<std::size_t> offsets_;
    int total_state_ = 0;
    int joint_noise_ = 0;
};

}  // namespace xc
