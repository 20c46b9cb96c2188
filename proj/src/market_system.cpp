#include "crosscurve/market_system.hpp"

#include <algorithm>

namespace xc {

int MarketSystem::add_market(KernelModelPtr model, std::vector<int> noise_indices) {
    require(model != nullptr, "null model");
    const int nd = model->noise_dim();
    if (noise_indices.empty()) {
        noise_indices.resize(static_cast<std::size_t>(nd));
        for (int k = 0; k < nd; ++k) noise_indices[static_cast<std::size_t>(k)] = joint_noise_ + k;
    }
    require(static_cast<int>(noise_indices.size()) == nd,
            "noise index count must match the model's noise dimension");
    for (int idx : noise_indices) require(idx >= 0, "negative noise index");

    offsets_.push_back(static_cast<std::size_t>(total_state_));
    total_state_ += model->state_dim();
    for (int idx : noise_indices) joint_noise_ = std::max(joint_noise_, idx + 1);
    models_.push_back(std::move(model));
    noise_map_.push_back(std::move(noise_indices));
    return n_markets() - 1;
}

int MarketSystem::find(const std::string& label) const {
    for (int i = 0; i < n_markets(); ++i) {
        if (models_[static_cast<std::size_t>(i)]->label() == label) return i;
    }
    throw std::invalid_argument("no market with label " + label);
}

State MarketSystem::initial_state() const {
    State joint(static_cast<std::size_t>(total_state_));
    for (int i = 0; i < n_markets(); ++i) {
        const State s = models_[static_cast<std::size_t>(i)]->initial_state();
        std::copy(s.begin(), s.end(), joint.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i)]));
    }
    return joint;
}

void MarketSystem::evolve(State& joint, double t, double dt, std::span<const double> z) const {
    require(static_cast<int>(z.size()) >= joint_noise_, "joint noise vector too short");
    std::vector<double> local;
    for (int i = 0; i < n_markets(); ++i) {
        const auto& map = noise_map_[static_cast<std::size_t>(i)];
        local.resize(map.size());
        for (std::size_t k = 0; k < map.size(); ++k) local[k] = z[static_cast<std::size_t>(map[k])];
        models_[static_cast<std::size_t>(i)]->evolve(state_of(i, joint), t, dt, local);
    }
}

}  // namespace xc
