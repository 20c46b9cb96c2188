#pragma once

#include <string>
#include <vector>

#include "crosscurve/kernel_model.hpp"

namespace xc {

// Model files: {"family": "deterministic" | "rational_mult" | "rational_add"
// | "lrts" | "hjm_gauss", "label": ..., "params": {...}} with the initial
// curve embedded or referenced by path. "noise" optionally lists the joint
// Brownian coordinates the model consumes, for wiring correlated markets.
struct LoadedModel {
    KernelModelPtr model;
    std::vector<int> noise_indices;  // empty = allocate fresh coordinates
};

LoadedModel model_from_json(const std::string& text, const std::string& base_dir = "");
LoadedModel load_model(const std::string& path);

}  // namespace xc
