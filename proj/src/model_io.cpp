#include "crosscurve/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crosscurve/hjm.hpp"
#include "crosscurve/lrts.hpp"
#include "crosscurve/rational.hpp"
#include "crosscurve/time_fn.hpp"

namespace xc {

namespace {

using nlohmann::json;

Curve curve_from_params(const json& params, const std::string& key,
                        const std::string& base_dir) {
    const auto& node = params.at(key);
    if (node.is_string()) {
        std::filesystem::path p = node.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        return Curve::load(p.string());
    }
    if (node.is_object() && node.contains("flat_rate")) {
        return Curve::flat(node.value("label", std::string("curve")),
                           node.at("flat_rate").get<double>(),
                           node.value("horizon", 60.0));
    }
    return Curve::from_json(node.dump());
}

TimeFunction time_fn_from(const json& node) {
    if (node.is_number()) return TimeFunction::constant(node.get<double>());
    return TimeFunction::from_kind(node.at("type").get<std::string>(),
                                   node.value("a", node.value("value", 0.0)),
                                   node.value("b", node.value("rate", 0.0)));
}

std::vector<HjmVol> vols_from(const json& node) {
    std::vector<HjmVol> out;
    for (const auto& v : node) {
        out.push_back({v.at("scale").get<double>(), v.value("decay", 0.0)});
    }
    return out;
}

}  // namespace

LoadedModel model_from_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model JSON parse error: ") + e.what());
    }
    const auto family = j.at("family").get<std::string>();
    const auto label = j.value("label", family);
    const json params = j.value("params", json::object());
    const double drift_offset = params.value("drift_offset", j.value("drift_offset", 0.0));

    LoadedModel out;
    if (j.contains("noise")) out.noise_indices = j.at("noise").get<std::vector<int>>();

    if (family == "deterministic") {
        Curve c = curve_from_params(params, "curve", base_dir);
        out.model = std::make_shared<DeterministicKernelModel>(
            Curve(label, c.pillars()), drift_offset);
    } else if (family == "rational_mult") {
        Curve c = curve_from_params(params, "curve", base_dir);
        std::vector<RationalFactor> factors;
        for (const auto& f : params.at("factors")) {
            factors.push_back({time_fn_from(f.at("b")), f.at("vol").get<double>()});
        }
        out.model = std::make_shared<RationalMultiplicativeModel>(
            Curve(label, c.pillars()), std::move(factors), drift_offset);
    } else if (family == "rational_add") {
        Curve c = curve_from_params(params, "curve", base_dir);
        out.model = std::make_shared<AdditiveRationalModel>(
            Curve(label, c.pillars()), time_fn_from(params.at("b")),
            params.at("vol").get<double>(), drift_offset);
    } else if (family == "lrts") {
        LrtsSpec spec;
        spec.kappa = params.at("kappa").get<std::vector<double>>();
        spec.theta = params.at("theta").get<std::vector<double>>();
        spec.z0 = params.at("z0").get<std::vector<double>>();
        spec.psi = params.at("psi").get<std::vector<double>>();
        spec.sigma = params.at("sigma").get<std::vector<double>>();
        spec.alpha = params.at("alpha").get<double>();
        spec.phi = params.at("phi").get<double>();
        spec.drift_offset = drift_offset;
        out.model = std::make_shared<LrtsModel>(spec, label);
    } else if (family == "hjm_gauss") {
        HjmSpec spec;
        spec.label = label;
        spec.initial_curve = curve_from_params(params, "curve", base_dir);
        spec.short_rate = time_fn_from(params.at("r"));
        spec.sigma = vols_from(params.at("sigma"));
        spec.lambda = params.at("lambda").get<std::vector<double>>();
        spec.maturities = params.at("maturities").get<std::vector<double>>();
        spec.drift_offset = drift_offset;
        spec.shared = params.value("shared", -1);
        const auto drift = params.value("y_drift", std::string("classical"));
        if (drift == "classical") {
            spec.drift_mode = HjmSpec::DriftMode::Classical;
        } else if (drift == "model_ii") {
            spec.drift_mode = HjmSpec::DriftMode::TenorRecursion;
            spec.x_sigma = vols_from(params.at("x_sigma"));
        } else {
            throw std::invalid_argument("unknown y_drift mode: " + drift);
        }
        out.model = std::make_shared<HjmMarketModel>(std::move(spec));
    } else {
        throw std::invalid_argument("unknown model family: " + family);
    }
    return out;
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace xc
