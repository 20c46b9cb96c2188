#include "crosscurve/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crosscurve/common.hpp"

namespace xc {

Curve::Curve(std::string label, std::vector<CurvePillar> pillars)
    : label_(std::move(label)), pillars_(std::move(pillars)) {
    require(!pillars_.empty(), "curve needs at least one pillar");
    // An explicit t=0 pillar is allowed but must carry df=1; drop it.
    if (pillars_.front().t == 0.0) {
        require(std::abs(pillars_.front().df - 1.0) < 1e-14, "df at t=0 must be 1");
        pillars_.erase(pillars_.begin());
        require(!pillars_.empty(), "curve needs a pillar beyond t=0");
    }
    double prev_t = 0.0;
    for (const auto& p : pillars_) {
        require(p.t > prev_t, "curve pillars must be strictly increasing in t");
        require(p.df > 0.0, "discount factors must be positive");
        prev_t = p.t;
    }
}

Curve Curve::flat(std::string label, double rate, double horizon) {
    std::vector<CurvePillar> p;
    for (double t = 0.25; t <= horizon + 1e-12; t += 0.25) p.push_back({t, std::exp(-rate * t)});
    return Curve(std::move(label), std::move(p));
}

double Curve::df(double t) const {
    require(t >= 0.0, "df: negative time");
    if (t == 0.0) return 1.0;
    const auto it = std::lower_bound(pillars_.begin(), pillars_.end(), t,
                                     [](const CurvePillar& p, double x) { return p.t < x; });
    if (it == pillars_.end()) {
        // Flat zero-rate extrapolation from the last pillar.
        const auto& last = pillars_.back();
        const double zero = -std::log(last.df) / last.t;
        return std::exp(-zero * t);
    }
    if (it->t == t) return it->df;
    const double t0 = (it == pillars_.begin()) ? 0.0 : std::prev(it)->t;
    const double ldf0 = (it == pillars_.begin()) ? 0.0 : std::log(std::prev(it)->df);
    const double w = (t - t0) / (it->t - t0);
    return std::exp(ldf0 + w * (std::log(it->df) - ldf0));
}

double Curve::log_df_slope(double t) const {
    require(t >= 0.0, "log_df_slope: negative time");
    const auto it = std::upper_bound(pillars_.begin(), pillars_.end(), t,
                                     [](double x, const CurvePillar& p) { return x < p.t; });
    if (it == pillars_.end()) {
        const auto& last = pillars_.back();
        return std::log(last.df) / last.t;
    }
    const double t0 = (it == pillars_.begin()) ? 0.0 : std::prev(it)->t;
    const double ldf0 = (it == pillars_.begin()) ? 0.0 : std::log(std::prev(it)->df);
    return (std::log(it->df) - ldf0) / (it->t - t0);
}

std::string Curve::to_json() const {
    nlohmann::json j;
    j["label"] = label_;
    j["interpolation"] = "log_linear_df";
    auto& arr = j["pillars"] = nlohmann::json::array();
    for (const auto& p : pillars_) arr.push_back({{"t", p.t}, {"df", p.df}});
    return j.dump(2);
}

Curve Curve::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    require(j.value("interpolation", "log_linear_df") == std::string("log_linear_df"),
            "unsupported interpolation");
    std::vector<CurvePillar> pillars;
    for (const auto& p : j.at("pillars")) {
        pillars.push_back({p.at("t").get<double>(), p.at("df").get<double>()});
    }
    return Curve(j.value("label", std::string("curve")), std::move(pillars));
}

Curve Curve::load(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open curve file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void Curve::save(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), "cannot write curve file: " + path);
    out << to_json() << "\n";
}

}  // namespace xc
