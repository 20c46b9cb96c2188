#pragma once

#include <string>
#include <vector>

namespace xc {

struct CurvePillar {
    double t;
    double df;
};

// Initial discount-factor term structure {t -> P_{0t}}, log-linear in the
// discount factors between pillars, flat continuously-compounded zero rate
// beyond the last pillar. df(0) = 1 always.
class Curve {
  public:
    Curve() = default;
    Curve(std::string label, std::vector<CurvePillar> pillars);

    // Flat curve exp(-rate * t), sampled out to `horizon`.
    static Curve flat(std::string label, double rate, double horizon = 60.0);

    double df(double t) const;

    // d/dt ln df(t). Piecewise constant; at a pillar the right segment wins.
    double log_df_slope(double t) const;

    const std::string& label() const { return label_; }
    const std::vector<CurvePillar>& pillars() const { return pillars_; }

    std::string to_json() const;
    static Curve from_json(const std::string& text);
    static Curve load(const std::string& path);
    void save(const std::string& path) const;

  private:
    std::string label_;
    std::vector<CurvePillar> pillars_;
};

}  // namespace xc
