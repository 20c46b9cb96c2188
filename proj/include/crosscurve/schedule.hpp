#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "crosscurve/common.hpp"

namespace xc {

// Payment schedule on an abstract year-fraction timeline: reset times
// T_0 < T_1 < ... < T_n with accruals d_i = T_i - T_{i-1}.
class Schedule {
  public:
    explicit Schedule(std::vector<double> reset_times) : times_(std::move(reset_times)) {
        require(times_.size() >= 2, "schedule needs at least two times");
        require(times_.front() >= 0.0, "schedule must start at a non-negative time");
        for (std::size_t i = 1; i < times_.size(); ++i) {
            require(times_[i] > times_[i - 1], "schedule times must be strictly increasing");
        }
    }

    static Schedule regular(double start, double end, double step) {
        require(step > 0.0 && end > start, "bad regular schedule");
        std::vector<double> t;
        const auto n = static_cast<std::size_t>(std::llround((end - start) / step));
        require(n >= 1 && std::abs(start + static_cast<double>(n) * step - end) < 1e-9,
                "schedule step does not divide the interval");
        t.reserve(n + 1);
        for (std::size_t i = 0; i <= n; ++i) t.push_back(start + static_cast<double>(i) * step);
        t.back() = end;
        return Schedule(std::move(t));
    }

    const std::vector<double>& times() const { return times_; }
    std::size_t periods() const { return times_.size() - 1; }
    double start() const { return times_.front(); }
    double end() const { return times_.back(); }
    double accrual(std::size_t i) const { return times_[i + 1] - times_[i]; }

  private:
    std::vector<double> times_;
};

}  // namespace xc
