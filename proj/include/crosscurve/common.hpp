#pragma once

#include <stdexcept>
#include <string>

namespace xc {

// Precondition violation: the caller passed something outside the contract.
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Internal consistency violation: two routes to the same number disagreed,
// a positivity constraint broke mid-computation, etc.
inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

}  // namespace xc
