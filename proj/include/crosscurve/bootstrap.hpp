#pragma once

#include <string>
#include <vector>

#include "crosscurve/curve.hpp"
#include "crosscurve/quotes.hpp"

namespace xc {

struct BootstrapResult {
    Curve curve;
    std::vector<std::string> quote_ids;
    std::vector<double> residuals;  // repriced rate minus quoted rate

    double max_abs_residual() const;
};

// Single-curve construction: deposit and FRA recursions, then swap pillars
// solved by bisection on the terminal discount factor (log-linear inside any
// maturity gap).
BootstrapResult bootstrap_emerging(const QuoteSet& quotes);

// Developed-market construction of the y-system against a known x-discount
// curve; by construction the quanto bond satisfies P^{xy}_{0t} = P^y_{0t}.
BootstrapResult bootstrap_developed(const QuoteSet& quotes, const Curve& discount);

// The practitioner shortcut: the single-curve recursion applied to
// developed-market quotes. The resulting curve absorbs the conversion-factor
// adjustment into the discount factors, so it is not the y-system above.
BootstrapResult bootstrap_practitioner(const QuoteSet& quotes);

}  // namespace xc
