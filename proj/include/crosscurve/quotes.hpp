#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xc {

struct DepositQuote {
    double maturity;  // T_1; accrual is [0, T_1]
    double rate;
};

struct FraQuoteRow {
    double start;
    double end;
    double rate;
};

struct SwapQuoteRow {
    double maturity;
    double rate;
};

// Par quotes for one market: one deposit, a contiguous FRA strip, then swaps
// sharing the FRA accrual grid.
struct QuoteSet {
    std::string market;
    std::optional<DepositQuote> deposit;
    std::vector<FraQuoteRow> fras;
    std::vector<SwapQuoteRow> swaps;
    std::optional<std::string> discount_curve_ref;

    void validate() const;

    // CSV with header "type,market,start,end,quote"; type in {DEPO, FRA, IRS}.
    static QuoteSet from_csv(const std::string& text);
    static QuoteSet load_csv(const std::string& path);
    std::string to_csv() const;
};

}  // namespace xc
