#include "crosscurve/quotes.hpp"

#include <fstream>
#include <sstream>

#include "crosscurve/common.hpp"

namespace xc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim spaces and CR
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
    }
    return out;
}

}  // namespace

void QuoteSet::validate() const {
    require(deposit.has_value() || !fras.empty() || !swaps.empty(), "empty quote set");
    double last = 0.0;
    if (deposit) {
        require(deposit->maturity > 0.0, "deposit maturity must be positive");
        require(deposit->rate > -1.0 / deposit->maturity, "deposit rate implies non-positive df");
        last = deposit->maturity;
    }
    for (const auto& f : fras) {
        require(f.start >= 0.0 && f.end > f.start, "FRA times out of order");
        require(f.end > last, "quote maturities must be strictly increasing");
        require(f.rate > -1.0 / (f.end - f.start), "FRA rate implies non-positive df");
        if (last > 0.0) {
            require(std::abs(f.start - last) < 1e-12, "FRA strip must be contiguous");
        }
        last = f.end;
    }
    for (const auto& s : swaps) {
        require(s.maturity > last, "quote maturities must be strictly increasing");
        last = s.maturity;
    }
}

QuoteSet QuoteSet::from_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    require(static_cast<bool>(std::getline(ss, line)), "empty quote file");
    auto header = split_csv_line(line);
    require(header.size() == 5 && header[0] == "type" && header[1] == "market" &&
                header[2] == "start" && header[3] == "end" && header[4] == "quote",
            "bad quote CSV header (expected type,market,start,end,quote)");

    QuoteSet q;
    bool any = false;
    while (std::getline(ss, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_csv_line(line);
        require(f.size() == 5, "bad quote CSV row: " + line);
        const std::string& type = f[0];
        if (q.market.empty()) q.market = f[1];
        require(q.market == f[1], "mixed markets in one quote file");
        double start = 0.0, end = 0.0, rate = 0.0;
        try {
            start = std::stod(f[2]);
            end = std::stod(f[3]);
            rate = std::stod(f[4]);
        } catch (const std::exception&) {
            throw std::invalid_argument("non-numeric field in quote row: " + line);
        }
        if (type == "DEPO") {
            require(!q.deposit.has_value(), "more than one deposit quote");
            require(start == 0.0, "deposit must start at 0");
            q.deposit = DepositQuote{end, rate};
        } else if (type == "FRA") {
            q.fras.push_back({start, end, rate});
        } else if (type == "IRS") {
            require(start == 0.0, "swaps must be spot starting");
            q.swaps.push_back({end, rate});
        } else {
            throw std::invalid_argument("unknown quote type: " + type);
        }
        any = true;
    }
    require(any, "quote file has no rows");
    q.validate();
    return q;
}

QuoteSet QuoteSet::load_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open quote file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str());
}

std::string QuoteSet::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "type,market,start,end,quote\n";
    if (deposit) out << "DEPO," << market << ",0," << deposit->maturity << "," << deposit->rate << "\n";
    for (const auto& f : fras) out << "FRA," << market << "," << f.start << "," << f.end << "," << f.rate << "\n";
    for (const auto& s : swaps) out << "IRS," << market << ",0," << s.maturity << "," << s.rate << "\n";
    return out.str();
}

}  // namespace xc
