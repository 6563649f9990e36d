#include "optval/asian_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "optval/report.hpp"

namespace optval {

namespace {

// Neumaier compensated sum; order is fixed by the caller.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::string tuple_text(const CellTuple& t) {
    std::string s = "(";
    for (std::size_t j = 0; j < t.indices.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(t.indices[j]);
    }
    return s + ")";
}

}  // namespace

void AsianConfig::validate() const {
    if (!(strike >= 0.0) || !std::isfinite(strike)) throw std::invalid_argument("strike must be non-negative");
    if (term_days <= 0) throw std::invalid_argument("term must be a positive number of days");
    if (!std::isfinite(rho_daily)) throw std::invalid_argument("daily rate must be finite");
    if (discount_factor_override && !(*discount_factor_override > 0.0)) {
        throw std::invalid_argument("discount factor override must be positive");
    }
    if (known.count < 0 || !(known.sum >= 0.0)) throw std::invalid_argument("known average must be non-negative");
    grid.validate(term_days);
}

double AsianConfig::discount() const {
    if (discount_factor_override) return *discount_factor_override;
    return std::exp(-rho_daily * static_cast<double>(term_days));
}

double average_payoff(const std::vector<double>& tag_values, double strike, const KnownAverage& known) {
    if (tag_values.empty()) throw std::invalid_argument("average payoff needs at least one tag value");
    double sum = known.sum;
    for (double v : tag_values) {
        if (!(v > 0.0)) throw std::invalid_argument("tag values must be positive");
        sum += v;
    }
    const double mean = sum / static_cast<double>(tag_values.size() + static_cast<std::size_t>(known.count));
    return std::max(mean - strike, 0.0);
}

double average_payoff(const std::vector<double>& tag_values, double strike) {
    return average_payoff(tag_values, strike, KnownAverage{});
}

AsianQuote price_asian(const AsianConfig& config, const std::vector<CellEstimate>& estimates) {
    config.validate();
    const auto& grid = config.grid;
    const auto expected = enumerate_cells(static_cast<int>(grid.horizons.size()), grid.cells);

    std::map<CellTuple, const CellEstimate*> by_tuple;
    for (const auto& e : estimates) {
        if (!(e.probability >= 0.0)) throw std::invalid_argument("negative probability for cell " + tuple_text(e.tuple));
        if (!by_tuple.emplace(e.tuple, &e).second) {
            throw std::invalid_argument("duplicate estimate for cell " + tuple_text(e.tuple));
        }
    }
    for (const auto& t : expected) {
        if (!by_tuple.contains(t)) throw std::invalid_argument("missing estimate for cell " + tuple_text(t));
    }
    if (by_tuple.size() != expected.size()) throw std::invalid_argument("estimate for a cell outside the grid");

    AsianQuote quote;
    quote.discount = config.discount();
    quote.per_cell.reserve(expected.size());
    const double offset = config.midpoint_tags ? 0.5 : 0.0;
    CompensatedSum w0;
    CompensatedSum prob;
    // Cells with all tags positive are priced; a cell whose lower bound is at
    // or below zero lies outside the positive price axis and carries no
    // payoff term.
    for (const auto& t : expected) {
        const CellEstimate& e = *by_tuple.at(t);
        CellTerm term;
        term.tuple = t;
        term.probability = e.probability;
        bool positive = true;
        for (std::size_t j = 0; j < t.indices.size(); ++j) {
            const double v = grid.anchors[j] + (t.indices[j] + offset) * grid.cell_width_s0;
            positive = positive && v > 0.0;
            term.tag_values.push_back(v);
        }
        term.payoff = positive ? average_payoff(term.tag_values, config.strike, config.known) : 0.0;
        term.contribution = term.payoff * quote.discount * term.probability;
        w0.add(term.contribution);
        prob.add(term.probability);
        quote.per_cell.push_back(std::move(term));
    }
    quote.w0 = w0.value();
    quote.total_prob = prob.value();
    return quote;
}

std::vector<SweepPoint> strike_sweep(const AsianConfig& config, const std::vector<CellEstimate>& estimates,
                                     const std::vector<double>& strikes) {
    if (strikes.empty()) throw std::invalid_argument("strike sweep needs at least one strike");
    std::vector<SweepPoint> out;
    out.reserve(strikes.size());
    AsianConfig c = config;
    for (double k : strikes) {
        c.strike = k;
        out.push_back({k, price_asian(c, estimates).w0});
    }
    return out;
}

void write_asian_report(std::ostream& out, const AsianConfig& config, const AsianQuote& quote, bool include_cells,
                        char delimiter) {
    const char d = delimiter;
    out << "key" << d << "value\n";
    out << "strike" << d << fmt6(config.strike) << '\n';
    out << "rate_daily" << d << fmt6(config.rho_daily) << '\n';
    out << "term_days" << d << config.term_days << '\n';
    out << "discount" << d << fmt6(quote.discount) << '\n';
    out << "s0" << d << fmt6(config.grid.cell_width_s0) << '\n';
    out << "total_prob" << d << fmt6(quote.total_prob) << '\n';
    out << "w0" << d << fmt6(quote.w0) << '\n';
    if (!include_cells || quote.per_cell.empty()) return;

    out << '\n';
    const std::size_t h = quote.per_cell.front().tuple.indices.size();
    for (std::size_t j = 0; j < h; ++j) out << 'p' << (j + 1) << d;
    for (std::size_t j = 0; j < h; ++j) out << "tag" << (j + 1) << d;
    out << "payoff" << d << "probability" << d << "contribution\n";
    for (const auto& c : quote.per_cell) {
        for (int p : c.tuple.indices) out << p << d;
        for (double v : c.tag_values) out << fmt6(v) << d;
        out << fmt6(c.payoff) << d << fmt6(c.probability) << d << fmt6(c.contribution) << '\n';
    }
}

}  // namespace optval
