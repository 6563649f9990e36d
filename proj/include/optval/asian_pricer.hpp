#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "optval/empirical_dist.hpp"

namespace optval {

/// Observations already fixed when pricing after inception; they enter the
/// average alongside the tag values.
struct KnownAverage {
    double sum = 0.0;
    std::int64_t count = 0;
};

struct AsianConfig {
    double strike = 0.0;
    double rho_daily = 0.0;
    std::int64_t term_days = 0;
    /// Replaces e^{-rho_daily * term_days} when set.
    std::optional<double> discount_factor_override;
    PartitionGrid grid;
    IndexRange start_range;
    /// Tag each cell at its midpoint instead of its lower bound.
    bool midpoint_tags = false;
    KnownAverage known;

    void validate() const;
    [[nodiscard]] double discount() const;
};

struct CellTerm {
    CellTuple tuple;
    std::vector<double> tag_values;
    double payoff = 0.0;
    double probability = 0.0;
    double contribution = 0.0;
};

struct AsianQuote {
    double w0 = 0.0;
    double total_prob = 0.0;
    double discount = 1.0;
    std::vector<CellTerm> per_cell;
};

/// max(mean(tag_values) - strike, 0). Throws on an empty or non-positive tag.
double average_payoff(const std::vector<double>& tag_values, double strike);
/// Same, with previously observed prices folded into the average.
double average_payoff(const std::vector<double>& tag_values, double strike, const KnownAverage& known);

/// Riemann sum of discounted payoffs over the partition cells:
///   w0 = sum_i discount * payoff(tags_i) * P_i,
/// tags_i[j] = anchor_j + p_ij * s0 (lower bound, or midpoint when enabled).
/// `estimates` must contain each grid tuple exactly once.
AsianQuote price_asian(const AsianConfig& config, const std::vector<CellEstimate>& estimates);

struct SweepPoint {
    double strike = 0.0;
    double w0 = 0.0;
};

std::vector<SweepPoint> strike_sweep(const AsianConfig& config, const std::vector<CellEstimate>& estimates,
                                     const std::vector<double>& strikes);

/// Header block "key,value" followed by the per-cell table.
void write_asian_report(std::ostream& out, const AsianConfig& config, const AsianQuote& quote,
                        bool include_cells, char delimiter = ',');

}  // namespace optval
