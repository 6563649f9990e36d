#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "optval/market_data.hpp"
#include "optval/types.hpp"

namespace optval {

/// Inclusive range of integer cell offsets, e.g. -3..2 for the 3-sigma
/// partition [m-3s, m+3s).
struct CellRange {
    int lo = -3;
    int hi = 2;

    [[nodiscard]] int size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
    [[nodiscard]] bool contains(int p) const noexcept { return p >= lo && p <= hi; }
};

/// Cylindrical partition of price paths at a few horizon dates.
/// Cell p at horizon j is [anchor_j + p*s0, anchor_j + (p+1)*s0).
struct PartitionGrid {
    std::vector<std::int64_t> horizons;  ///< day offsets, strictly increasing
    CellRange cells;
    std::vector<double> anchors;  ///< one positive anchor price per horizon
    double cell_width_s0 = 0.0;

    /// Throws std::invalid_argument on a broken invariant. `term_days`, when
    /// positive, bounds the last horizon.
    void validate(std::int64_t term_days = 0) const;
    [[nodiscard]] std::int64_t cell_count() const;
};

struct CellTuple {
    std::vector<int> indices;  ///< one cell offset per horizon

    friend bool operator==(const CellTuple&, const CellTuple&) = default;
    friend auto operator<=>(const CellTuple&, const CellTuple&) = default;
};

struct CellEstimate {
    CellTuple tuple;
    double probability = 0.0;
    std::int64_t sample_count = 0;
    std::int64_t matches = 0;
};

struct Atom {
    double value = 0.0;
    double mass = 0.0;
};

/// Finitely many atoms; total mass may fall short of 1 for a non-exhaustive
/// partition.
struct DiscreteDistribution {
    std::vector<Atom> atoms;

    [[nodiscard]] double total_mass() const noexcept;
    /// Mass-weighted mean, normalised by total mass.
    [[nodiscard]] double mean() const;
};

/// All |range|^num_horizons tuples in lexicographic order.
std::vector<CellTuple> enumerate_cells(int num_horizons, CellRange range);

/// Relative frequency with which the history visits one cell tuple.
/// For each start k in start_range a match requires, for every horizon h_j,
///   m[k+h_j] + p_j s[k+h_j] <= z[k+h_j] < m[k+h_j] + (p_j+1) s[k+h_j],
/// where m and s are the window stats starting at k+h_j. The divisor is the
/// number of starts.
CellEstimate estimate_cell_frequency(const PriceSeries& series, const WindowStats& stats,
                                     const std::vector<std::int64_t>& horizons, const CellTuple& tuple,
                                     IndexRange start_range);

/// Estimates for every tuple of enumerate_cells(horizons.size(), cells), in
/// the same order. Classifies each (start, horizon) once and histograms the
/// tuples, which agrees exactly with per-tuple estimate_cell_frequency.
std::vector<CellEstimate> estimate_all_cells(const PriceSeries& series, const WindowStats& stats,
                                             const std::vector<std::int64_t>& horizons, CellRange cells,
                                             IndexRange start_range);

double total_probability(const std::vector<CellEstimate>& estimates);

/// M_j = z0 * exp(rho_daily * h_j).
std::vector<double> risk_neutral_anchors(double z0, double rho_daily, const std::vector<std::int64_t>& horizons);

/// Translates every atom by target_mean - mean(dist), leaving masses alone:
/// the composition of centring to mean 0 and re-centring at target_mean.
DiscreteDistribution shift_distribution_mean(const DiscreteDistribution& dist, double target_mean);

/// Rows "p1,...,pd,matches,sample_count,probability".
void write_cell_estimates(std::ostream& out, const std::vector<CellEstimate>& estimates, char delimiter = ',');

}  // namespace optval
