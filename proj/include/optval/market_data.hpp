#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "optval/types.hpp"

namespace optval {

// ============================================================================
// PRICE SERIES
// ============================================================================

struct Observation {
    std::int64_t day = 0;
    double price = 0.0;
};

/// Dated sequence of strictly positive share prices. Day indices are abstract
/// ticks; the loader assigns 1..N in file order.
class PriceSeries {
public:
    PriceSeries() = default;
    /// Throws std::invalid_argument if days are not strictly increasing or any
    /// price is not strictly positive.
    PriceSeries(std::vector<Observation> observations, std::string label = {});

    /// Convenience: prices with days 1..N.
    static PriceSeries from_prices(const std::vector<double>& prices, std::string label = {});

    [[nodiscard]] std::size_t size() const noexcept { return prices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return prices_.empty(); }
    [[nodiscard]] const std::vector<double>& prices() const noexcept { return prices_; }
    [[nodiscard]] const std::vector<std::int64_t>& days() const noexcept { return days_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    /// Range of valid 1-based positions, [1, size()].
    [[nodiscard]] IndexRange positions() const noexcept {
        return {1, static_cast<std::int64_t>(prices_.size())};
    }
    /// Price at 1-based position.
    [[nodiscard]] double at(std::int64_t position) const { return prices_.at(static_cast<std::size_t>(position - 1)); }

    /// Drops the first `count` observations and renumbers days from 1.
    [[nodiscard]] PriceSeries drop_front(std::size_t count) const;

private:
    std::vector<std::int64_t> days_;
    std::vector<double> prices_;
    std::string label_;
};

struct ColumnSpec {
    /// Column holding the day index; empty means "use row order".
    std::string index_column;
    std::string price_column = "price";
    char delimiter = ',';
};

/// Reads a delimiter-separated file with a header row. Days are numbered
/// 1..N in file order regardless of the index column's content; the index
/// column, when named, must exist. Throws InputError naming the path, the
/// 1-based data row, or the missing column.
PriceSeries load_price_series(const std::filesystem::path& path, const ColumnSpec& spec = {});
PriceSeries parse_price_series(std::istream& in, const ColumnSpec& spec, const std::string& label);

void write_price_series(std::ostream& out, const PriceSeries& series, char delimiter = ',');

// ============================================================================
// TREND FIT
// ============================================================================

/// price(t) = scale_a * exp(daily_rate_mu * t)
struct TrendModel {
    double scale_a = 1.0;
    double daily_rate_mu = 0.0;

    [[nodiscard]] double predict(double t) const noexcept;
};

/// Ordinary least squares of ln(price) on day index over `range` (1-based
/// positions). Throws std::invalid_argument if the range leaves the series or
/// holds fewer than two points.
TrendModel fit_exponential_trend(const PriceSeries& series, IndexRange range);

/// Sum of squared log residuals of `model` over `range`.
double log_residual_ss(const PriceSeries& series, IndexRange range, const TrendModel& model);

// ============================================================================
// MOVING WINDOW STATISTICS
// ============================================================================

/// Rolling mean and sample standard deviation keyed by 1-based window start.
/// Stored as parallel arrays so the kernels can stream them.
struct WindowStats {
    std::size_t window_len = 0;
    std::int64_t first_start = 1;
    std::vector<double> means;
    std::vector<double> sds;

    [[nodiscard]] std::size_t size() const noexcept { return means.size(); }
    [[nodiscard]] IndexRange starts() const noexcept {
        return {first_start, first_start + static_cast<std::int64_t>(means.size()) - 1};
    }
    [[nodiscard]] double mean_at(std::int64_t start) const { return means.at(static_cast<std::size_t>(start - first_start)); }
    [[nodiscard]] double sd_at(std::int64_t start) const { return sds.at(static_cast<std::size_t>(start - first_start)); }
};

/// One entry per start k = 1..N-w+1 covering prices k..k+w-1. Sample (n-1)
/// standard deviation; a window of length 1 has sd 0.
WindowStats moving_window_stats(const PriceSeries& series, std::size_t window_len);

/// Plot position of a window: its start shifted to the middle of the window.
[[nodiscard]] constexpr std::int64_t window_center(std::int64_t start, std::size_t window_len) noexcept {
    return start + static_cast<std::int64_t>(window_len / 2);
}

/// Mean of the window sds whose start index lies in `range`.
double recent_sd_average(const WindowStats& stats, IndexRange range);

/// Rows "start_index,mean,sd" with 6 significant digits.
void write_window_stats(std::ostream& out, const WindowStats& stats, char delimiter = ',');
/// Inverse of write_window_stats. The window length is not stored in the file.
WindowStats read_window_stats(std::istream& in, std::size_t window_len, char delimiter = ',');

}  // namespace optval
