#include "optval/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "optval/kernels.hpp"
#include "optval/report.hpp"

namespace optval {

// ============================================================================
// PRICE SERIES
// ============================================================================

PriceSeries::PriceSeries(std::vector<Observation> observations, std::string label) : label_(std::move(label)) {
    days_.reserve(observations.size());
    prices_.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& [day, price] = observations[i];
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw std::invalid_argument("price at position " + std::to_string(i + 1) + " is not positive");
        }
        if (i > 0 && day <= days_.back()) {
            throw std::invalid_argument("day indices must be strictly increasing (position " + std::to_string(i + 1) +
                                        ")");
        }
        days_.push_back(day);
        prices_.push_back(price);
    }
}

PriceSeries PriceSeries::from_prices(const std::vector<double>& prices, std::string label) {
    std::vector<Observation> obs;
    obs.reserve(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) obs.push_back({static_cast<std::int64_t>(i + 1), prices[i]});
    return PriceSeries(std::move(obs), std::move(label));
}

PriceSeries PriceSeries::drop_front(std::size_t count) const {
    if (count > prices_.size()) throw std::invalid_argument("cannot drop more observations than the series holds");
    return from_prices(std::vector<double>(prices_.begin() + static_cast<std::ptrdiff_t>(count), prices_.end()),
                       label_);
}

PriceSeries parse_price_series(std::istream& in, const ColumnSpec& spec, const std::string& label) {
    std::string line;
    if (!std::getline(in, line)) throw InputError(label + ": empty file (no header row)");
    const auto header = split_fields(line, spec.delimiter);

    const auto find_column = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InputError(label + ": no column named '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t price_col = find_column(spec.price_column);
    if (!spec.index_column.empty()) find_column(spec.index_column);

    std::vector<double> prices;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto fields = split_fields(line, spec.delimiter);
        double value = 0.0;
        if (price_col >= fields.size() || !parse_double(fields[price_col], value) || !std::isfinite(value)) {
            throw InputError(label + ": row " + std::to_string(row) + ": price is not numeric");
        }
        if (value <= 0.0) {
            throw InputError(label + ": row " + std::to_string(row) + ": price " + fields[price_col] +
                             " is not positive");
        }
        prices.push_back(value);
    }
    if (prices.empty()) throw InputError(label + ": series is empty");
    return PriceSeries::from_prices(prices, label);
}

PriceSeries load_price_series(const std::filesystem::path& path, const ColumnSpec& spec) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read price file: " + path.string());
    return parse_price_series(in, spec, path.string());
}

void write_price_series(std::ostream& out, const PriceSeries& series, char delimiter) {
    out << "day" << delimiter << "price\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.days()[i] << delimiter << fmt6(series.prices()[i]) << '\n';
    }
}

// ============================================================================
// TREND FIT
// ============================================================================

double TrendModel::predict(double t) const noexcept { return scale_a * std::exp(daily_rate_mu * t); }

namespace {

void check_range(const PriceSeries& series, IndexRange range) {
    if (!range.within(series.positions())) {
        throw std::invalid_argument("index range [" + std::to_string(range.first) + ", " +
                                    std::to_string(range.last) + "] is outside the series");
    }
}

}  // namespace

TrendModel fit_exponential_trend(const PriceSeries& series, IndexRange range) {
    check_range(series, range);
    if (range.size() < 2) throw std::invalid_argument("trend fit needs at least two observations");

    // Centred sums keep the normal equations well conditioned for large t.
    const auto n = static_cast<double>(range.size());
    double t_bar = 0.0;
    double y_bar = 0.0;
    for (std::int64_t k = range.first; k <= range.last; ++k) {
        t_bar += static_cast<double>(series.days()[static_cast<std::size_t>(k - 1)]);
        y_bar += std::log(series.at(k));
    }
    t_bar /= n;
    y_bar /= n;
    double stt = 0.0;
    double sty = 0.0;
    for (std::int64_t k = range.first; k <= range.last; ++k) {
        const double dt = static_cast<double>(series.days()[static_cast<std::size_t>(k - 1)]) - t_bar;
        stt += dt * dt;
        sty += dt * (std::log(series.at(k)) - y_bar);
    }
    if (stt == 0.0) throw std::invalid_argument("trend fit is degenerate: all day indices identical");
    const double mu = sty / stt;
    return {std::exp(y_bar - mu * t_bar), mu};
}

double log_residual_ss(const PriceSeries& series, IndexRange range, const TrendModel& model) {
    check_range(series, range);
    const double log_a = std::log(model.scale_a);
    double ss = 0.0;
    for (std::int64_t k = range.first; k <= range.last; ++k) {
        const double t = static_cast<double>(series.days()[static_cast<std::size_t>(k - 1)]);
        const double r = std::log(series.at(k)) - log_a - model.daily_rate_mu * t;
        ss += r * r;
    }
    return ss;
}

// ============================================================================
// MOVING WINDOW STATISTICS
// ============================================================================

WindowStats moving_window_stats(const PriceSeries& series, std::size_t window_len) {
    if (window_len == 0) throw std::invalid_argument("window length must be positive");
    if (window_len > series.size()) {
        throw std::invalid_argument("window of " + std::to_string(window_len) + " days is longer than the series (" +
                                    std::to_string(series.size()) + ")");
    }
    WindowStats stats;
    stats.window_len = window_len;
    stats.first_start = 1;
    const std::size_t n = series.size() - window_len + 1;
    stats.means.resize(n);
    stats.sds.resize(n);
    kernels::active().window_stats(series.prices(), window_len, stats.means, stats.sds);
    return stats;
}

double recent_sd_average(const WindowStats& stats, IndexRange range) {
    if (range.empty()) throw std::invalid_argument("sd average over an empty range");
    if (!range.within(stats.starts())) throw std::invalid_argument("sd average range is outside the window stats");
    double sum = 0.0;
    for (std::int64_t k = range.first; k <= range.last; ++k) sum += stats.sd_at(k);
    return sum / static_cast<double>(range.size());
}

void write_window_stats(std::ostream& out, const WindowStats& stats, char delimiter) {
    out << "start_index" << delimiter << "mean" << delimiter << "sd\n";
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out << stats.first_start + static_cast<std::int64_t>(i) << delimiter << fmt6(stats.means[i]) << delimiter
            << fmt6(stats.sds[i]) << '\n';
    }
}

WindowStats read_window_stats(std::istream& in, std::size_t window_len, char delimiter) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("window stats: missing header");
    WindowStats stats;
    stats.window_len = window_len;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const auto f = split_fields(line, delimiter);
        double start = 0.0;
        double mean = 0.0;
        double sd = 0.0;
        if (f.size() != 3 || !parse_double(f[0], start) || !parse_double(f[1], mean) || !parse_double(f[2], sd)) {
            throw InputError("window stats: malformed row " + std::to_string(row));
        }
        const auto k = static_cast<std::int64_t>(start);
        if (row == 1) {
            stats.first_start = k;
        } else if (k != stats.first_start + static_cast<std::int64_t>(row - 1)) {
            throw InputError("window stats: non-contiguous start index at row " + std::to_string(row));
        }
        stats.means.push_back(mean);
        stats.sds.push_back(sd);
    }
    return stats;
}

}  // namespace optval
