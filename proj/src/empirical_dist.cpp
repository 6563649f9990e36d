#include "optval/empirical_dist.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "optval/kernels.hpp"
#include "optval/report.hpp"

namespace optval {

void PartitionGrid::validate(std::int64_t term_days) const {
    if (horizons.empty()) throw std::invalid_argument("partition needs at least one horizon");
    for (std::size_t j = 0; j < horizons.size(); ++j) {
        if (horizons[j] < 0) throw std::invalid_argument("horizons must be non-negative");
        if (j > 0 && horizons[j] <= horizons[j - 1]) throw std::invalid_argument("horizons must be strictly increasing");
    }
    if (term_days > 0 && horizons.back() > term_days) throw std::invalid_argument("last horizon exceeds option term");
    if (cells.size() == 0) throw std::invalid_argument("cell index range is empty");
    if (anchors.size() != horizons.size()) throw std::invalid_argument("need one anchor per horizon");
    for (double a : anchors) {
        if (!(a > 0.0)) throw std::invalid_argument("anchors must be positive");
    }
    if (!(cell_width_s0 >= 0.0)) throw std::invalid_argument("cell width must be non-negative");
}

std::int64_t PartitionGrid::cell_count() const {
    std::int64_t n = 1;
    for (std::size_t j = 0; j < horizons.size(); ++j) n *= cells.size();
    return n;
}

double DiscreteDistribution::total_mass() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms) m += a.mass;
    return m;
}

double DiscreteDistribution::mean() const {
    const double total = total_mass();
    if (!(total > 0.0)) throw std::invalid_argument("distribution has no mass");
    double first = 0.0;
    for (const auto& a : atoms) first += a.value * a.mass;
    return first / total;
}

std::vector<CellTuple> enumerate_cells(int num_horizons, CellRange range) {
    if (num_horizons < 1) throw std::invalid_argument("need at least one horizon");
    if (range.size() == 0) throw std::invalid_argument("cell index range is empty");
    std::vector<CellTuple> out;
    std::vector<int> current(static_cast<std::size_t>(num_horizons), range.lo);
    // Odometer with the last horizon varying fastest.
    while (true) {
        out.push_back({current});
        int j = num_horizons - 1;
        while (j >= 0 && current[static_cast<std::size_t>(j)] == range.hi) {
            current[static_cast<std::size_t>(j)] = range.lo;
            --j;
        }
        if (j < 0) break;
        ++current[static_cast<std::size_t>(j)];
    }
    return out;
}

namespace {

std::vector<kernels::Band> make_bands(const PriceSeries& series, const WindowStats& stats,
                                      const std::vector<std::int64_t>& horizons, IndexRange start_range) {
    if (start_range.empty()) throw std::invalid_argument("start range is empty");
    if (horizons.empty()) throw std::invalid_argument("need at least one horizon");
    if (start_range.first < 1) throw std::invalid_argument("start range begins before the first observation");
    const std::int64_t far = start_range.last + horizons.back();
    if (far > static_cast<std::int64_t>(series.size())) {
        throw std::invalid_argument("start range plus last horizon (" + std::to_string(far) +
                                    ") exceeds the series length " + std::to_string(series.size()));
    }
    if (!stats.starts().contains(start_range.first + horizons.front()) || !stats.starts().contains(far)) {
        throw std::invalid_argument("start range plus horizons (up to " + std::to_string(far) +
                                    ") exceeds the window stats coverage");
    }
    std::vector<kernels::Band> bands;
    bands.reserve(horizons.size());
    for (std::int64_t h : horizons) {
        const std::int64_t k0 = start_range.first + h;
        const auto zi = static_cast<std::size_t>(k0 - 1);
        const auto si = static_cast<std::size_t>(k0 - stats.first_start);
        bands.push_back({series.prices().data() + zi, stats.means.data() + si, stats.sds.data() + si});
    }
    return bands;
}

}  // namespace

CellEstimate estimate_cell_frequency(const PriceSeries& series, const WindowStats& stats,
                                     const std::vector<std::int64_t>& horizons, const CellTuple& tuple,
                                     IndexRange start_range) {
    if (tuple.indices.size() != horizons.size()) throw std::invalid_argument("tuple length differs from horizon count");
    const auto bands = make_bands(series, stats, horizons, start_range);
    CellEstimate e;
    e.tuple = tuple;
    e.sample_count = start_range.size();
    e.matches = kernels::active().count_matches(bands, tuple.indices, static_cast<std::size_t>(e.sample_count));
    e.probability = static_cast<double>(e.matches) / static_cast<double>(e.sample_count);
    return e;
}

std::vector<CellEstimate> estimate_all_cells(const PriceSeries& series, const WindowStats& stats,
                                             const std::vector<std::int64_t>& horizons, CellRange cells,
                                             IndexRange start_range) {
    const auto tuples = enumerate_cells(static_cast<int>(horizons.size()), cells);
    const auto bands = make_bands(series, stats, horizons, start_range);
    const auto n = static_cast<std::size_t>(start_range.size());
    const auto& kt = kernels::active();

    // Mixed-radix code of each start's tuple, matching enumerate_cells order.
    const auto radix = static_cast<std::int64_t>(cells.size());
    std::vector<std::int64_t> code(n, 0);
    std::vector<bool> inside(n, true);
    std::vector<std::int32_t> cls(n);
    for (const auto& band : bands) {
        kt.classify(band, cells.lo, cells.hi, n, cls);
        for (std::size_t k = 0; k < n; ++k) {
            if (cls[k] == kernels::outside) {
                inside[k] = false;
            } else {
                code[k] = code[k] * radix + (cls[k] - cells.lo);
            }
        }
    }
    std::vector<std::int64_t> hist(tuples.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (inside[k]) ++hist[static_cast<std::size_t>(code[k])];
    }

    std::vector<CellEstimate> out;
    out.reserve(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        out.push_back({tuples[i], static_cast<double>(hist[i]) / static_cast<double>(n),
                       static_cast<std::int64_t>(n), hist[i]});
    }
    return out;
}

double total_probability(const std::vector<CellEstimate>& estimates) {
    double sum = 0.0;
    for (const auto& e : estimates) sum += e.probability;
    return sum;
}

std::vector<double> risk_neutral_anchors(double z0, double rho_daily, const std::vector<std::int64_t>& horizons) {
    if (!(z0 > 0.0)) throw std::invalid_argument("initial price must be positive");
    std::vector<double> out;
    out.reserve(horizons.size());
    for (std::int64_t h : horizons) out.push_back(z0 * std::exp(rho_daily * static_cast<double>(h)));
    return out;
}

DiscreteDistribution shift_distribution_mean(const DiscreteDistribution& dist, double target_mean) {
    // Centring to 0 then re-centring at the target is one translation.
    const double shift = target_mean - dist.mean();
    DiscreteDistribution out = dist;
    for (auto& a : out.atoms) a.value += shift;
    return out;
}

void write_cell_estimates(std::ostream& out, const std::vector<CellEstimate>& estimates, char delimiter) {
    if (estimates.empty()) return;
    const std::size_t d = estimates.front().tuple.indices.size();
    for (std::size_t j = 0; j < d; ++j) out << 'p' << (j + 1) << delimiter;
    out << "matches" << delimiter << "sample_count" << delimiter << "probability\n";
    for (const auto& e : estimates) {
        for (int p : e.tuple.indices) out << p << delimiter;
        out << e.matches << delimiter << e.sample_count << delimiter << fmt6(e.probability) << '\n';
    }
}

}  // namespace optval
