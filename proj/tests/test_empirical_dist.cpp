#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "optval/empirical_dist.hpp"
#include "optval/gbm_analytic.hpp"

using namespace optval;

namespace {

PriceSeries noisy_series(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> e(0.0, 0.02);
    std::vector<double> p(n);
    double x = 1.0;
    for (auto& v : p) {
        x *= std::exp(e(rng));
        v = x;
    }
    return PriceSeries::from_prices(p);
}

}  // namespace

// ============================================================================
// CELL ENUMERATION
// ============================================================================

TEST(EnumerateCells, ThreeHorizonsSixCells) {
    const auto t = enumerate_cells(3, {-3, 2});
    ASSERT_EQ(t.size(), 216u);
    EXPECT_EQ(t.front().indices, (std::vector<int>{-3, -3, -3}));
    EXPECT_EQ(t.back().indices, (std::vector<int>{2, 2, 2}));
    EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
    EXPECT_EQ(std::set<CellTuple>(t.begin(), t.end()).size(), 216u);
}

TEST(EnumerateCells, SmallCases) {
    const auto one = enumerate_cells(1, {0, 0});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].indices, std::vector<int>{0});
    const auto two = enumerate_cells(2, {0, 1});
    ASSERT_EQ(two.size(), 4u);
    EXPECT_EQ(two[0].indices, (std::vector<int>{0, 0}));
    EXPECT_EQ(two[1].indices, (std::vector<int>{0, 1}));
    EXPECT_EQ(two[2].indices, (std::vector<int>{1, 0}));
    EXPECT_EQ(two[3].indices, (std::vector<int>{1, 1}));
    EXPECT_THROW(enumerate_cells(2, {1, 0}), std::invalid_argument);
}

// ============================================================================
// FREQUENCY ESTIMATION
// ============================================================================

TEST(EstimateCellFrequency, DegenerateCellIsEmpty) {
    const auto s = PriceSeries::from_prices(std::vector<double>(100, 2.0));
    const auto st = moving_window_stats(s, 10);
    const auto e = estimate_cell_frequency(s, st, {5, 10}, {{0, 0}}, {1, 50});
    EXPECT_EQ(e.matches, 0);
    EXPECT_EQ(e.sample_count, 50);
    EXPECT_EQ(e.probability, 0.0);
}

TEST(EstimateCellFrequency, SingleHorizonExhaustive) {
    // For any window of w points, each point lies within (w-1)/sqrt(w) sample
    // sds of the mean; with w = 5 that is < 1.8, so [m-3s, m+3s) always
    // captures it.
    const auto s = noisy_series(3, 400);
    const auto st = moving_window_stats(s, 5);
    const auto est = estimate_all_cells(s, st, {7}, {-3, 2}, {1, 300});
    EXPECT_NEAR(total_probability(est), 1.0, 1e-12);
}

TEST(EstimateCellFrequency, RangeErrors) {
    const auto s = noisy_series(4, 100);
    const auto st = moving_window_stats(s, 10);
    EXPECT_THROW(estimate_cell_frequency(s, st, {20}, {{0}}, {1, 0}), std::invalid_argument);
    EXPECT_THROW(estimate_cell_frequency(s, st, {20}, {{0}}, {1, 80}), std::invalid_argument);
    EXPECT_THROW(estimate_cell_frequency(s, st, {20}, {{0, 1}}, {1, 10}), std::invalid_argument);
}

TEST(EstimateCellFrequency, NormalDeviationsMatchCdf) {
    // z[k] = m + sd * eps with known m and sd: supply the true (m, s) as the
    // window stats so each cell has probability Phi(p+1) - Phi(p).
    std::mt19937_64 rng(99);
    std::normal_distribution<double> eps(0.0, 1.0);
    const std::size_t n = 200000;
    std::vector<double> z(n);
    for (auto& v : z) v = 10.0 + 0.5 * eps(rng);
    const auto series = PriceSeries::from_prices(z);
    WindowStats st;
    st.window_len = 1;
    st.means.assign(n, 10.0);
    st.sds.assign(n, 0.5);
    const IndexRange starts{1, static_cast<std::int64_t>(n) - 1};
    for (int p = -3; p <= 2; ++p) {
        const auto e = estimate_cell_frequency(series, st, {1}, {{p}}, starts);
        const double expect = std_normal_cdf(p + 1.0) - std_normal_cdf(p);
        const double se = std::sqrt(expect * (1 - expect) / static_cast<double>(e.sample_count));
        EXPECT_NEAR(e.probability, expect, 3 * se) << "cell " << p;
    }
}

TEST(EstimateAllCells, AgreesWithPerTupleAndIsBounded) {
    const auto s = noisy_series(5, 1500);
    const auto st = moving_window_stats(s, 60);
    const std::vector<std::int64_t> h{20, 40, 60};
    const IndexRange starts{500, 950};
    const auto all = estimate_all_cells(s, st, h, {-3, 2}, starts);
    ASSERT_EQ(all.size(), 216u);
    for (const auto& e : all) {
        const auto one = estimate_cell_frequency(s, st, h, e.tuple, starts);
        EXPECT_EQ(one.matches, e.matches);
        EXPECT_EQ(one.probability, e.probability);
        EXPECT_EQ(e.sample_count, 451);
        EXPECT_GE(e.probability, 0.0);
        EXPECT_LE(e.probability, 1.0);
    }
    EXPECT_LE(total_probability(all), 1.0 + 1e-12);
    EXPECT_GT(total_probability(all), 0.5);
}

TEST(EstimateAllCells, Deterministic) {
    const auto s = noisy_series(6, 800);
    const auto st = moving_window_stats(s, 30);
    const auto a = estimate_all_cells(s, st, {10, 20}, {-3, 2}, {1, 700});
    const auto b = estimate_all_cells(s, st, {10, 20}, {-3, 2}, {1, 700});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].matches, b[i].matches);
}

TEST(CellGeometry, DisjointAndCovering) {
    // Every x in [m-3s, m+3s) falls in exactly one of the six cells.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> um(-100, 100), us(1e-6, 50), uf(-3.0, 3.0);
    for (int i = 0; i < 20000; ++i) {
        const double m = um(rng), s = us(rng);
        const double x = m + uf(rng) * s;
        if (!(x >= m - 3 * s && x < m + 3 * s)) continue;
        int hits = 0;
        for (int p = -3; p <= 2; ++p) {
            const double lower = m + p * s;
            const double upper = m + (p + 1.0) * s;
            hits += (x >= lower && x < upper) ? 1 : 0;
        }
        EXPECT_EQ(hits, 1) << m << " " << s << " " << x;
    }
}

TEST(TotalProbability, Basics) {
    EXPECT_EQ(total_probability({}), 0.0);
    std::vector<CellEstimate> v{{{{0}}, 0.25, 4, 1}, {{{1}}, 0.75, 4, 3}};
    EXPECT_EQ(total_probability(v), 1.0);
}

// ============================================================================
// RISK-NEUTRAL ANCHORS AND MEAN SHIFT
// ============================================================================

TEST(RiskNeutralAnchors, Cases) {
    const auto m = risk_neutral_anchors(3.7, 0.0003, {20, 40, 60});
    EXPECT_DOUBLE_EQ(m[0], 3.7 * std::exp(0.006));
    EXPECT_DOUBLE_EQ(m[1], 3.7 * std::exp(0.012));
    EXPECT_DOUBLE_EQ(m[2], 3.7 * std::exp(0.018));
    for (double a : risk_neutral_anchors(3.7, 0.0, {20, 40})) EXPECT_EQ(a, 3.7);
    EXPECT_EQ(risk_neutral_anchors(3.7, 0.0003, {0})[0], 3.7);
    EXPECT_THROW(risk_neutral_anchors(0.0, 0.0003, {1}), std::invalid_argument);
}

TEST(ShiftDistributionMean, Cases) {
    DiscreteDistribution h{{{0.0, 0.5}, {2.0, 0.5}}};
    const auto centred = shift_distribution_mean(h, 0.0);
    EXPECT_EQ(centred.atoms[0].value, -1.0);
    EXPECT_EQ(centred.atoms[1].value, 1.0);
    EXPECT_EQ(centred.atoms[0].mass, 0.5);

    DiscreteDistribution g{{{0.1, 0.2}, {0.7, 0.3}, {1.9, 0.4}}};
    const auto same = shift_distribution_mean(g, g.mean());
    for (std::size_t i = 0; i < g.atoms.size(); ++i) EXPECT_EQ(same.atoms[i].value, g.atoms[i].value);

    EXPECT_THROW(shift_distribution_mean(DiscreteDistribution{{{1.0, 0.0}}}, 1.0), std::invalid_argument);
}

TEST(ShiftDistributionMean, RandomProperties) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> val(-10, 10), mass(0.01, 1.0), target(-5, 5);
    for (int i = 0; i < 500; ++i) {
        DiscreteDistribution d;
        for (int a = 0; a < 5; ++a) d.atoms.push_back({val(rng), mass(rng) / 5.0});
        const double t = i == 0 ? 3.7 : target(rng);
        const auto shifted = shift_distribution_mean(d, t);
        // Independent mean: direct weighted sum.
        double num = 0, den = 0;
        for (const auto& a : shifted.atoms) {
            num += a.value * a.mass;
            den += a.mass;
        }
        EXPECT_NEAR(num / den, t, 1e-12);
        EXPECT_EQ(shifted.total_mass(), d.total_mass());
        for (std::size_t k = 0; k < d.atoms.size(); ++k) EXPECT_EQ(shifted.atoms[k].mass, d.atoms[k].mass);
        const auto back = shift_distribution_mean(shifted, d.mean());
        for (std::size_t k = 0; k < d.atoms.size(); ++k) EXPECT_NEAR(back.atoms[k].value, d.atoms[k].value, 1e-12);
    }
}

TEST(PartitionGrid, Validation) {
    PartitionGrid g{{20, 40, 60}, {-3, 2}, {3.7, 3.8, 3.9}, 0.1};
    EXPECT_NO_THROW(g.validate(60));
    EXPECT_EQ(g.cell_count(), 216);
    EXPECT_THROW(g.validate(50), std::invalid_argument);
    g.horizons = {20, 20, 60};
    EXPECT_THROW(g.validate(), std::invalid_argument);
    g.horizons = {20, 40, 60};
    g.anchors = {3.7, 3.8};
    EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(CellEstimatesFile, Header) {
    std::ostringstream out;
    write_cell_estimates(out, {{{{-3, 2}}, 0.5, 4, 2}});
    EXPECT_EQ(out.str(), "p1,p2,matches,sample_count,probability\n-3,2,2,4,0.5\n");
}
