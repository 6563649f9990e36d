#include <gtest/gtest.h>

#include <cmath>

#include "optval/mc_oracle.hpp"

using namespace optval;

TEST(SimulateGbm, VanishingVolatilityIsDeterministicGrowth) {
    const GbmParams p{0.3, 1e-12, 0.5, 1.0, 2.0};
    const auto b = simulate_gbm(1.5, p, 8, 3, 1);
    for (std::size_t i = 0; i < b.n_paths(); ++i) {
        for (std::size_t k = 0; k <= b.n_steps(); ++k) {
            EXPECT_NEAR(b.at(i, k), 1.5 * std::exp(0.3 * 0.25 * static_cast<double>(k)), 1e-10);
        }
    }
}

TEST(SimulateGbm, SeedDeterminism) {
    const GbmParams p{0.1, 0.4, 0.5, 1.0, 1.0};
    EXPECT_EQ(simulate_gbm(1.0, p, 5, 9000, 42), simulate_gbm(1.0, p, 5, 9000, 42));
    EXPECT_FALSE(simulate_gbm(1.0, p, 5, 100, 42) == simulate_gbm(1.0, p, 5, 100, 43));
}

TEST(SimulateGbm, InvalidSizes) {
    const GbmParams p{0.1, 0.4, 0.5, 1.0, 1.0};
    EXPECT_THROW(simulate_gbm(1.0, p, 0, 10, 1), std::invalid_argument);
    EXPECT_THROW(simulate_gbm(1.0, p, 10, 0, 1), std::invalid_argument);
    EXPECT_THROW(simulate_gbm(0.0, p, 10, 10, 1), std::invalid_argument);
}

TEST(SimulateGbm, MomentIdentityUnderPhysicalDrift) {
    // E[Z_s / z0] = e^{(mu + sigma^2/2) s} with log-increment mean mu dt.
    const GbmParams p{0.0, 0.5, 1.0, 1.1, 2.0};
    const auto b = simulate_gbm(1.0, p, 4, 100000, 2024);
    for (double s : {0.5, 1.0, 2.0}) {
        const auto e = mc_expected_discounted_payoff(b, 0.0, 0.0, s);
        EXPECT_NEAR(e.value, std::exp(0.125 * s), 3 * e.std_error) << s;
    }
}

TEST(McExpectedDiscountedPayoff, MatchesClosedForm) {
    const GbmParams p{0.0, 0.5, 1.0, 1.1, 2.0};
    const auto b = simulate_gbm(1.0, p, 4, 100000, 99);
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
        const auto e = mc_expected_discounted_payoff(b, p.kappa, p.rho, s);
        EXPECT_NEAR(e.value, expected_discounted_payoff(s, p), 3 * e.std_error) << s;
    }
    EXPECT_THROW(mc_expected_discounted_payoff(b, p.kappa, p.rho, 0.3), std::invalid_argument);
}

TEST(McExpectedDiscountedPayoff, ZeroStrikeAndConstantPath) {
    const GbmParams p{0.0, 0.5, 1.0, 1.1, 2.0};
    const auto b = simulate_gbm(1.0, p, 4, 1000, 5);
    double mean = 0;
    for (std::size_t i = 0; i < b.n_paths(); ++i) mean += b.at(i, 2);
    mean /= static_cast<double>(b.n_paths());
    EXPECT_NEAR(mc_expected_discounted_payoff(b, 0.0, 0.7, 1.0).value, std::exp(-0.7) * mean, 1e-12);

    PathBatch flat(1, 2, 0.5, 2.0, 0, Measure::physical);
    for (std::size_t k = 0; k <= 2; ++k) flat.at(0, k) = 2.0;
    const auto e = mc_expected_discounted_payoff(flat, 1.5, 0.1, 1.0);
    EXPECT_DOUBLE_EQ(e.value, std::exp(-0.1) * 0.5);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(McPriceAsian, MartingaleIdentity) {
    const GbmParams p{0.2, 0.3, 0.05, 1.0, 1.0};
    const auto b = simulate_gbm(3.7, p, 10, 100000, 8, Measure::risk_neutral);
    for (std::size_t k = 1; k <= 10; ++k) {
        const double s = 0.1 * static_cast<double>(k);
        const auto e = mc_discounted_mean(b, p.rho, s);
        EXPECT_NEAR(e.value, 3.7, 3 * e.std_error) << s;
    }
    const auto last = mc_price_asian(b, {10}, 0.0, p.rho);
    EXPECT_NEAR(last.value, 3.7, 3 * last.std_error);
}

TEST(McPriceAsian, DegenerateAndGuards) {
    const GbmParams p{0.0, 1e-12, 0.01, 1.0, 60.0};
    const auto b = simulate_gbm(3.7, p, 60, 10, 3, Measure::risk_neutral);
    double avg = 0;
    for (int t : {20, 40, 60}) avg += 3.7 * std::exp(0.01 * t);
    avg /= 3;
    EXPECT_NEAR(mc_price_asian(b, {20, 40, 60}, 3.5, 0.01).value, (avg - 3.5) * std::exp(-0.6), 1e-9);
    EXPECT_EQ(mc_price_asian(b, {20, 40, 60}, 1e6, 0.01).value, 0.0);

    const auto physical = simulate_gbm(3.7, p, 60, 10, 3);
    EXPECT_THROW(mc_price_asian(physical, {60}, 3.5, 0.01), std::invalid_argument);
    EXPECT_THROW(mc_price_asian(b, {61}, 3.5, 0.01), std::invalid_argument);
}

TEST(McPriceAsian, StandardErrorShrinksWithPaths) {
    const GbmParams p{0.0, 0.3, 0.05, 1.0, 1.0};
    const auto small = mc_price_asian(simulate_gbm(1.0, p, 4, 20000, 10, Measure::risk_neutral), {2, 4}, 1.0, 0.05);
    const auto large = mc_price_asian(simulate_gbm(1.0, p, 4, 80000, 11, Measure::risk_neutral), {2, 4}, 1.0, 0.05);
    EXPECT_NEAR(small.std_error / large.std_error, 2.0, 0.4);
}

TEST(SyntheticSeries, ScaledToEndPriceAndNoiseless) {
    const auto s = synthetic_gbm_series(1000, 0.1, 0.0007, 0.015, 1, 3.7);
    EXPECT_EQ(s.size(), 1000u);
    EXPECT_NEAR(s.prices().back(), 3.7, 1e-12);
    const auto exact = synthetic_gbm_series(100, 2.0, 0.001, 0.0, 1);
    for (std::size_t k = 0; k < exact.size(); ++k) {
        EXPECT_NEAR(exact.prices()[k], 2.0 * std::exp(0.001 * static_cast<double>(k + 1)), 1e-12);
    }
}

TEST(McMeanWindowSd, ScalesWithVolatility) {
    const auto lo = simulate_gbm(3.7, {0.0, 0.01, 0.0003, 1.0, 120.0}, 120, 200, 1, Measure::risk_neutral);
    const auto hi = simulate_gbm(3.7, {0.0, 0.02, 0.0003, 1.0, 120.0}, 120, 200, 1, Measure::risk_neutral);
    const double a = mc_mean_window_sd(lo, 60, 0, 60);
    const double b = mc_mean_window_sd(hi, 60, 0, 60);
    EXPECT_NEAR(b / a, 2.0, 0.1);
}
