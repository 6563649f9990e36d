#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "optval/gbm_analytic.hpp"
#include "optval/market_data.hpp"

namespace optval {

/// Which drift the log-increments carry.
///   physical:     mean mu*dt, so E[Z_s] = z0 e^{(mu + sigma^2/2) s}.
///   risk_neutral: mean (rho - sigma^2/2)*dt, so e^{-rho s} Z_s is a
///                 martingale.
enum class Measure { physical, risk_neutral };

/// Simulated price paths on the grid t_i = i*dt, i = 0..n_steps. Column 0
/// holds z0.
class PathBatch {
public:
    PathBatch(std::size_t n_paths, std::size_t n_steps, double dt, double z0, std::uint64_t seed, Measure measure);

    [[nodiscard]] std::size_t n_paths() const noexcept { return n_paths_; }
    [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double z0() const noexcept { return z0_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] Measure measure() const noexcept { return measure_; }
    [[nodiscard]] bool risk_neutral() const noexcept { return measure_ == Measure::risk_neutral; }

    [[nodiscard]] double at(std::size_t path, std::size_t step) const noexcept {
        return data_[path * (n_steps_ + 1) + step];
    }
    double& at(std::size_t path, std::size_t step) noexcept { return data_[path * (n_steps_ + 1) + step]; }

    /// Grid index of time s, or throws std::invalid_argument if s is not on
    /// the grid (relative tolerance 1e-9).
    [[nodiscard]] std::size_t step_of(double s) const;

    friend bool operator==(const PathBatch&, const PathBatch&) = default;

private:
    std::size_t n_paths_;
    std::size_t n_steps_;
    double dt_;
    double z0_;
    std::uint64_t seed_;
    Measure measure_;
    std::vector<double> data_;
};

/// Mean of a Monte-Carlo sample with its standard error.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Exact log-normal stepping over [0, p.tau] with dt = tau / n_steps. Paths
/// are generated in fixed-size blocks, each seeded from (seed, block), so the
/// batch depends only on its arguments.
PathBatch simulate_gbm(double z0, const GbmParams& p, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                       Measure measure = Measure::physical);

/// Mean over paths of e^{-rho s} (Z_s - kappa).
McEstimate mc_expected_discounted_payoff(const PathBatch& batch, double kappa, double rho, double s);

/// Mean of e^{-rho tau} Z_s over paths: equals z0 for a martingale.
McEstimate mc_discounted_mean(const PathBatch& batch, double rho, double s);

/// Mean of e^{-rho T} max(avg_j Z_{i_j} - kappa, 0), T = time of the last
/// grid column. Requires a risk-neutral batch.
McEstimate mc_price_asian(const PathBatch& batch, const std::vector<std::size_t>& averaging_steps, double kappa,
                          double rho);

/// Mean of the rolling-window sample sd along each path, averaged over the
/// windows starting in [first_step, last_step] and over paths. Used to match
/// a simulated volatility to a historical cell width s0.
double mc_mean_window_sd(const PathBatch& batch, std::size_t window, std::size_t first_step, std::size_t last_step);

/// One synthetic history: days 1..length with log-increments
/// N(log_drift, sigma^2) starting from start_price at day 0, then scaled so
/// the last price equals end_price when end_price > 0. sigma may be 0.
PriceSeries synthetic_gbm_series(std::size_t length, double start_price, double log_drift, double sigma,
                                 std::uint64_t seed, double end_price = 0.0);

}  // namespace optval
