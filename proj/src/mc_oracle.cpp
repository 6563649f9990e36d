#include "optval/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace optval {

namespace {

constexpr std::size_t block_paths = 4096;

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

// Welford accumulator; paths are visited in index order so results are
// bit-stable.
class RunningMoments {
public:
    void add(double x) noexcept {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }
    [[nodiscard]] McEstimate estimate() const noexcept {
        McEstimate e;
        e.n = n_;
        e.value = mean_;
        e.std_error = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
        return e;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace

PathBatch::PathBatch(std::size_t n_paths, std::size_t n_steps, double dt, double z0, std::uint64_t seed,
                     Measure measure)
    : n_paths_(n_paths),
      n_steps_(n_steps),
      dt_(dt),
      z0_(z0),
      seed_(seed),
      measure_(measure),
      data_(n_paths * (n_steps + 1), 0.0) {}

std::size_t PathBatch::step_of(double s) const {
    const double idx = s / dt_;
    const double rounded = std::round(idx);
    if (s < 0.0 || rounded > static_cast<double>(n_steps_) || std::abs(idx - rounded) > 1e-9 * std::max(1.0, idx)) {
        throw std::invalid_argument("time is not on the simulation grid");
    }
    return static_cast<std::size_t>(rounded);
}

PathBatch simulate_gbm(double z0, const GbmParams& p, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                       Measure measure) {
    if (!(z0 > 0.0)) throw std::invalid_argument("initial price must be positive");
    if (n_steps == 0 || n_paths == 0) throw std::invalid_argument("need at least one step and one path");
    p.validate();

    const double dt = p.tau / static_cast<double>(n_steps);
    const double drift = measure == Measure::physical ? p.mu : p.rho - 0.5 * p.sigma * p.sigma;
    const double mean_step = drift * dt;
    const double sd_step = p.sigma * std::sqrt(dt);

    PathBatch batch(n_paths, n_steps, dt, z0, seed, measure);
    for (std::size_t first = 0; first < n_paths; first += block_paths) {
        auto engine = block_engine(seed, first / block_paths);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t last = std::min(n_paths, first + block_paths);
        for (std::size_t i = first; i < last; ++i) {
            double log_z = 0.0;
            batch.at(i, 0) = z0;
            for (std::size_t k = 1; k <= n_steps; ++k) {
                log_z += mean_step + sd_step * normal(engine);
                batch.at(i, k) = z0 * std::exp(log_z);
            }
        }
    }
    return batch;
}

McEstimate mc_expected_discounted_payoff(const PathBatch& batch, double kappa, double rho, double s) {
    const std::size_t k = batch.step_of(s);
    const double discount = std::exp(-rho * s);
    RunningMoments acc;
    for (std::size_t i = 0; i < batch.n_paths(); ++i) acc.add(discount * (batch.at(i, k) - kappa));
    return acc.estimate();
}

McEstimate mc_discounted_mean(const PathBatch& batch, double rho, double s) {
    return mc_expected_discounted_payoff(batch, 0.0, rho, s);
}

McEstimate mc_price_asian(const PathBatch& batch, const std::vector<std::size_t>& averaging_steps, double kappa,
                          double rho) {
    if (!batch.risk_neutral()) throw std::invalid_argument("Asian oracle needs a risk-neutral path batch");
    if (averaging_steps.empty()) throw std::invalid_argument("need at least one averaging date");
    for (std::size_t k : averaging_steps) {
        if (k > batch.n_steps()) throw std::invalid_argument("averaging date beyond the simulation grid");
    }
    const double expiry = batch.dt() * static_cast<double>(batch.n_steps());
    const double discount = std::exp(-rho * expiry);
    const auto count = static_cast<double>(averaging_steps.size());
    RunningMoments acc;
    for (std::size_t i = 0; i < batch.n_paths(); ++i) {
        double sum = 0.0;
        for (std::size_t k : averaging_steps) sum += batch.at(i, k);
        acc.add(discount * std::max(sum / count - kappa, 0.0));
    }
    return acc.estimate();
}

double mc_mean_window_sd(const PathBatch& batch, std::size_t window, std::size_t first_step, std::size_t last_step) {
    if (window < 2) throw std::invalid_argument("window sd needs at least two points");
    if (first_step > last_step || last_step + window - 1 > batch.n_steps()) {
        throw std::invalid_argument("window range exceeds the simulation grid");
    }
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < batch.n_paths(); ++i) {
        for (std::size_t k = first_step; k <= last_step; ++k) {
            double sum = 0.0;
            for (std::size_t j = 0; j < window; ++j) sum += batch.at(i, k + j);
            const double mean = sum / static_cast<double>(window);
            double ss = 0.0;
            for (std::size_t j = 0; j < window; ++j) ss += (batch.at(i, k + j) - mean) * (batch.at(i, k + j) - mean);
            total += std::sqrt(ss / static_cast<double>(window - 1));
            ++n;
        }
    }
    return total / static_cast<double>(n);
}

PriceSeries synthetic_gbm_series(std::size_t length, double start_price, double log_drift, double sigma,
                                 std::uint64_t seed, double end_price) {
    if (length == 0) throw std::invalid_argument("series length must be positive");
    if (!(start_price > 0.0)) throw std::invalid_argument("start price must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
    auto engine = block_engine(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> prices(length);
    double log_z = 0.0;
    for (std::size_t k = 0; k < length; ++k) {
        log_z += log_drift + sigma * normal(engine);
        prices[k] = start_price * std::exp(log_z);
    }
    if (end_price > 0.0) {
        const double scale = end_price / prices.back();
        for (double& v : prices) v *= scale;
    }
    return PriceSeries::from_prices(prices, "synthetic-gbm");
}

}  // namespace optval
