#pragma once

#include <optional>
#include <string_view>

namespace optval {

/// Parameters of the geometric-Brownian American call. Rates are per unit
/// time, sigma per sqrt(time).
struct GbmParams {
    double mu = 0.0;     ///< growth rate of the price process
    double sigma = 0.0;  ///< volatility, > 0
    double rho = 0.0;    ///< risk-free rate, > 0
    double kappa = 0.0;  ///< exercise price, > 0
    double tau = 0.0;    ///< expiry, > 0

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    /// Drift of the expected price, mu + sigma^2/2.
    [[nodiscard]] double mean_growth() const noexcept { return mu + 0.5 * sigma * sigma; }
};

/// Parameters for reproducing the q(s) figures: mu = 0, sigma = 0.5,
/// rho = 1, tau = 2.
[[nodiscard]] GbmParams figure_params(double kappa);

enum class ExerciseBoundary { immediate, interior, at_expiry };

[[nodiscard]] std::string_view to_string(ExerciseBoundary b) noexcept;

struct ExerciseDecision {
    double varsigma = 0.0;       ///< chosen exercise time in [t, tau]
    double q_at_varsigma = 0.0;  ///< expected discounted payoff there
    ExerciseBoundary boundary = ExerciseBoundary::immediate;
    /// Argmax derived from the sign of dq/ds, for cross-checking the grid.
    double analytic_varsigma = 0.0;
};

double std_normal_cdf(double x) noexcept;

/// q(s) = e^{-rho s} (e^{(mu + sigma^2/2) s} - kappa): expected payoff of
/// exercising at s, discounted to 0, for a unit initial price. Requires
/// 0 <= s <= tau.
double expected_discounted_payoff(double s, const GbmParams& p);

/// q_t(s) = q_0(s - t). Requires 0 <= t <= s <= tau.
double expected_discounted_payoff_from(double t, double s, const GbmParams& p);

/// Argmax of q_t over [t, tau] from the derivative sign:
///   dq/ds ∝ (a - rho) e^{a (s-t)} + rho kappa,  a = mu + sigma^2/2.
/// For 0 < a < rho the stationary point t + ln(rho kappa / (rho - a)) / a is
/// the unique maximum (clamped to [t, tau]); for a >= rho q increases; for
/// a <= 0 q is quasi-convex and the larger endpoint wins (earliest on ties).
double analytic_exercise_time(double t, const GbmParams& p);

/// Scans q_t on s = t, t + step, ..., tau (tau always included) and keeps the
/// first maximum. Requires 0 <= t < tau and 0 < grid_step <= tau - t.
ExerciseDecision optimal_exercise_time(double t, const GbmParams& p, double grid_step);
ExerciseDecision optimal_exercise_time(double t, const GbmParams& p);  // step tau/2000

/// Black-Scholes form with varsigma in place of expiry:
///   z N(d1) - kappa e^{-rho (varsigma - t)} N(d2).
/// At varsigma == t this is the intrinsic value max(z - kappa, 0).
double american_call_value(double z_t, double t, double varsigma, const GbmParams& p);

/// w0 + kappa >= z0, otherwise immediate exercise is a riskless profit of
/// z0 - kappa - w0.
struct FloorCheck {
    bool ok = true;
    double violation = 0.0;
};

FloorCheck arbitrage_floor_check(double w0, double kappa, double z0);

}  // namespace optval
