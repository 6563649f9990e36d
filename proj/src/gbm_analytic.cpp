#include "optval/gbm_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace optval {

void GbmParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
    if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
}

GbmParams figure_params(double kappa) { return {0.0, 0.5, 1.0, kappa, 2.0}; }

std::string_view to_string(ExerciseBoundary b) noexcept {
    switch (b) {
        case ExerciseBoundary::immediate: return "immediate";
        case ExerciseBoundary::interior: return "interior";
        case ExerciseBoundary::at_expiry: return "at_expiry";
    }
    return "unknown";
}

double std_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

double q_of_elapsed(double elapsed, const GbmParams& p) {
    return std::exp(-p.rho * elapsed) * (std::exp(p.mean_growth() * elapsed) - p.kappa);
}

}  // namespace

double expected_discounted_payoff(double s, const GbmParams& p) {
    p.validate();
    if (!(s >= 0.0 && s <= p.tau)) throw std::invalid_argument("exercise time s outside [0, tau]");
    return q_of_elapsed(s, p);
}

double expected_discounted_payoff_from(double t, double s, const GbmParams& p) {
    p.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("present time t must be >= 0");
    if (!(s >= t)) throw std::invalid_argument("exercise time s precedes present time t");
    if (!(s <= p.tau)) throw std::invalid_argument("exercise time s is after expiry");
    return q_of_elapsed(s - t, p);
}

double analytic_exercise_time(double t, const GbmParams& p) {
    p.validate();
    if (!(t >= 0.0 && t < p.tau)) throw std::invalid_argument("present time t must lie in [0, tau)");
    const double a = p.mean_growth();
    const double horizon = p.tau - t;

    if (a >= p.rho) return p.tau;
    if (a > 0.0) {
        const double ratio = p.rho * p.kappa / (p.rho - a);
        if (ratio <= 1.0) return t;
        return t + std::min(std::log(ratio) / a, horizon);
    }
    // a <= 0: dq/ds changes sign at most once, from - to +.
    const double at_t = q_of_elapsed(0.0, p);
    const double at_tau = q_of_elapsed(horizon, p);
    return at_tau > at_t ? p.tau : t;
}

ExerciseDecision optimal_exercise_time(double t, const GbmParams& p, double grid_step) {
    p.validate();
    if (!(t >= 0.0 && t < p.tau)) throw std::invalid_argument("present time t must lie in [0, tau)");
    const double horizon = p.tau - t;
    if (!(grid_step > 0.0) || grid_step > horizon * (1.0 + 1e-12)) {
        throw std::invalid_argument("grid step must lie in (0, tau - t]");
    }

    // Grid points are t + i*step; the last partial step lands on tau.
    const auto n_full = static_cast<std::int64_t>(std::floor(horizon / grid_step + 1e-9));
    double best_s = t;
    double best_q = q_of_elapsed(0.0, p);
    const auto consider = [&](double s) {
        const double q = q_of_elapsed(s - t, p);
        if (q > best_q) {
            best_q = q;
            best_s = s;
        }
    };
    for (std::int64_t i = 1; i <= n_full; ++i) consider(std::min(t + static_cast<double>(i) * grid_step, p.tau));
    if (best_s < p.tau && t + static_cast<double>(n_full) * grid_step < p.tau) consider(p.tau);

    ExerciseDecision d;
    d.varsigma = best_s;
    d.q_at_varsigma = best_q;
    d.boundary = best_s == t ? ExerciseBoundary::immediate
                 : best_s == p.tau ? ExerciseBoundary::at_expiry
                                   : ExerciseBoundary::interior;
    d.analytic_varsigma = analytic_exercise_time(t, p);
    return d;
}

ExerciseDecision optimal_exercise_time(double t, const GbmParams& p) {
    return optimal_exercise_time(t, p, p.tau / 2000.0);
}

double american_call_value(double z_t, double t, double varsigma, const GbmParams& p) {
    p.validate();
    if (!(z_t > 0.0) || !std::isfinite(z_t)) throw std::invalid_argument("share price must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("present time t must be >= 0");
    if (!(varsigma >= t)) throw std::invalid_argument("exercise time precedes present time");
    if (!(varsigma <= p.tau)) throw std::invalid_argument("exercise time is after expiry");

    const double remaining = varsigma - t;
    if (remaining == 0.0) return std::max(z_t - p.kappa, 0.0);

    const double vol = p.sigma * std::sqrt(remaining);
    const double log_moneyness = std::log(z_t / p.kappa);
    const double half_var = 0.5 * p.sigma * p.sigma;
    const double d1 = (log_moneyness + (p.rho + half_var) * remaining) / vol;
    const double d2 = (log_moneyness + (p.rho - half_var) * remaining) / vol;
    const double value = z_t * std_normal_cdf(d1) - p.kappa * std::exp(-p.rho * remaining) * std_normal_cdf(d2);
    return std::max(value, 0.0);
}

FloorCheck arbitrage_floor_check(double w0, double kappa, double z0) {
    if (w0 + kappa >= z0) return {true, 0.0};
    return {false, z0 - kappa - w0};
}

}  // namespace optval
