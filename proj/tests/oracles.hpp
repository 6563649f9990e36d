#pragma once

// Test-only reference computations. Nothing here calls into the library's
// closed forms; every value is obtained by direct numerical integration or
// brute-force arithmetic.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace optval::oracle {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

template <class F>
double integrate(F f, double a, double b) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &err);
}

/// Phi(x) = 1/2 + integral of the density over [0, x].
inline double normal_cdf_by_quadrature(double x) { return 0.5 + integrate(normal_pdf, 0.0, x); }

/// E[e^{-rho s} (Z_s - kappa)] for Z_s = e^{u}, u ~ N(mu s, sigma^2 s),
/// integrated over the log price.
inline double q_by_quadrature(double s, double mu, double sigma, double rho, double kappa) {
    if (s == 0.0) return 1.0 - kappa;
    const double vol = sigma * std::sqrt(s);
    const auto f = [&](double x) { return (std::exp(mu * s + vol * x) - kappa) * normal_pdf(x); };
    // The e^{vol x} weight moves the mass to x ~ vol.
    return std::exp(-rho * s) * integrate(f, -40.0, 40.0 + vol);
}

/// e^{-rho T} E[max(Z_T - kappa, 0)] under the risk-neutral log-normal law
/// ln Z_T ~ N(ln z + (rho - sigma^2/2) T, sigma^2 T).
inline double call_by_quadrature(double z, double kappa, double rho, double sigma, double T) {
    const double vol = sigma * std::sqrt(T);
    const double drift = std::log(z) + (rho - 0.5 * sigma * sigma) * T;
    const double kink = (std::log(kappa) - drift) / vol;
    const auto f = [&](double x) { return std::max(std::exp(drift + vol * x) - kappa, 0.0) * normal_pdf(x); };
    const double lo = std::max(kink, -40.0);
    return std::exp(-rho * T) * integrate(f, lo, std::max(lo, 0.0) + 40.0 + vol);
}

struct MeanSd {
    double mean;
    double sd;
};

/// Textbook two-pass sample statistics of one window.
inline MeanSd window_brute_force(const std::vector<double>& x, std::size_t start, std::size_t len) {
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) sum += x[start + i];
    const double mean = sum / static_cast<double>(len);
    double ss = 0.0;
    for (std::size_t i = 0; i < len; ++i) ss += (x[start + i] - mean) * (x[start + i] - mean);
    return {mean, len > 1 ? std::sqrt(ss / static_cast<double>(len - 1)) : 0.0};
}

}  // namespace optval::oracle
