#pragma once

// Closed-form success/error laws for the search algorithms and their
// baselines. These are the independent oracles the simulator is checked
// against. Conventions: eps = 1 - |U_ts|^2 is the initial error probability,
// f = 1 - eps the marked fraction, sin^2(alpha) = f, cos(beta) = eps.
// Degenerate endpoints take their continuous-limit values.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fpsearch/errors.hpp"

namespace fpsearch::laws {

namespace detail {
inline void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(name) + " outside [0,1]");
}
}  // namespace detail

// Error after one O(pi/3, pi/3) application: eps -> eps^3.
inline double pi3_error(double eps) {
    detail::require_unit_interval(eps, "eps");
    return eps * eps * eps;
}

// |exp(i(theta-phi)/2) - 4 sin(theta/2) sin(phi/2) p| with p = |U_ts|^2:
// the factor by which O(theta, phi) scales the non-target amplitude, so the
// error probability after one application is (1 - p) * factor^2.
inline double scale_factor(double theta, double phi, double p) {
    detail::require_unit_interval(p, "p");
    const std::complex<double> rot = std::polar(1.0, 0.5 * (theta - phi));
    return std::abs(rot - 4.0 * std::sin(0.5 * theta) * std::sin(0.5 * phi) * p);
}

// eps^(3^level): error of the recursive phase search at the given level.
inline double recursion_error(double eps, int level) {
    detail::require_unit_interval(eps, "eps");
    if (level < 0) throw std::domain_error("level must be non-negative");
    return std::pow(eps, std::pow(3.0, level));
}

// eps^(2q+1): error of the measurement-based search after q iterations.
inline double measured_error(double eps, int q) {
    detail::require_unit_interval(eps, "eps");
    if (q < 0) throw std::domain_error("q must be non-negative");
    return std::pow(eps, 2.0 * q + 1.0);
}

// eps (2 eps - 1)^(2n): error of the one-ancilla measure-and-diffuse loop,
// n iterations. Beats pi3_error only for eps > 1/3.
inline double one_ancilla_error(double eps, int n) {
    detail::require_unit_interval(eps, "eps");
    if (n < 0) throw std::domain_error("n must be non-negative");
    return eps * std::pow(2.0 * eps - 1.0, 2.0 * n);
}

// sin^2((2 eta + 1) alpha) with sin(alpha) = sqrt(f): exact success of eta
// amplitude-amplification repetitions. Overshoots past f ~ 1/2.
inline double grover_success(double f, int eta) {
    detail::require_unit_interval(f, "f");
    if (eta < 0) throw std::domain_error("eta must be non-negative");
    const double alpha = std::asin(std::sqrt(f));
    const double s = std::sin((2.0 * eta + 1.0) * alpha);
    return s * s;
}

// f (sin^2((q+1) beta) + sin^2(q beta)) / sin^2(beta), cos(beta) = 1 - f.
// At q = 1 this reduces to f (1 + 4 (1-f)^2); f = 0 is degenerate and
// returns 0.
inline double younes_success(double f, int q) {
    detail::require_unit_interval(f, "f");
    if (q < 0) throw std::domain_error("q must be non-negative");
    if (f == 0.0) return 0.0;
    const double eps = 1.0 - f;
    const double beta = std::acos(eps);
    const double sin_beta_sq = 1.0 - eps * eps;
    const double s1 = std::sin((q + 1.0) * beta);
    const double s0 = std::sin(q * beta);
    return f * (s1 * s1 + s0 * s0) / sin_beta_sq;
}

// eps^(q+1): best classical strategy, q queries plus one final free pick.
inline double classical_error(double eps, int q) {
    detail::require_unit_interval(eps, "eps");
    if (q < 0) throw std::domain_error("q must be non-negative");
    return std::pow(eps, q + 1.0);
}

// Smallest q with eps_up^(2q+1) <= eps_th; O(1/f) for small f = 1 - eps_up.
inline int queries_to_threshold(double eps_up, double eps_th) {
    if (!(eps_th > 0.0 && eps_th < 1.0)) throw std::domain_error("eps_th outside (0,1)");
    if (eps_up >= 1.0) throw UnreachableThresholdError("eps_up = 1: error cannot decay");
    if (!(eps_up > 0.0)) throw std::domain_error("eps_up outside (0,1)");
    if (eps_th >= eps_up) return 0;
    // 2q+1 >= log(eps_th)/log(eps_up); nudge against rounding, then verify.
    int q = static_cast<int>(std::ceil(0.5 * (std::log(eps_th) / std::log(eps_up) - 1.0)));
    if (q < 0) q = 0;
    while (q > 0 && std::pow(eps_up, 2.0 * (q - 1) + 1.0) <= eps_th) --q;
    while (std::pow(eps_up, 2.0 * q + 1.0) > eps_th) ++q;
    return q;
}

inline int queries_to_threshold_for_fraction(double f, double eps_th) {
    detail::require_unit_interval(f, "f");
    return queries_to_threshold(1.0 - f, eps_th);
}

}  // namespace fpsearch::laws
