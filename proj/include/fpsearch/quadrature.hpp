#pragma once

// Gauss-Legendre quadrature with nodes computed by Newton iteration on the
// Legendre recurrence. Exact for polynomials up to degree 2n - 1, which
// covers every error law integrated here.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fpsearch {

struct QuadratureRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("quadrature: order must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846264338327950288;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

inline double integrate(const std::function<double(double)>& fn, double lo, double hi, int order) {
    const QuadratureRule rule = gauss_legendre(order);
    const double mid = 0.5 * (lo + hi);
    const double halfwidth = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * fn(mid + halfwidth * rule.nodes[i]);
    }
    return acc * halfwidth;
}

}  // namespace fpsearch
