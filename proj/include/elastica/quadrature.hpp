#pragma once

#include <array>
#include <cmath>

#include "elastica/common.hpp"

namespace elastica::quad {

// Gauss-Legendre order 8 on [-1, 1].
inline constexpr std::array<double, 8> kNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Single Gauss-Legendre panel of F over [a, b].
template <class F>
double panel(double a, double b, F&& f) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0;
    for (int q = 0; q < 8; ++q) s += kWeights[static_cast<std::size_t>(q)] * f(mid + half * kNodes[static_cast<std::size_t>(q)]);
    return s * half;
}

// Composite rule with n equal panels.
template <class F>
double composite(double a, double b, int n, F&& f) {
    KahanSum s;
    for (int i = 0; i < n; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / n;
        const double hi = a + (b - a) * static_cast<double>(i + 1) / n;
        s.add(panel(lo, hi, f));
    }
    return s.value();
}

// Visit the composite quadrature nodes and weights without summing, for
// vector-valued accumulation.
template <class F>
void visit(double a, double b, int n, F&& f) {
    for (int i = 0; i < n; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / n;
        const double hi = a + (b - a) * static_cast<double>(i + 1) / n;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (int q = 0; q < 8; ++q)
            f(mid + half * kNodes[static_cast<std::size_t>(q)],
              half * kWeights[static_cast<std::size_t>(q)]);
    }
}

}  // namespace elastica::quad
