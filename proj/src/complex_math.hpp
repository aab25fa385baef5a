#pragma once

#include "sarframe/signal_core.hpp"

#include <cmath>

namespace sarframe::detail {

// exp(z) - 1 without cancellation for small |z|.
inline Complex expm1(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// Integral of exp(b x) over [lo, hi].
inline Complex exp_integral(Complex b, double lo, double hi) {
    const double len = hi - lo;
    if (len <= 0.0) return {0.0, 0.0};
    if (std::abs(b) * len < 1e-300) return {len, 0.0};
    return std::exp(b * lo) * detail::expm1(b * len) / b;
}

// sum_{k = k0}^{k1 - 1} exp(z k)
inline Complex geometric_sum(Complex z, long k0, long k1) {
    const long n = k1 - k0;
    if (n <= 0) return {0.0, 0.0};
    const Complex denom = detail::expm1(z);
    const Complex head = std::exp(z * static_cast<double>(k0));
    if (std::abs(denom) < 1e-300) return head * static_cast<double>(n);
    return head * detail::expm1(z * static_cast<double>(n)) / denom;
}

}  // namespace sarframe::detail
