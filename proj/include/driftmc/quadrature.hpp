#pragma once

#include <cmath>
#include <cstddef>

#include "driftmc/errors.hpp"

namespace driftmc {

/// Average of a 1-periodic integrand over one period, composite trapezoid on
/// the uniform grid theta_j = j/n. For periodic integrands the endpoint
/// weights merge, so this is the n-point rectangle rule and converges
/// spectrally for trigonometric polynomials of degree < n/2.
///
/// F must be callable as f(double theta) returning a type supporting
/// operator+= and operator*(double).
template <typename F>
auto periodic_average(F&& f, int n) {
    auto acc = f(0.0);
    for (int j = 1; j < n; ++j) {
        acc += f(static_cast<double>(j) / n);
    }
    return acc * (1.0 / n);
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) {
        throw NumericError("adaptive quadrature failed to converge");
    }
    if (std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a scalar integrand on [a, b].
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace driftmc
