#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <span>
#include <vector>

#include "lowk/errors.hpp"

namespace lowk::quad {

/// Adaptive Gauss-Kronrod (15-point) on a finite interval.
template <class F>
double adaptive(F&& f, double a, double b, double tol = 1e-13, unsigned depth = 18,
                double* err = nullptr) {
    double e = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, depth, tol, &e, &l1);
    if (!std::isfinite(v)) throw QuadratureError("non-finite integral");
    if (err) *err = e;
    return v;
}

/// tanh-sinh for integrable endpoint singularities.
template <class F>
double endpoint_singular(F&& f, double a, double b, double tol = 1e-14, double* err = nullptr) {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double e = 0.0, l1 = 0.0;
    const double v = ts.integrate(f, a, b, tol, &e, &l1);
    if (!std::isfinite(v)) throw QuadratureError("non-finite integral");
    if (err) *err = e;
    return v;
}

/// Fixed 10-point Gauss-Legendre on [a, b].
template <class F>
double gauss10(F&& f, double a, double b) {
    using G = boost::math::quadrature::gauss<double, 10>;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    return s * h;
}

/// Recursive bisection of gauss10 to an absolute tolerance.
template <class F>
double adaptive_abs(F&& f, double a, double b, double abs_tol, int depth = 30) {
    const double m = 0.5 * (a + b);
    const double whole = gauss10(f, a, b);
    const double halves = gauss10(f, a, m) + gauss10(f, m, b);
    if (!std::isfinite(halves)) throw QuadratureError("non-finite integral");
    if (std::fabs(whole - halves) <= abs_tol || depth == 0) return halves;
    return adaptive_abs(f, a, m, 0.5 * abs_tol, depth - 1) + adaptive_abs(f, m, b, 0.5 * abs_tol, depth - 1);
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
double wynn_epsilon(std::span<const double> partial_sums);

/// Chebyshev-Lobatto nodes on [-1, 1] (ascending) with the matrix mapping
/// nodal values of f to nodal values of Int_{-1}^{x} f.
struct LobattoRule {
    int n = 0;
    std::vector<double> x;
    std::vector<double> cumulative;  // row-major n x n

    double cumulative_at(int i, int j) const { return cumulative[static_cast<std::size_t>(i * n + j)]; }
};

const LobattoRule& lobatto_rule(int n);

}  // namespace lowk::quad
