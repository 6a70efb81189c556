#include "lowk/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace lowk::quad {

double wynn_epsilon(std::span<const double> s) {
    const std::size_t n = s.size();
    if (n == 0) return 0.0;
    if (n < 3) return s[n - 1];
    // e[j] holds column k, e_prev column k-1
    std::vector<double> prev(n + 1, 0.0), cur(s.begin(), s.end());
    double best = s[n - 1];
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool ok = true;
        for (std::size_t j = 0; j + k < n; ++j) {
            const double d = cur[j + 1] - cur[j];
            if (d == 0.0 || !std::isfinite(d)) {
                ok = false;
                break;
            }
            next[j] = prev[j + 1] + 1.0 / d;
        }
        if (!ok) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) best = cur.back();
        if (cur.size() < 2) break;
    }
    return best;
}

namespace {

LobattoRule make_rule(int n) {
    LobattoRule r;
    r.n = n;
    const int m = n - 1;
    r.x.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) r.x[j] = -std::cos(std::numbers::pi * j / m);

    // Chebyshev coefficients of the interpolant from nodal values, integrate, evaluate.
    auto cheb = [&](int k, double x) { return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0))); };
    r.cumulative.assign(static_cast<std::size_t>(n * n), 0.0);
    for (int col = 0; col < n; ++col) {
        std::vector<double> c(static_cast<std::size_t>(n), 0.0);
        for (int k = 0; k < n; ++k) {
            double w = (col == 0 || col == m) ? 0.5 : 1.0;
            c[k] = 2.0 / m * w * cheb(k, r.x[col]);
        }
        c[0] *= 0.5;
        c[m] *= 0.5;
        // antiderivative coefficients
        std::vector<double> C(static_cast<std::size_t>(n + 1), 0.0);
        for (int k = 0; k < n; ++k) {
            if (k == 0) {
                C[1] += c[0];
            } else if (k == 1) {
                C[2] += c[1] / 4.0;
            } else {
                C[k + 1] += c[k] / (2.0 * (k + 1));
                C[k - 1] -= c[k] / (2.0 * (k - 1));
            }
        }
        auto F = [&](double x) {
            double s = 0.0;
            for (int k = 0; k <= n; ++k) s += C[k] * cheb(k, x);
            return s;
        };
        const double f0 = F(-1.0);
        for (int row = 0; row < n; ++row) r.cumulative[static_cast<std::size_t>(row * n + col)] = F(r.x[row]) - f0;
    }
    return r;
}

}  // namespace

const LobattoRule& lobatto_rule(int n) {
    static std::mutex mu;
    static std::map<int, LobattoRule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

}  // namespace lowk::quad
