#include "lowk/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lowk/errors.hpp"
#include "lowk/quadrature.hpp"

namespace lowk {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double series_max = 8.0;
constexpr double miller_max = 25.0;

struct Full {
    double j0, j1, y0, y1, err;
};

// Ascending series; y0 carries only the remainder R(z) in `r`.
struct SeriesOut {
    double j0, j1, r, y1, err;
};

SeriesOut series(double z) {
    const double q = 0.25 * z * z;
    double t0 = 1.0, t1 = 1.0;  // (-q)^k/(k!)^2 and (-q)^k/(k!(k+1)!)
    double j0 = 1.0, j1s = 1.0, rs = 0.0;
    double h = 0.0;  // H_k
    double s1 = (-2.0 * euler_gamma + 1.0) * t1;
    double abs_sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        t0 *= -q / (double(k) * k);
        t1 *= -q / (double(k) * (k + 1));
        h += 1.0 / k;
        j0 += t0;
        j1s += t1;
        rs -= h * t0;
        s1 += (-2.0 * euler_gamma + 2.0 * h + 1.0 / (k + 1)) * t1;
        abs_sum += std::fabs(t0) * (1.0 + h);
        if (k > q && std::fabs(t0) * (1.0 + h) < 1e-18 * std::fabs(j0)) break;
    }
    SeriesOut o;
    o.j0 = j0;
    o.j1 = 0.5 * z * j1s;
    o.r = 2.0 / pi * rs;
    o.y1 = -2.0 / (pi * z) + 2.0 / pi * std::log(0.5 * z) * o.j1 - z / (2.0 * pi) * s1;
    o.err = 4.0 * eps * abs_sum;
    return o;
}

// Backward recurrence normalized with J0 + 2 sum J_2k = 1, Neumann series for Y.
Full miller(double z) {
    int n = static_cast<int>(z + 40.0 + 2.0 * std::sqrt(z));
    if (n % 2) ++n;
    std::vector<double> j(static_cast<std::size_t>(n + 2), 0.0);
    j[n + 1] = 0.0;
    j[n] = 1e-30;
    for (int m = n; m >= 1; --m) j[m - 1] = 2.0 * m / z * j[m] - j[m + 1];
    double norm = j[0];
    double s0 = 0.0, s1 = 0.0;
    for (int k = 1; 2 * k <= n; ++k) {
        norm += 2.0 * j[2 * k];
        const double sgn = (k % 2) ? -1.0 : 1.0;
        s0 += sgn * j[2 * k] / k;
        s1 += sgn * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    Full f;
    f.j0 = j[0] / norm;
    f.j1 = j[1] / norm;
    const double l = std::log(0.5 * z) + euler_gamma;
    f.y0 = 2.0 / pi * l * f.j0 - 4.0 / pi * s0 / norm;
    f.y1 = -2.0 / pi * f.j0 / z + 2.0 / pi * l * f.j1 + 2.0 / pi * s1 / norm;
    f.err = 20.0 * eps * (1.0 + l);
    return f;
}

// Hankel expansion; phases built from cos z, sin z.
Full hankel(double z) {
    double p0 = 0.0, q0 = 0.0, p1 = 0.0, q1 = 0.0;
    double t0 = 1.0, t1 = 1.0;
    double last0 = 1.0, last1 = 1.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            const double odd = 2.0 * k - 1.0;
            const double n0 = t0 * (0.0 - odd * odd) / (8.0 * k * z);
            const double n1 = t1 * (4.0 - odd * odd) / (8.0 * k * z);
            if (std::fabs(n0) > std::fabs(last0) && k > 2) break;
            t0 = n0;
            t1 = n1;
        }
        const double sgn = ((k / 2) % 2) ? -1.0 : 1.0;
        if (k % 2 == 0) {
            p0 += sgn * t0;
            p1 += sgn * t1;
        } else {
            q0 += sgn * t0;
            q1 += sgn * t1;
        }
        last0 = t0;
        last1 = t1;
        if (std::fabs(t0) < 1e-17 && std::fabs(t1) < 1e-17) break;
    }
    const double c = std::cos(z), s = std::sin(z);
    const double amp = std::sqrt(2.0 / (pi * z));
    const double r2 = std::numbers::sqrt2 / 2.0;
    const double c0 = (c + s) * r2, s0 = (s - c) * r2;  // chi = z - pi/4
    const double c1 = (s - c) * r2, s1 = -(s + c) * r2;  // chi = z - 3pi/4
    Full f;
    f.j0 = amp * (p0 * c0 - q0 * s0);
    f.y0 = amp * (p0 * s0 + q0 * c0);
    f.j1 = amp * (p1 * c1 - q1 * s1);
    f.y1 = amp * (p1 * s1 + q1 * c1);
    f.err = amp * (4.0 * eps + std::fabs(last0) + std::fabs(last1)) + 2.0 * eps * z * amp;
    return f;
}

Full full(double z) {
    if (z < series_max) {
        const SeriesOut s = series(z);
        const double l = std::log(0.5 * z) + euler_gamma;
        return {s.j0, s.j1, 2.0 / pi * l * s.j0 + s.r, s.y1, s.err * (1.0 + std::fabs(l))};
    }
    if (z < miller_max) return miller(z);
    return hankel(z);
}

// m-th positive zero of J0 (n = 0) or J1 (n = 1): McMahon start, Newton polish.
double bessel_zero(int n, int m) {
    const double mu = 4.0 * n * n;
    const double b = (m + 0.5 * n - 0.25) * pi;
    const double e = 8.0 * b;
    double z = b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
    for (int it = 0; it < 8; ++it) {
        double j0, j1;
        bessel_j01(z, j0, j1);
        const double dz = n == 0 ? j0 / j1 : -j1 / (j0 - j1 / z);
        z += dz;
        if (std::fabs(dz) < 1e-15 * z) break;
    }
    return z;
}

void check_finite(double z, const char* name) {
    if (!std::isfinite(z)) throw DomainError(std::string(name) + ": non-finite argument");
}

}  // namespace

Bessel01 bessel01(double z) {
    const Full f = full(z);
    return {f.j0, f.j1, f.y0, f.y1};
}

void bessel_j01(double z, double& j0, double& j1) {
    if (z < series_max) {
        const SeriesOut s = series(z);
        j0 = s.j0;
        j1 = s.j1;
        return;
    }
    const Full f = z < miller_max ? miller(z) : hankel(z);
    j0 = f.j0;
    j1 = f.j1;
}

SpecialValue bessel_j0(double z) {
    check_finite(z, "bessel_j0");
    z = std::fabs(z);
    if (z == 0.0) return {1.0, 0.0};
    const Full f = full(z);
    return {f.j0, f.err};
}

SpecialValue bessel_j1(double z) {
    check_finite(z, "bessel_j1");
    const double sgn = z < 0 ? -1.0 : 1.0;
    z = std::fabs(z);
    if (z == 0.0) return {0.0, 0.0};
    const Full f = full(z);
    return {sgn * f.j1, f.err};
}

SpecialValue bessel_y0(double z) {
    check_finite(z, "bessel_y0");
    if (z <= 0.0) throw DomainError("bessel_y0: argument must be positive");
    const Full f = full(z);
    return {f.y0, f.err};
}

SpecialValue bessel_y1(double z) {
    check_finite(z, "bessel_y1");
    if (z <= 0.0) throw DomainError("bessel_y1: argument must be positive");
    const Full f = full(z);
    return {f.y1, f.err * (1.0 + 1.0 / z)};
}

SpecialValue bessel_remainder(double z) {
    check_finite(z, "bessel_remainder");
    if (z < 0.0) throw DomainError("bessel_remainder: negative argument");
    if (z == 0.0) return {0.0, 0.0};
    if (z < 1.0) {
        // (8/pi^2) Int_0^{pi/2} [cos(z cos t) - 1] ln(2 sin t) dt
        auto f = [z](double t) {
            const double s = std::sin(0.5 * z * std::cos(t));
            return -2.0 * s * s * std::log(2.0 * std::sin(t));
        };
        double err = 0.0;
        const double v = quad::endpoint_singular(f, 0.0, pi / 2.0, 1e-15, &err);
        const double c = 8.0 / (pi * pi);
        return {c * v, c * err + 4.0 * eps * std::fabs(c * v)};
    }
    const Full f = full(z);
    const double l = std::log(0.5 * z) + euler_gamma;
    return {f.y0 - 2.0 / pi * f.j0 * l, f.err * (2.0 + std::fabs(l))};
}

SpecialValue gamma_real(double x) {
    check_finite(x, "gamma_real");
    if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_real: pole at non-positive integer");
    if (x < 0.5) {
        const SpecialValue g = gamma_real(1.0 - x);
        const double v = pi / (std::sin(pi * x) * g.value);
        return {v, std::fabs(v) * (g.abs_error / std::fabs(g.value) + 4.0 * eps)};
    }
    // Lanczos approximation, g = 7, n = 9
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    const double y = x - 1.0;
    double a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (y + i);
    const double t = y + 7.5;
    const double v = std::sqrt(2.0 * pi) * std::pow(t, y + 0.5) * std::exp(-t) * a;
    return {v, std::fabs(v) * (1e-15 + 4.0 * eps * (1.0 + std::fabs(x)))};
}

double bessel_moment(double nu) {
    if (!(nu > 2.0 && nu < 4.0)) throw DomainError("bessel_moment: requires 2 < nu < 4");
    const double num = gamma_real(nu - 2.0).value * gamma_real(2.0 - 0.5 * nu).value;
    const double gh = gamma_real(0.5 * nu).value;
    const double den = gh * gh * gamma_real(0.5 * nu - 1.0).value;
    return 2.0 / pi / (nu - 2.0) * std::pow(0.5, nu - 3.0) * num / den;
}

double j0j1_moment(double nu) {
    if (!(nu > 2.0 && nu < 4.0)) throw DomainError("j0j1_moment: requires 2 < nu < 4");
    const double gh = gamma_real(0.5 * nu).value;
    return gamma_real(nu - 2.0).value * gamma_real(2.0 - 0.5 * nu).value /
           (std::pow(2.0, nu - 2.0) * gamma_real(0.5 * nu - 1.0).value * gh * gh);
}

double j0j1_moment_quadrature(double nu) {
    if (!(nu > 2.0 && nu < 4.0)) throw DomainError("j0j1_moment_quadrature: requires 2 < nu < 4");
    auto f = [nu](double z) {
        if (z <= 0.0) return 0.0;
        if (z < 1e-100) return 0.5 * std::pow(z, 3.0 - nu);
        double j0, j1;
        bessel_j01(z, j0, j1);
        return j0 * j1 * std::pow(z, 2.0 - nu);
    };
    // sign changes of J0 J1: interlaced zeros of J0 and J1
    std::vector<double> zeros;
    const int per_kind = 400;
    zeros.reserve(2 * per_kind);
    for (int m = 1; m <= per_kind; ++m) {
        zeros.push_back(bessel_zero(0, m));
        zeros.push_back(bessel_zero(1, m));
    }
    std::sort(zeros.begin(), zeros.end());

    // Beyond z_sub the non-oscillating part z^(-nu)/(2 pi) is integrated analytically,
    // leaving a strictly alternating series for the extrapolation.
    const double z_sub = *std::find_if(zeros.begin(), zeros.end(), [](double z) { return z >= 10.0; });
    auto smooth = [nu](double z) { return std::pow(z, -nu) / (2.0 * pi); };
    auto g = [&](double z) { return f(z) - smooth(z); };

    double sum = quad::endpoint_singular(f, 0.0, zeros.front(), 1e-15);
    std::vector<double> partial{sum};
    double prev_est = sum;
    int stable = 0;
    for (std::size_t i = 1; i < zeros.size(); ++i) {
        double term = 0.0;
        if (zeros[i - 1] < z_sub) {
            term = quad::adaptive(f, zeros[i - 1], zeros[i], 1e-12, 6);
            if (zeros[i] == z_sub) term += std::pow(z_sub, 1.0 - nu) / (2.0 * pi * (nu - 1.0));
        } else {
            term = quad::adaptive(g, zeros[i - 1], zeros[i], 1e-12, 6);
        }
        sum += term;
        partial.push_back(sum);
        if (partial.size() >= 12 && partial.size() % 4 == 0) {
            const std::size_t len = std::min<std::size_t>(partial.size(), 40);
            const double est =
                quad::wynn_epsilon(std::span(partial).subspan(partial.size() - len, len));
            if (std::fabs(est - prev_est) < 1e-12 * std::max(1.0, std::fabs(est))) {
                if (++stable >= 2) return est;
            } else {
                stable = 0;
            }
            prev_est = est;
        }
        if (std::fabs(term) < 1e-9) return sum;
    }
    return prev_est;
}

}  // namespace lowk
