#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "lowk/effective_range.hpp"
#include "lowk/radial_solver.hpp"
#include "lowk/specfun.hpp"
#include "lowk/variable_phase.hpp"
#include "lowk/zero_energy.hpp"

using namespace lowk;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "[x] ") + std::string(buf);
        pass = pass && ok;
    }
};

std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> k;
    for (int i = 0; i < n; ++i) k.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
    return k;
}

double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

Outcome cross_method() {
    Outcome o;
    double worst = 0;
    for (double sign : {1.0, -1.0})
        for (double g : {0.5, 1.0, 2.0})
            for (double k : log_points(0.05, 5, 20)) {
                const auto v = Potential::exponential(sign, 1, g);
                const double dm = phase_shift_by_matching(v, k, 2).delta;
                const double dv = phase_shift_variable_phase(v, k, 2).delta;
                worst = std::max(worst, std::fabs(reduce_mod_pi(dv - dm)));
            }
    o.require(worst < 1e-6, "max |d_match - d_vp| (mod pi) = %.3g", worst);
    return o;
}

Outcome universal_law() {
    Outcome o;
    const auto res = low_energy_residuals(Potential::exponential(1, 1, 1.0), 2, {1e-3, 1e-1});
    const double r3 = std::fabs(res[0].second), r1 = std::fabs(res[1].second);
    o.require(r3 < 0.05, "residual(1e-3) = %.3g", r3);
    o.require(r1 >= 3 * r3, "residual(1e-1)/residual(1e-3) = %.3g", r1 / r3);
    return o;
}

Outcome scattering_length_consistency() {
    Outcome o;
    const double R = 1, kap = 1;
    const double ln_a = std::log(R) - std::cyl_bessel_i(0, kap * R) / (kap * R * std::cyl_bessel_i(1, kap * R));
    const auto v = Potential::disc(1, R, 1.0);
    const auto u0 = zero_energy_solution(v, 2);
    const double a = *scattering_length_2d(v, u0).a;
    const double fit = scattering_length_2d_fit(v, u0);
    o.require(rel(a, std::exp(ln_a)) < 1e-8, "X1/X2 vs oracle %.3g", rel(a, std::exp(ln_a)));
    o.require(rel(fit, a) < 1e-6, "fit vs X1/X2 %.3g", rel(fit, a));
    return o;
}

Outcome levinson() {
    Outcome o;
    int prev = 0;
    for (double g : {1.0, 2.0, 3.0, 6.0}) {
        const auto v = Potential::exponential(-1, 1, g);
        const int n = bound_state_count(v, 2);
        const double d = phase_shift_variable_phase(v, 1e-4, 2).delta;
        o.require(std::fabs(d - n * pi) < 0.01, "g=%g n=%d |d(1e-4) - n pi| = %.3g", g, n, std::fabs(d - n * pi));
        o.require(n >= prev, "n(%g) = %d nondecreasing", g, n);
        prev = n;
    }
    return o;
}

Outcome appendix_a() {
    Outcome o;
    bool b1 = true, b2 = true, b3 = true;
    for (int i = 1; i <= 10000; ++i) {
        const double z = 100.0 * i / 10000;
        const double r = std::fabs(bessel_remainder(z).value), j = 1 - bessel_j0(z).value;
        b1 = b1 && r < 8 / (3 * pi);
        b2 = b2 && r < z * z / (2 * pi);
        b3 = b3 && j >= 0 && j < z * z / 4;
    }
    o.require(b1, "|R| < 8/(3 pi)");
    o.require(b2, "|R| < z^2/(2 pi)");
    o.require(b3, "0 <= 1 - J0 < z^2/4");
    const double z = 1e-3, lim = bessel_remainder(z).value / (z * z);
    o.require(std::fabs(lim - 1 / (2 * pi)) < 1e-4, "R(1e-3)/z^2 - 1/(2 pi) = %.3g", lim - 1 / (2 * pi));
    return o;
}

Outcome appendix_b() {
    Outcome o;
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double z : {0.5, 1.0, 5.0}) {
        const double lhs = ts.integrate([&](double x) { return x * std::log(z / x) * bessel_j0(x).value; }, 0.0, z);
        const double err = std::fabs(lhs - (1 - bessel_j0(z).value));
        o.require(err < 1e-10, "z=%g log-moment err %.2g", z, err);
    }
    for (double nu : {2.5, 3.0, 3.5}) {
        const double closed = bessel_moment(nu), quad = j0j1_moment_quadrature(nu);
        o.require(std::fabs(closed - quad) < 1e-6, "nu=%g closed %.9g vs quadrature %.9g", nu, closed, quad);
    }
    const double gexpr = 2 / pi * gamma_real(1).value * gamma_real(0.5).value /
                         (std::pow(gamma_real(1.5).value, 2) * gamma_real(0.5).value);
    o.require(std::fabs(bessel_moment(3) - 8 / (pi * pi)) < 1e-10 && std::fabs(gexpr - 8 / (pi * pi)) < 1e-10,
              "nu=3: %.15g vs 8/pi^2", bessel_moment(3));
    return o;
}

Outcome effective_range_2d() {
    Outcome o;
    const auto v = Potential::disc(1, 1, 1.0);
    const auto rep = effective_range(v, 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto res = low_energy_residuals(v, 2, log_points(1e-3, 1e-2, 10));
    for (const auto& [k, y] : res) {
        sx += k * k;
        sy += y;
        sxx += k * k * k * k;
        sxy += k * k * y;
    }
    const double n = static_cast<double>(res.size()), slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    o.require(rel(slope, *rep.value) < 0.01, "slope %.6g vs Int(v0^2 - u0^2) %.6g (ratio %.6f)", slope, *rep.value,
              slope / *rep.value);
    o.require(true, "slope vs k2_coefficient rel %.2g", rel(slope, *rep.k2_coefficient));
    return o;
}

Outcome anomaly_2d() {
    Outcome o;
    const auto v = Potential::power_tail(Disc{1, 1}, 3, 1, 1);
    const auto rep = effective_range(v, 2);
    if (!rep.anomaly) {
        o.require(false, "no anomaly fitted: %s", rep.note.c_str());
        return o;
    }
    const double k = 1e-4, a = rep.scattering_length, l = std::log(0.5 * k * a);
    const double predicted = anomalous_residual_2d(v.tail_strength() * v.coupling(), 3, a, k) / (k * l * l);
    o.require(std::fabs(rep.anomaly->exponent - 1) <= 0.05, "exponent %.4f", rep.anomaly->exponent);
    o.require(rel(rep.anomaly->coefficient, predicted) < 0.1, "coefficient %.4g vs %.4g", rep.anomaly->coefficient,
              predicted);
    return o;
}

Outcome oracles_3d() {
    Outcome o;
    const double R = 1;
    for (double K : {0.5, 1.0, 1.5}) {
        const double kap = K / R;
        const double a = R * (1 - std::tan(K) / K), C = (1 - R / a) / std::sin(K);
        const double r0 = 2 * (R - R * R / a + R * R * R / (3 * a * a) - C * C * (R / 2 - std::sin(2 * K) / (4 * kap)));
        const auto rep = effective_range(Potential::disc(-1, R, kap * kap), 3);
        o.require(rel(rep.scattering_length, a) < 1e-8, "K=%g a err %.2g", K, rel(rep.scattering_length, a));
        o.require(rel(*rep.value, r0) < 1e-6, "r0 err %.2g", rel(*rep.value, r0));
    }
    return o;
}

Outcome delta_shells() {
    Outcome o;
    const double R = 1;
    for (double D : {0.1, 100.0}) {
        const double b = 3 * R + D;
        const auto v = Potential::delta_shells({{-2.0 / R, R}, {-3 * R / (D * (R + D)), b}});
        const auto s = zero_energy_solution(v, 3);
        auto oracle = [&](double r) { return r <= R ? r : r <= b ? 2 * R - r : -R - D + (-1 + 3 * R / D) * (r - b); };
        double worst = 0;
        for (std::size_t i = 0; i < s.grid.size(); ++i)
            worst = std::max(worst, std::fabs(s.u[i] - oracle(s.grid[i])) / std::max(1.0, std::fabs(oracle(s.grid[i]))));
        o.require(worst < 1e-10, "D=%g u0 err %.2g", D, worst);
        const double r0 = *effective_range(v, 3).value;
        o.require(D < 1 ? r0 > 0 : r0 < 0, "D=%g r0 = %.6g", D, r0);
        const double a = scattering_length_3d(v);
        o.require(true, "a = %.6g (oracle R(9R+D)/(3R-D) = %.6g, 3R = %g)", a, R * (9 * R + D) / (3 * R - D), 3 * R);
    }
    return o;
}

Outcome born_limit() {
    Outcome o;
    const auto v = Potential::exponential(1, 1, 1e-3);
    const double full = std::tan(phase_shift_by_matching(v, 1, 2).delta);
    const double born = std::tan(born_phase_shift(v, 1, 2).delta);
    o.require(rel(full, born) < 0.01, "|tan d - tan d_born|/|tan d_born| = %.3g", rel(full, born));
    return o;
}

Outcome divergence_3d() {
    Outcome o;
    const auto v = Potential::power_tail(Zero{}, 4, 1, -1);
    const auto res = low_energy_residuals(v, 3, log_points(1e-3, 1e-1, 9));
    bool mono = true;
    for (std::size_t i = 1; i < res.size(); ++i)
        mono = mono && res[i - 1].second / std::pow(res[i - 1].first, 2) > res[i].second / std::pow(res[i].first, 2);
    const double lo = res.front().second / std::pow(res.front().first, 2);
    const double hi = res.back().second / std::pow(res.back().first, 2);
    o.require(mono, "monotone increase as k decreases");
    o.require(lo >= 10 * hi && hi > 0, "ratio %.3g (%.4g at k=1e-1, %.4g at k=1e-3)", lo / hi, hi, lo);
    return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
    {"cross-method agreement", cross_method},
    {"universal low-k law", universal_law},
    {"scattering-length consistency", scattering_length_consistency},
    {"Levinson", levinson},
    {"remainder bounds", appendix_a},
    {"Bessel moment identities", appendix_b},
    {"2D effective range", effective_range_2d},
    {"2D anomaly", anomaly_2d},
    {"3D oracles", oracles_3d},
    {"delta shells", delta_shells},
    {"Born limit", born_limit},
    {"3D divergence law", divergence_3d},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "criterion %d does not exist\n", only);
        return 2;
    }
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
        all = all && out.pass;
    }
    return all ? 0 : 1;
}
