#include "doctest.h"

#include <cmath>

#include "lowk/effective_range.hpp"
#include "lowk/errors.hpp"
#include "lowk/specfun.hpp"
#include "lowk/zero_energy.hpp"

using namespace lowk;

namespace {

std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> k;
    for (int i = 0; i < n; ++i) k.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
    return k;
}

double slope_vs_k2(const std::vector<std::pair<double, double>>& res) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [k, y] : res) {
        const double x = k * k;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(res.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Simpson is exact for the quadratic pieces
double simpson(const auto& f, double a, double b) { return (b - a) / 6 * (f(a) + 4 * f(0.5 * (a + b)) + f(b)); }

}  // namespace

TEST_CASE("3D square well and barrier") {
    const double R = 2.0;
    for (double K : {0.5, 1.0, 1.4}) {
        const double kap = K / R;
        {
            const double a = R * (1 - std::tan(K) / K), C = (1 - R / a) / std::sin(K);
            const double r0 = 2 * (R - R * R / a + R * R * R / (3 * a * a) - C * C * (R / 2 - std::sin(2 * K) / (4 * kap)));
            const auto rep = effective_range(Potential::disc(-1, R, kap * kap), 3);
            CHECK(rep.convergent);
            CHECK(rep.scattering_length == doctest::Approx(a).epsilon(1e-8));
            CHECK(*rep.value == doctest::Approx(r0).epsilon(1e-8));
            CHECK_FALSE(rep.anomaly);
        }
        {
            const double a = R * (1 - std::tanh(K) / K), C = (1 - R / a) / std::sinh(K);
            const double r0 =
                2 * (R - R * R / a + R * R * R / (3 * a * a) - C * C * (std::sinh(2 * K) / (4 * kap) - R / 2));
            CHECK(*effective_range(Potential::disc(1, R, kap * kap), 3).value == doctest::Approx(r0).epsilon(1e-8));
        }
    }
}

TEST_CASE("shells: piecewise-linear oracle") {
    const double R = 1.0;
    for (double D : {0.1, 1.0, 100.0}) {
        const double s = -1 + 3 * R / D, b = 3 * R + D;
        const double A = -R - D - s * b;  // u -> s r + A
        const double a = -A / s;
        auto u = [&](double r) { return r <= R ? r : r <= b ? 2 * R - r : s * r + A; };
        auto f = [&](double r) {
            const double v0 = 1 - r / a, un = u(r) / A;
            return v0 * v0 - un * un;
        };
        const double r0 = 2 * (simpson(f, 0, R) + simpson(f, R, b));
        const auto rep = effective_range(Potential::delta_shells({{-2.0 / R, R}, {-3 * R / (D * (R + D)), b}}), 3);
        CAPTURE(D);
        CHECK(rep.scattering_length == doctest::Approx(a).epsilon(1e-9));
        CHECK(*rep.value == doctest::Approx(r0).epsilon(1e-8));
        if (D < 1) CHECK(*rep.value > 0);
    }
}

TEST_CASE("2D disc: value and k^2 coefficient") {
    for (double g : {0.5, 1.0, 4.0}) {
        const double R = 1.0, kap = std::sqrt(g);
        const double i0 = std::cyl_bessel_i(0, kap * R), i1 = std::cyl_bessel_i(1, kap * R);
        const double B = kap * R * i1, L = std::log(R) - i0 / B, s = std::log(R) - L;
        const double value = R * R / 2 * (s * s - s + 0.5) - R * R / 2 * (i0 * i0 - i1 * i1) / (B * B);
        const auto v = Potential::disc(1, R, g);
        const auto rep = effective_range(v, 2);
        CHECK(rep.convergent);
        CHECK(*rep.value == doctest::Approx(value).epsilon(1e-8));
        CHECK(*rep.k2_coefficient == doctest::Approx(2 / pi * *rep.value).epsilon(1e-14));
        const double slope = slope_vs_k2(low_energy_residuals(v, 2, log_points(1e-3, 1e-2, 10)));
        CHECK(slope == doctest::Approx(*rep.k2_coefficient).epsilon(1e-2));
    }
}

TEST_CASE("exact 2D relation") {
    for (const auto& v : {Potential::disc(1, 1, 1.0), Potential::exponential(1, 1, 2.0), Potential::exponential(-1, 1, 1.0)}) {
        for (double k : {0.01, 0.1, 0.5}) {
            const auto [lhs, rhs] = exact_relation_2d(v, k);
            CAPTURE(k);
            CHECK(rhs == doctest::Approx(lhs).epsilon(1e-5));
        }
    }
}

TEST_CASE("renormalized u0 approaches v0") {
    for (const auto& v : {Potential::exponential(1, 1, 1.0), Potential::power_tail(Disc{1, 1}, 5, 1, 1)}) {
        const auto z = zero_energy(v, 2);
        const double r = z.u0.r_max(), s = std::log(r) - z.scattering_length.ln_a;
        CHECK(std::fabs(z.u0.phi_at(r) / z.B_coefficient - s) < 1e-6 * std::fabs(s));
    }
}

TEST_CASE("short-range tails: value matches the low-energy slope") {
    {
        const auto v = Potential::exponential(1, 1, 1.0);
        const auto rep = effective_range(v, 2);
        const double slope = slope_vs_k2(low_energy_residuals(v, 2, log_points(1e-3, 1e-2, 10)));
        CHECK(slope == doctest::Approx(*rep.k2_coefficient).epsilon(1e-2));
    }
    {
        // r0 / 2 from k cot delta + 1/a; the tail beyond the grid contributes through the moments
        const auto v = Potential::power_tail(Disc{-1, 1}, 7, 1, -0.5, 0.5);
        const auto rep = effective_range(v, 3);
        REQUIRE(rep.convergent);
        const auto res = low_energy_residuals(v, 3, {2e-3});
        CHECK(res[0].second / (res[0].first * res[0].first) == doctest::Approx(*rep.value / 2).epsilon(1e-2));
    }
}

TEST_CASE("anomalous 2D law") {
    const double k = 1e-3, a = 2.0;
    const double l = std::log(0.5 * k * a);
    CHECK(anomalous_residual_2d(1, 3, a, k) / (k * l * l) == doctest::Approx(-8 / (pi * pi)).epsilon(1e-12));
    const double lk = std::log(k * a);
    CHECK(anomalous_residual_2d(1, 3, a, k, LogArgument::ka) / (k * lk * lk) == doctest::Approx(-8 / (pi * pi)).epsilon(1e-12));
    CHECK(anomalous_residual_2d(-0.3, 3.5, a, k) == doctest::Approx(-anomalous_residual_2d(0.3, 3.5, a, k)));
    CHECK(anomalous_residual_2d(0.6, 3.5, a, k) == doctest::Approx(2 * anomalous_residual_2d(0.3, 3.5, a, k)));
    // 1/(nu - 2) near the lower end, at fixed k^(nu-2)
    const double r1 = anomalous_residual_2d(1, 2.001, a, 1.0 / a * 0.999) / std::pow(0.999 / a, 0.001);
    const double r2 = anomalous_residual_2d(1, 2.002, a, 1.0 / a * 0.999) / std::pow(0.999 / a, 0.002);
    CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(1e-2));
    CHECK_THROWS_AS(anomalous_residual_2d(1, 4, a, k), DomainError);
    CHECK_THROWS_AS(anomalous_residual_2d(1, 2, a, k), DomainError);
}

TEST_CASE("anomaly fit") {
    std::vector<std::pair<double, double>> data;
    for (double k : log_points(1e-5, 1e-3, 10)) data.emplace_back(k, anomalous_residual_2d(1, 3, 2.0, k));
    AnomalyModel m;
    m.a = 2.0;
    const auto fit = fit_anomaly(data, m);
    CHECK(fit.anomaly.exponent == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(fit.anomaly.log_power == 2.0);
    CHECK(fit.anomaly.coefficient == doctest::Approx(-8 / (pi * pi)).epsilon(1e-9));
    CHECK(fit.fit_quality < 1e-10);

    CHECK_THROWS_AS(fit_anomaly({data.begin(), data.begin() + 7}, m), PreconditionError);
    std::vector<std::pair<double, double>> narrow;
    for (double k : log_points(1e-4, 1e-3, 10)) narrow.emplace_back(k, anomalous_residual_2d(1, 3, 2.0, k));
    CHECK_THROWS_AS(fit_anomaly(narrow, m), PreconditionError);
    auto bumpy = data;
    bumpy[4].second *= 3;
    CHECK_THROWS_AS(fit_anomaly(bumpy, m), RegimeError);
}

TEST_CASE("2D power tail nu = 3: anomaly instead of a value") {
    const auto v = Potential::power_tail(Disc{1, 1}, 3, 1, 1);
    const auto rep = effective_range(v, 2);
    CHECK_FALSE(rep.convergent);
    CHECK_FALSE(rep.value);
    REQUIRE(rep.anomaly);
    CHECK(rep.anomaly->exponent == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.anomaly->coefficient == doctest::Approx(-v.tail_strength() * bessel_moment(3)).epsilon(0.1));
}

TEST_CASE("3D tails: divergence law") {
    // attractive 1/r^4: k cot delta = -1/a + pi C k / (3 a^2) + ...
    const auto v = Potential::power_tail(Zero{}, 4, 1, -1);
    const auto rep = effective_range(v, 3);
    CHECK_FALSE(rep.convergent);
    REQUIRE(rep.anomaly);
    CHECK(std::fabs(rep.anomaly->exponent + 1) < 0.1);
    const double a = rep.scattering_length;
    CHECK(rep.anomaly->coefficient == doctest::Approx(pi / (3 * a * a)).epsilon(2e-2));

    const auto res = low_energy_residuals(v, 3, log_points(1e-3, 1e-1, 9));
    for (std::size_t i = 1; i < res.size(); ++i)
        CHECK(res[i - 1].second / std::pow(res[i - 1].first, 2) > res[i].second / std::pow(res[i].first, 2));
    CHECK(res.front().second / std::pow(res.front().first, 2) > 10 * res.back().second / std::pow(res.back().first, 2));

    const auto slow = effective_range(Potential::log_corrected_tail(1, 1.0), 3);
    CHECK_FALSE(slow.convergent);
    CHECK_FALSE(slow.value);
    CHECK(effective_range(Potential::log_corrected_tail(1, 2.0), 3).convergent);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(effective_range(Potential::tabulated({0, 1, 2}, {1, 1, 1}), 2), IndeterminateCondition);
    CHECK_THROWS_AS(effective_range(Potential::disc(1, 1), 4), PreconditionError);
    // a = 0 in 3D and a resonance in 2D when V = 0
    CHECK_THROWS_AS(effective_range(Potential::zero(), 3), PreconditionError);
    CHECK_THROWS_AS(effective_range(Potential::zero(), 2), PreconditionError);
}
