#include "doctest.h"

#include <cmath>

#include "lowk/errors.hpp"
#include "lowk/quadrature.hpp"
#include "lowk/specfun.hpp"
#include "lowk/variable_phase.hpp"

using namespace lowk;

namespace {

double angle_diff(double a, double b) { return std::fabs(reduce_mod_pi(a - b)); }

std::vector<double> log_grid(double a, double b, int n) {
    std::vector<double> k;
    for (int i = 0; i < n; ++i) k.push_back(a * std::pow(b / a, i / double(n - 1)));
    return k;
}

}  // namespace

TEST_CASE("zero potential") {
    for (int d : {2, 3}) {
        const auto r = phase_shift_variable_phase(Potential::zero(), 1.3, d);
        CHECK(r.delta == 0.0);
        CHECK(r.method == Method::variable_phase);
    }
    const auto pf = phase_function(Potential::exponential(1, 1), 1.0, 2);
    CHECK(pf.grid.front() == 0.0);
    CHECK(pf.delta_of_r.front() == 0.0);
    CHECK(pf.converged_tail);
}

TEST_CASE("3D attractive exponential agrees with matching") {
    const auto v = Potential::exponential(-1, 1, 2.0);
    for (double k : {0.5, 1.0, 2.0}) {
        const auto a = phase_shift_variable_phase(v, k, 3);
        const auto b = phase_shift_by_matching(v, k, 3);
        CHECK(angle_diff(a.delta, b.delta) < 1e-6);
    }
}

TEST_CASE("2D exponentials: method agreement over the sweep") {
    for (double g : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
        for (double k : log_grid(0.05, 5, 20)) {
            const auto v = Potential::exponential(1, 1, g);
            const double a = phase_shift_variable_phase(v, k, 2).delta;
            const double b = phase_shift_by_matching(v, k, 2).delta;
            CAPTURE(g);
            CAPTURE(k);
            CHECK(angle_diff(a, b) < 1e-6);
        }
}

TEST_CASE("discs and shells: absolute phase agrees with matching mod pi") {
    std::vector<Potential> vs = {
        Potential::disc(1, 1, 3.0),
        Potential::disc(-1, 1.5, 4.0),
        Potential::delta_shells({{-2.0, 1.0}, {-0.5, 3.5}}),
        Potential::delta_shells({{3.0, 0.7}}),
        Potential::power_tail(Disc{-2, 1}, 6, 1.5, 1),
    };
    for (const auto& v : vs)
        for (int d : {2, 3})
            for (double k : {0.2, 1.0, 3.0}) {
                CAPTURE(kind_name(v.shape()));
                CAPTURE(d);
                CAPTURE(k);
                CHECK(angle_diff(phase_shift_variable_phase(v, k, d).delta, phase_shift_by_matching(v, k, d).delta) <
                      1e-7);
            }
}

TEST_CASE("shell jump branch follows the sign of the shell") {
    for (int d : {2, 3})
        for (double s : {-5.0, -0.3, 0.3, 5.0}) {
            const double before = 0.4;
            const double after = shell_phase_jump(before, s, 1.3, 0.8, d);
            if (s > 0) CHECK((after <= before && after > before - pi));
            else CHECK((after >= before && after < before + pi));
        }
    CHECK(shell_phase_jump(0.4, 0.0, 1.0, 1.0, 2) == 0.4);
}

TEST_CASE("sign law and bounded increments") {
    for (int d : {2, 3}) {
        const auto rep = phase_function(Potential::exponential(1, 0.5, 1.5), 0.7, d);
        const auto att = phase_function(Potential::exponential(-1, 0.5, 1.5), 0.7, d);
        for (std::size_t i = 1; i < rep.delta_of_r.size(); ++i) CHECK(rep.delta_of_r[i] <= rep.delta_of_r[i - 1] + 1e-15);
        for (std::size_t i = 1; i < att.delta_of_r.size(); ++i) CHECK(att.delta_of_r[i] >= att.delta_of_r[i - 1] - 1e-15);
        CHECK(rep.delta_of_r.back() < 0);
        CHECK(att.delta_of_r.back() > 0);
    }
    // 3D: |delta(r2) - delta(r1)| <= (1/k) Int_{r1}^{r2} |gV|
    const double k = 0.9;
    const auto v = Potential::exponential(-1, 1, 3.0);
    const auto pf = phase_function(v, k, 3);
    for (std::size_t i = 2; i + 1 < pf.grid.size(); i += 7) {
        const double r1 = pf.grid[i], r2 = pf.grid[i + 1];
        const double coeff = 3.0 * (std::exp(-r1) - std::exp(-r2)) / k;
        CHECK(std::fabs(pf.delta_of_r[i + 1] - pf.delta_of_r[i]) <= coeff * (1 + 1e-9));
    }
}

TEST_CASE("weak coupling matches the first-order formula") {
    const double g = 1e-3, k = 1.0;
    const auto v = Potential::exponential(1, 1, g);
    auto f = [&](double r) { const double j = bessel_j0(k * r).value; return r * j * j * std::exp(-r); };
    const double born = -0.5 * pi * g * quad::adaptive(f, 0.0, 60.0);
    const double full = std::tan(phase_shift_variable_phase(v, k, 2).delta);
    CHECK(std::fabs(full - born) <= 0.01 * std::fabs(born));
}

TEST_CASE("long tails") {
    const auto gap = phase_shift_variable_phase(Potential::oscillating_gap(), 1.0, 3);
    CHECK(gap.warning.empty());
    CHECK(std::isfinite(gap.delta));
    CHECK(gap.delta < 0);
    const auto slow = phase_function(Potential::power_tail(Zero{}, 1.0, 1, 1), 1.0, 3);
    CHECK(!slow.converged_tail);
    const auto pt = Potential::power_tail(Disc{1, 1}, 3.5, 1, 1);
    CHECK(angle_diff(phase_shift_variable_phase(pt, 0.5, 2).delta, phase_shift_by_matching(pt, 0.5, 2).delta) < 1e-7);
}
