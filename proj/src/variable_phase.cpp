#include "lowk/variable_phase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "lowk/errors.hpp"
#include "lowk/specfun.hpp"

namespace lowk {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 1>;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double inf = std::numeric_limits<double>::infinity();

double abs_tail(const Potential& v, double r) {
    if (const auto* p = std::get_if<PowerTail>(&v.shape())) {
        // inner part and power tail may differ in sign
        const Shape inner = std::visit([](const auto& x) -> Shape { return x; }, p->inner);
        const auto a = Potential(inner, v.coupling()).tail_integral(r, 0, 0);
        const auto b = Potential(PowerTail{Zero{}, p->exponent, p->onset, p->strength}, v.coupling())
                           .tail_integral(r, 0, 0);
        if (!a || !b) return inf;
        return std::fabs(*a) + std::fabs(*b);
    }
    if (const auto* o = std::get_if<OscillatingGap>(&v.shape())) {
        const double p = o->power;
        if (p <= 2) return inf;
        const double s = std::fabs(v.coupling() * o->strength) * std::sqrt(pi) * 1.01;
        const long n0 = std::max(1L, static_cast<long>(std::floor(r / pi)));
        double sum = 0;
        for (long n = n0; n < n0 + 1000; ++n) sum += std::pow(n * pi, -0.5 * p);
        sum += std::pow((n0 + 999.5) * pi, 1 - 0.5 * p) / (pi * (0.5 * p - 1));
        return s * sum;
    }
    const auto t = v.tail_integral(r, 0, 0);
    return t ? std::fabs(*t) : inf;
}

struct PhaseRhs {
    const Potential& v;
    double k;
    int d;
    double r_lo, r_hi;

    void operator()(const State& x, State& dx, double t) const {
        const double r = std::exp(t);
        const double gv = v.value(std::clamp(r, r_lo * (1 + 4 * eps), r_hi * (1 - 4 * eps)));
        if (gv == 0.0) {
            dx[0] = 0.0;
            return;
        }
        if (d == 2) {
            const auto b = bessel01(k * r);
            const double f = b.j0 * std::cos(x[0]) - b.y0 * std::sin(x[0]);
            dx[0] = -0.5 * pi * gv * r * r * f * f;
        } else {
            const double s = std::sin(k * r + x[0]);
            dx[0] = -(r / k) * gv * s * s;
        }
    }
};

}  // namespace

double phase_tail_bound(const Potential& v, double k, int dimension, double r) {
    if (r < v.structure_radius()) return inf;
    if (v.tail_kind() == TailKind::none) return 0.0;
    if (dimension == 2 && k * r < 1) return inf;
    // z (J0^2 + Y0^2) pi / 2 <= 1 + 1/(8 z^2) for z >= 1
    const double c = dimension == 2 ? 1.125 / k : 1.0 / k;
    return c * abs_tail(v, r);
}

double shell_phase_jump(double delta, double s, double r, double k, int dimension) {
    double f, fp, g, gp;
    if (dimension == 2) {
        const auto b = bessel01(k * r);
        const double sr = std::sqrt(r);
        f = sr * b.j0;
        fp = b.j0 / (2 * sr) - k * sr * b.j1;
        g = sr * b.y0;
        gp = b.y0 / (2 * sr) - k * sr * b.y1;
    } else {
        f = std::sin(k * r);
        fp = k * std::cos(k * r);
        g = -std::cos(k * r);
        gp = k * std::sin(k * r);
    }
    const double u = f * std::cos(delta) - g * std::sin(delta);
    const double up = fp * std::cos(delta) - gp * std::sin(delta) + s * u;
    const double d0 = std::atan((u * fp - up * f) / (u * gp - up * g));
    if (s > 0) return d0 + pi * std::floor((delta - d0) / pi);
    if (s < 0) return d0 + pi * std::ceil((delta - d0) / pi);
    return delta;
}

PhaseFunction phase_function(const Potential& v, double k, int dimension, const VariablePhaseOptions& opt) {
    if (!(k > 0) || !std::isfinite(k)) throw PreconditionError("momentum must be positive");
    if (dimension != 2 && dimension != 3) throw PreconditionError("dimension must be 2 or 3");

    PhaseFunction pf;
    pf.k = k;
    pf.grid.push_back(0.0);
    pf.delta_of_r.push_back(0.0);
    if (v.is_zero()) {
        pf.converged_tail = true;
        return pf;
    }

    const double r_min = start_radius(v);
    double r_end = std::max(v.structure_radius(), v.first_scale());
    if (dimension == 2) r_end = std::max(r_end, 1.0 / k);
    const double cap = std::max(r_end, std::min(opt.r_max_cap, opt.max_kr / k));
    double bound = phase_tail_bound(v, k, dimension, r_end);
    while (bound > opt.tail_tol && r_end < cap) {
        r_end = std::min(1.5 * r_end, cap);
        bound = phase_tail_bound(v, k, dimension, r_end);
    }
    pf.converged_tail = bound <= opt.tail_tol;
    pf.tail_bound = bound;

    std::vector<double> cuts{r_min};
    for (double b : v.breakpoints())
        if (b > r_min && b < r_end) cuts.push_back(b);
    if (const auto* o = std::get_if<OscillatingGap>(&v.shape())) {
        // resolve every bump of the gap
        for (long n = 1; n * pi < r_end; ++n) {
            const double w = 20 * std::pow(n * pi, -0.5 * o->power);
            if (w > 0.5 * pi) continue;
            for (double c : {n * pi - w, n * pi, n * pi + w})
                if (c > r_min && c < r_end) cuts.push_back(c);
        }
    }
    cuts.push_back(r_end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto shells = v.shells();
    const double gv0 = v.value(r_min);
    State x{dimension == 2 ? -0.25 * pi * gv0 * r_min * r_min : -gv0 * k * r_min * r_min * r_min / 3};
    pf.grid.push_back(r_min);
    pf.delta_of_r.push_back(x[0]);

    PhaseRhs rhs{v, k, dimension, r_min, r_end};
    auto record = [&](const State& s, double t) {
        if (!std::isfinite(s[0])) throw IntegrationError("non-finite phase", std::exp(t));
        const double r = std::exp(t);
        if (r <= pf.grid.back()) {
            pf.delta_of_r.back() = s[0];
            return;
        }
        pf.grid.push_back(r);
        pf.delta_of_r.push_back(s[0]);
    };

    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double ra = cuts[seg], rb = cuts[seg + 1];
        for (const auto& sh : shells)
            if (sh.radius == ra) {
                x[0] = shell_phase_jump(x[0], sh.strength, ra, k, dimension);
                pf.delta_of_r.back() = x[0];
            }
        rhs.r_lo = ra;
        rhs.r_hi = rb;
        const double ta = std::log(ra), tb = std::log(rb);
        try {
            auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_fehlberg78<State>());
            double t = ta, dt = std::min(0.05, tb - ta);
            record(x, t);
            while (t < tb) {
                // resolve the oscillation of the free solutions
                dt = std::min({dt, opt.max_phase_step / (2 * k * std::exp(t)), 0.25, tb - t});
                int fails = 0;
                while (stepper.try_step(rhs, x, t, dt) == odeint::fail)
                    if (++fails > 500) throw odeint::step_adjustment_error("too many failed steps");
                if (tb - t < 1e-13 * std::max(1.0, std::fabs(tb))) t = tb;
                record(x, t);
            }
        } catch (const odeint::step_adjustment_error&) {
            throw IntegrationError("step size underflow in the phase equation", pf.grid.back());
        }
        pf.grid.back() = rb;
    }
    for (const auto& sh : shells)
        if (sh.radius == r_end) pf.delta_of_r.back() = shell_phase_jump(x[0], sh.strength, r_end, k, dimension);
    return pf;
}

PhaseShiftResult phase_shift_variable_phase(const Potential& v, double k, int dimension,
                                            const VariablePhaseOptions& opt) {
    const auto pf = phase_function(v, k, dimension, opt);
    PhaseShiftResult res;
    res.k = k;
    res.method = Method::variable_phase;
    res.delta = pf.delta_of_r.back();
    res.err_estimate = pf.tail_bound + 1e-12 * (1 + k * pf.grid.back()) * (1 + std::fabs(res.delta));
    if (!pf.converged_tail)
        res.warning = "variable-phase tail not converged below r = " + std::to_string(pf.grid.back()) +
                      " (bound " + std::to_string(pf.tail_bound) + " rad)";
    return res;
}

}  // namespace lowk
