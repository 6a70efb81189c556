#include "lowk/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "lowk/conditions.hpp"
#include "lowk/errors.hpp"
#include "lowk/specfun.hpp"

namespace lowk {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr std::size_t max_nodes = 20'000'000;

struct Rhs {
    const Potential& v;
    double k2;
    int d;
    double r_lo, r_hi;  // current segment

    void operator()(const State& x, State& dx, double t) const {
        const double r = std::exp(t);
        const double rc = std::clamp(r, r_lo * (1 + 4 * eps), r_hi * (1 - 4 * eps));
        dx[0] = x[1];
        dx[1] = -(d - 2) * x[1] - r * r * (k2 - v.value(rc)) * x[0];
    }
};

double half_power(int d) { return 0.5 * (d - 1); }

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::matching: return "matching";
        case Method::variable_phase: return "variable_phase";
        case Method::born: return "born";
    }
    return "?";
}

double reduce_mod_pi(double x) {
    double y = x - pi * std::round(x / pi);
    if (y <= -0.5 * pi) y += pi;
    if (y > 0.5 * pi) y -= pi;
    return y;
}

double start_radius(const Potential& v) { return 1e-6 * v.first_scale(); }

void RadialSolution::interpolate(std::size_t i, double t, double& phi, double& w) const {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    const double h = b.t - a.t;
    const double s = (t - a.t) / h, s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    // quintic Hermite through phi, w = phi_t and w_t at both ends
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h3 = 0.5 * (s3 - 2 * s4 + s5);
    phi = h0 * a.phi + h * h1 * a.w_right + h * h * h2 * a.wt_right + h5 * b.phi + h * h4 * b.w_left +
          h * h * h3 * b.wt_left;
    const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double d2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
    const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
    const double d3 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
    w = d0 * (a.phi - b.phi) / h + d1 * a.w_right + h * d2 * a.wt_right + d4 * b.w_left + h * d3 * b.wt_left;
}

namespace {

// index of the node interval containing t, or npos past the end
std::size_t locate(const std::vector<RadialSolution::Node>& nodes, double t) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double x, const RadialSolution::Node& n) { return x < n.t; });
    if (it == nodes.end()) return std::string::npos;
    return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

}  // namespace

double RadialSolution::phi_at(double r) const {
    if (!(r > 0)) throw DomainError("radius must be positive");
    if (r <= r_min()) return scale * (1.0 - q_start * r * r / (2.0 * dimension));
    if (r > r_max() * (1 + 8 * eps)) throw PreconditionError("radius beyond the solution grid");
    const double t = std::log(r);
    const auto i = locate(nodes, t);
    if (i == std::string::npos) return scale * nodes.back().phi;
    double phi, w;
    interpolate(i, t, phi, w);
    return scale * phi;
}

double RadialSolution::w_at(double r) const {
    if (!(r > 0)) throw DomainError("radius must be positive");
    if (r <= r_min()) return scale * (-q_start * r * r / dimension);
    if (r > r_max() * (1 + 8 * eps)) throw PreconditionError("radius beyond the solution grid");
    const double t = std::log(r);
    const auto i = locate(nodes, t);
    if (i == std::string::npos) return scale * nodes.back().w_left;
    double phi, w;
    interpolate(i, t, phi, w);
    return scale * w;
}

void RadialSolution::finalize() {
    const double a = half_power(dimension);
    grid.clear();
    u.clear();
    u_prime.clear();
    for (const auto& n : nodes) {
        const double r = std::exp(n.t);
        grid.push_back(r);
        u.push_back(scale * std::pow(r, a) * n.phi);
        u_prime.push_back(scale * std::pow(r, a - 1) * (a * n.phi + n.w_right));
    }
}

double RadialSolution::u_at(double r) const { return std::pow(r, half_power(dimension)) * phi_at(r); }

double RadialSolution::u_prime_at(double r) const {
    const double a = half_power(dimension);
    return std::pow(r, a - 1) * (a * phi_at(r) + w_at(r));
}

RadialSolution RadialSolution::scaled(double c, Normalization n) const {
    RadialSolution s = *this;
    s.scale *= c;
    for (auto& x : s.u) x *= c;
    for (auto& x : s.u_prime) x *= c;
    s.normalization = n;
    return s;
}

RadialSolution regular_solution(const Potential& v, double k, int dimension, double r_max,
                                const SolverOptions& opt) {
    return regular_solution(v, k, dimension, r_max, {}, opt);
}

RadialSolution regular_solution(const Potential& v, double k, int dimension, double r_max,
                                const std::vector<double>& extra_nodes, const SolverOptions& opt) {
    if (dimension != 2 && dimension != 3) throw PreconditionError("dimension must be 2 or 3");
    if (!(k >= 0) || !std::isfinite(k)) throw PreconditionError("momentum must be finite and non-negative");
    const double r_min = start_radius(v);
    if (!(r_max > r_min) || !std::isfinite(r_max)) throw PreconditionError("r_max must exceed the start radius");
    if (r_max < v.structure_radius()) throw PreconditionError("r_max must lie beyond all structure of V");
    if (k > 0 && k * r_max < 10) throw PreconditionError("k r_max must be at least 10");

    std::vector<double> cuts{r_min};
    for (double b : v.breakpoints())
        if (b > r_min && b < r_max) cuts.push_back(b);
    for (double b : extra_nodes)
        if (b > r_min && b < r_max) cuts.push_back(b);
    cuts.push_back(r_max);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto shells = v.shells();
    const int d = dimension;
    const double k2 = k * k;
    const double q0 = k2 - v.value(r_min);

    RadialSolution sol;
    sol.k = k;
    sol.dimension = d;
    sol.q_start = q0;

    State x{1.0 - q0 * r_min * r_min / (2.0 * d), -q0 * r_min * r_min / d};
    Rhs rhs{v, k2, d, cuts[0], cuts[1]};

    auto record = [&](const State& s, double t) {
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
            throw IntegrationError("non-finite solution", std::exp(t));
        if (sol.nodes.size() > max_nodes) throw IntegrationError("step budget exhausted", std::exp(t));
        State ds;
        rhs(s, ds, t);
        if (!sol.nodes.empty() && sol.nodes.back().t == t) {
            auto& n = sol.nodes.back();
            n.w_right = s[1];
            n.wt_right = ds[1];
            return;
        }
        sol.nodes.push_back({t, s[0], s[1], s[1], ds[1], ds[1]});
    };

    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double ra = cuts[seg], rb = cuts[seg + 1];
        const double ta = std::log(ra), tb = std::log(rb);
        for (const auto& sh : shells)
            if (sh.radius == ra) x[1] += sh.strength * ra * x[0];
        rhs.r_lo = ra;
        rhs.r_hi = rb;
        try {
            if (opt.fixed_steps > 0) {
                const double total = std::log(r_max / r_min);
                const int n = std::max(1, static_cast<int>(std::ceil(opt.fixed_steps * (tb - ta) / total)));
                const double h = (tb - ta) / n;
                odeint::runge_kutta4<State> rk;
                record(x, ta);
                for (int i = 0; i < n; ++i) {
                    rk.do_step(rhs, x, ta + i * h, h);
                    record(x, i + 1 == n ? tb : ta + (i + 1) * h);
                }
            } else {
                auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_fehlberg78<State>());
                double t = ta, dt = std::min(0.05, tb - ta);
                record(x, t);
                while (t < tb) {
                    // keep nodes dense enough for Hermite interpolation
                    const double r = std::exp(t);
                    const double rc = std::clamp(r, ra * (1 + 4 * eps), rb * (1 - 4 * eps));
                    const double omega = r * std::sqrt(std::fabs(k2 - v.value(rc))) + 0.5 * (d - 2);
                    dt = std::min({dt, opt.dense_step / omega, opt.dense_step * 2.5, tb - t});
                    int fails = 0;
                    while (stepper.try_step(rhs, x, t, dt) == odeint::fail)
                        if (++fails > 500) throw odeint::step_adjustment_error("too many failed steps");
                    if (tb - t < 1e-13 * std::max(1.0, std::fabs(tb))) t = tb;
                    record(x, t);
                }
            }
        } catch (const odeint::step_adjustment_error&) {
            const double r = sol.nodes.empty() ? ra : std::exp(sol.nodes.back().t);
            throw IntegrationError("step size underflow", r);
        }
    }

    sol.finalize();
    sol.grid.front() = r_min;
    sol.grid.back() = r_max;
    sol.match_radius = r_max;
    return sol;
}

double match_radius(const Potential& v, double k, const SolverOptions& opt) {
    if (!(k > 0)) throw PreconditionError("momentum must be positive");
    double r = std::max(v.structure_radius(), v.first_scale());
    switch (v.tail_kind()) {
        case TailKind::oscillating:
            throw TailTooLong("potential never becomes negligible; use variable_phase");
        case TailKind::power:
        case TailKind::log_corrected:
            r = std::max({r, v.negligible_radius(2 * k * k * opt.power_match_tol), 10.0 / k});
            break;
        default:
            r = std::max({r, v.negligible_radius(opt.match_tol * k * k), 10.0 / k});
    }
    if (!std::isfinite(r) || 2 * r > opt.r_max_cap)
        throw TailTooLong("no admissible match radius below r_max = " + std::to_string(opt.r_max_cap) +
                          "; use variable_phase or a larger r_max");
    return r;
}

double matched_phase(const RadialSolution& s, double r) {
    const double k = s.k, z = k * r;
    const double phi = s.phi_at(r), w = s.w_at(r);
    if (s.dimension == 2) {
        const auto b = bessel01(z);
        const double x = phi * b.y1 + b.y0 * w / z;
        const double y = b.j0 * w / z + b.j1 * phi;
        return x == 0.0 ? 0.5 * pi : reduce_mod_pi(std::atan(y / x));
    }
    return reduce_mod_pi(std::atan2(z * phi, phi + w) - z);
}

PhaseShiftResult phase_shift_by_matching(const Potential& v, double k, int dimension, const SolverOptions& opt) {
    if (!(k > 0) || !std::isfinite(k)) throw PreconditionError("momentum must be positive");
    if (dimension != 2 && dimension != 3) throw PreconditionError("dimension must be 2 or 3");
    PhaseShiftResult res;
    res.k = k;
    res.method = Method::matching;
    if (v.is_zero()) return res;

    const double rm = match_radius(v, k, opt);
    const auto sol = regular_solution(v, k, dimension, 2 * rm, {rm}, opt);
    const bool slow = v.tail_kind() == TailKind::power || v.tail_kind() == TailKind::log_corrected;
    auto phase_at = [&](double r) {
        double d = matched_phase(sol, r);
        if (slow) {
            // phase still to be accumulated beyond r, averaged over the oscillation
            const auto t = v.tail_integral(r, 0, 0);
            if (!t) throw TailTooLong("tail integral of V diverges; phase shift undefined");
            d -= *t / (2 * k);
        }
        return d;
    };
    const double d1 = phase_at(rm);
    const double d2 = d1 + reduce_mod_pi(phase_at(2 * rm) - d1);
    res.delta = reduce_mod_pi(d2);
    res.err_estimate = std::max(std::fabs(d2 - d1), 1e-12 * (1 + 2 * k * rm));

    if (dimension == 2 && v.tail_kind() == TailKind::power && *v.tail_exponent() <= 4)
        res.warning = "power-law tail with exponent <= 4: the low-energy law is modified";
    if (v.tail_kind() != TailKind::oscillating) {
        const auto rep = check_conditions(v, dimension);
        if (rep.scattering_length().verdict != Verdict::convergent) {
            if (!res.warning.empty()) res.warning += "; ";
            res.warning += rep.scattering_length().name + " is " + to_string(rep.scattering_length().verdict);
        }
    }
    return res;
}

}  // namespace lowk
