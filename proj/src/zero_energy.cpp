#include "lowk/zero_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "lowk/conditions.hpp"
#include "lowk/errors.hpp"
#include "lowk/quadrature.hpp"
#include "lowk/specfun.hpp"
#include "lowk/variable_phase.hpp"

namespace lowk {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double inf = std::numeric_limits<double>::infinity();

const char* scattering_condition(int d) { return d == 2 ? cond_2d_scattering_length : cond_3d_scattering_length; }

void check_dimension(int d) {
    if (d != 2 && d != 3) throw PreconditionError("dimension must be 2 or 3");
}

double tail(const Potential& v, double r, int p, int m, int d) {
    const auto t = v.tail_integral(r, p, m);
    if (!t) throw ConditionViolation(scattering_condition(d), "tail moment of V diverges beyond r = " + std::to_string(r));
    return *t;
}

void require_scattering_condition(const Potential& v, int d) {
    if (v.is_zero()) return;
    const auto rep = check_conditions(v, d);
    const auto& rec = rep.scattering_length();
    if (rec.verdict == Verdict::divergent)
        throw ConditionViolation(rec.name, rec.name + " diverges: " + rec.integral);
}

// Panel march of the zero-energy Volterra equation in t = ln r.
// first_order: a single iterate from phi = 1, i.e. phi = 1 + g Int (kernel) V.
RadialSolution march(const Potential& v, int d, const ZeroEnergyOptions& opt, IterationDiagnostics* diag,
                     bool first_order) {
    const double r_min = start_radius(v);
    const double r_far = zero_energy_radius(v, d, opt);
    std::vector<double> cuts{r_min};
    for (double b : v.breakpoints())
        if (b > r_min && b < r_far) cuts.push_back(b);
    cuts.push_back(r_far);

    const auto& rule = quad::lobatto_rule(opt.panel_nodes);
    const int n = rule.n;
    const auto shells = v.shells();

    RadialSolution sol;
    sol.k = 0.0;
    sol.dimension = d;
    const double gv0 = v.value(r_min);
    sol.q_start = -gv0;
    double phi_a = 1.0 + gv0 * r_min * r_min / (2.0 * d);
    double w_a = gv0 * r_min * r_min / d;

    IterationDiagnostics dg;
    std::vector<double> tau(n), rr(n), gv(n), phi(n), w(n), f(n), aux(n), next(n);

    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double ra = cuts[seg], rb = cuts[seg + 1];
        const double ta = std::log(ra), tb = std::log(rb);
        auto gv_at = [&](double r) { return v.value(std::clamp(r, ra * (1 + 4 * eps), rb * (1 - 4 * eps))); };
        for (const auto& sh : shells)
            if (sh.radius == ra) w_a += sh.strength * ra * (first_order ? 1.0 : phi_a);

        auto panel_length = [&](double t) {
            const double r = std::exp(t);
            const double g = std::fabs(gv_at(r));
            double dr = 0.5 * v.variation_length(r);
            if (g > 0) dr = std::min(dr, 0.5 / std::sqrt(g));
            return std::min(opt.max_panel_t, std::log1p(dr / r));
        };

        double t0 = ta;
        while (t0 < tb) {
            double h = panel_length(t0);
            h = std::min(h, panel_length(std::min(t0 + h, tb)));
            double t1 = t0 + 1.05 * h >= tb ? tb : t0 + h;
            h = t1 - t0;
            for (int j = 0; j < n; ++j) {
                tau[j] = 0.5 * (rule.x[j] + 1) * h;
                rr[j] = std::exp(t0 + tau[j]);
                gv[j] = gv_at(rr[j]);
                phi[j] = phi_a + w_a * tau[j];
            }
            auto cumulative = [&](const std::vector<double>& in, int j) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += rule.cumulative_at(j, i) * in[i];
                return 0.5 * h * s;
            };
            auto sweep = [&](bool frozen) {
                for (int j = 0; j < n; ++j) f[j] = rr[j] * rr[j] * gv[j] * (frozen ? 1.0 : phi[j]);
                if (d == 2) {
                    for (int j = 0; j < n; ++j) w[j] = w_a + cumulative(f, j);
                } else {
                    for (int j = 0; j < n; ++j) aux[j] = std::exp(tau[j]) * f[j];
                    for (int j = 0; j < n; ++j) w[j] = std::exp(-tau[j]) * (w_a + cumulative(aux, j));
                }
                double upd = 0.0;
                for (int j = 0; j < n; ++j) {
                    next[j] = phi_a + cumulative(w, j);
                    const double weight = d == 2 ? 1.0 + std::max(0.0, std::log(rr[j])) : 1.0;
                    upd = std::max(upd, std::fabs(next[j] - phi[j]) / (weight * std::max(1.0, std::fabs(phi[j]))));
                }
                phi.swap(next);
                return upd;
            };

            int it = 0;
            double upd = 0.0;
            if (first_order) {
                upd = sweep(true);
                it = 1;
            } else {
                double prev = inf;
                for (it = 1;; ++it) {
                    upd = sweep(false);
                    if (upd <= opt.panel_tol) break;
                    // rounding floor reached
                    if (it > 3 && upd < 1e-13 && upd >= 0.5 * prev) break;
                    if (it >= opt.max_iterations) {
                        if (upd < 1e-10) break;
                        throw ConditionViolation(scattering_condition(d),
                                                 "Volterra iteration does not converge near r = " +
                                                     std::to_string(rr[0]));
                    }
                    prev = upd;
                }
                // w consistent with the final phi
                for (int j = 0; j < n; ++j) f[j] = rr[j] * rr[j] * gv[j] * phi[j];
                if (d == 2) {
                    for (int j = 0; j < n; ++j) w[j] = w_a + cumulative(f, j);
                } else {
                    for (int j = 0; j < n; ++j) aux[j] = std::exp(tau[j]) * f[j];
                    for (int j = 0; j < n; ++j) w[j] = std::exp(-tau[j]) * (w_a + cumulative(aux, j));
                }
            }
            dg.panels++;
            dg.max_iterations = std::max(dg.max_iterations, it);
            dg.max_update = std::max(dg.max_update, upd);

            for (int j = 0; j < n; ++j) {
                const double t = j == n - 1 ? t1 : t0 + tau[j];
                const double wt = d == 2 ? f[j] : -w[j] + f[j];
                if (!std::isfinite(phi[j]) || !std::isfinite(w[j]))
                    throw IntegrationError("non-finite zero-energy solution", rr[j]);
                if (j == 0 && !sol.nodes.empty()) {
                    sol.nodes.back().w_right = w[j];
                    sol.nodes.back().wt_right = wt;
                    continue;
                }
                sol.nodes.push_back({t, phi[j], w[j], w[j], wt, wt});
            }
            phi_a = phi[n - 1];
            w_a = w[n - 1];
            t0 = t1;
        }
    }
    sol.finalize();
    sol.grid.front() = r_min;
    sol.grid.back() = r_far;
    sol.match_radius = r_far;
    if (diag) *diag = dg;
    return sol;
}

// Node intervals of a solution, integrand given as f(t, r, phi) in t = ln r; V read inside each interval.
template <class F>
double integrate_solution(const RadialSolution& s, F&& f) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i) {
        const double ta = s.nodes[i].t, tb = s.nodes[i + 1].t;
        const double lo = std::exp(ta) * (1 + 4 * eps), hi = std::exp(tb) * (1 - 4 * eps);
        total += quad::gauss10(
            [&](double t) {
                double phi, w;
                s.interpolate(i, t, phi, w);
                return f(t, std::clamp(std::exp(t), lo, hi), s.scale * phi);
            },
            ta, tb);
    }
    return total;
}

// 2D: ln a at each radius of the window from the tail-corrected asymptotic form; 3D: a.
std::vector<double> window_values(const Potential& v, const RadialSolution& u0, double lo, double hi) {
    std::vector<double> rs;
    for (double r : u0.grid)
        if (r >= lo && r <= hi) rs.push_back(r);
    std::vector<double> out;
    const std::size_t step = std::max<std::size_t>(1, rs.size() / 12);
    for (std::size_t i = 0; i < rs.size(); i += step) {
        const auto f = asymptotic_form(v, u0, rs[i]);
        out.push_back(-f.A / f.B);
    }
    if (out.empty()) {
        const auto f = asymptotic_form(v, u0, hi);
        out.push_back(-f.A / f.B);
    }
    return out;
}

std::pair<double, double> two_windows(const Potential& v, const RadialSolution& u0) {
    const double r_far = u0.r_max();
    const double r_s = std::max(v.structure_radius(), 0.25 * r_far);
    const double r_m = std::sqrt(r_s * r_far);
    auto mean = [](const std::vector<double>& x) {
        double s = 0;
        for (double y : x) s += y;
        return s / x.size();
    };
    return {mean(window_values(v, u0, r_s, r_m)), mean(window_values(v, u0, r_m, r_far))};
}

}  // namespace

double zero_energy_radius(const Potential& v, int dimension, const ZeroEnergyOptions& opt) {
    check_dimension(dimension);
    if (v.tail_kind() == TailKind::oscillating)
        throw TailTooLong("zero-energy solution needs a potential that becomes negligible");
    double r = std::max({4 * v.structure_radius(), 8 * v.first_scale(), v.negligible_radius(1e-16)});
    if (v.is_zero()) return r;
    if (v.tail_kind() == TailKind::power || v.tail_kind() == TailKind::log_corrected) {
        auto size = [&](double x) {
            return dimension == 2 ? std::fabs(tail(v, x, 1, 2, 2)) : std::fabs(tail(v, x, 2, 0, 3));
        };
        while (size(r) > opt.tail_tol) {
            r *= 2;
            if (r > 1e15) throw TailTooLong("tail too long for the zero-energy grid");
        }
    }
    return r;
}

RadialSolution zero_energy_solution(const Potential& v, int dimension, const ZeroEnergyOptions& opt,
                                    IterationDiagnostics* diag) {
    check_dimension(dimension);
    require_scattering_condition(v, dimension);
    return march(v, dimension, opt, diag, false);
}

RadialSolution zero_energy_solution_ode(const Potential& v, int dimension, const SolverOptions& opt) {
    check_dimension(dimension);
    require_scattering_condition(v, dimension);
    return regular_solution(v, 0.0, dimension, zero_energy_radius(v, dimension), opt);
}

AsymptoticForm asymptotic_form(const Potential& v, const RadialSolution& u0, double r) {
    const int d = u0.dimension;
    if (r < v.structure_radius()) throw PreconditionError("asymptotic form needs r beyond all structure");
    const double phi = u0.phi_at(r), w = u0.w_at(r), t = std::log(r);
    if (v.is_zero()) return d == 2 ? AsymptoticForm{phi - w * t, w} : AsymptoticForm{-r * w, phi + w};
    if (d == 2) {
        const double a = phi - w * t, b = w;
        const double t10 = tail(v, r, 1, 0, 2), t11 = tail(v, r, 1, 1, 2), t12 = tail(v, r, 1, 2, 2);
        return {a - (a * t11 + b * t12), b + a * t10 + b * t11};
    }
    const double c = phi + w, dd = -r * w;
    const double t00 = tail(v, r, 0, 0, 3), t10 = tail(v, r, 1, 0, 3), t20 = tail(v, r, 2, 0, 3);
    return {dd - (c * t20 + dd * t10), c + c * t10 + dd * t00};
}

std::pair<double, double> scattering_coefficients(const Potential& v, const RadialSolution& u0) {
    if (u0.dimension != 2) throw PreconditionError("X1 and X2 are defined in 2D");
    if (u0.normalization != Normalization::regular_origin)
        throw PreconditionError("X1 and X2 need the regular-origin normalization");
    const Potential v1 = v.with_coupling(1.0);
    const double x1 = integrate_solution(u0, [&](double, double r, double phi) { return r * r * v1.value(r) * phi; });
    const double x2 =
        integrate_solution(u0, [&](double t, double r, double phi) { return r * r * v1.value(r) * phi * t; });
    const double r0 = u0.r_min(), t0 = std::log(r0), v0 = v1.value(r0);
    double X1 = x1 + v0 * r0 * r0 / 2;
    double X2 = x2 + v0 * r0 * r0 * (t0 / 2 - 0.25);
    for (const auto& sh : v1.shells()) {
        const double p = u0.phi_at(sh.radius);
        X1 += sh.strength * sh.radius * p;
        X2 += sh.strength * sh.radius * p * std::log(sh.radius);
    }
    const double rf = u0.r_max(), tf = std::log(rf);
    const double w = u0.w_at(rf), a = u0.phi_at(rf) - w * tf;
    X1 += a * tail(v1, rf, 1, 0, 2) + w * tail(v1, rf, 1, 1, 2);
    X2 += a * tail(v1, rf, 1, 1, 2) + w * tail(v1, rf, 1, 2, 2);
    return {X1, X2};
}

std::pair<double, double> scattering_coefficients(const Potential& v) {
    return scattering_coefficients(v, zero_energy_solution(v, 2));
}

ScatteringLength scattering_length_2d(const Potential& v, const RadialSolution& u0, double threshold) {
    const auto [x1, x2] = scattering_coefficients(v, u0);
    const double g = v.coupling();
    ScatteringLength out;
    const double num = g * x2 - 1, den = g * x1;
    if (std::fabs(den) <= threshold * std::fabs(num)) {
        out.zero_energy_resonance = true;
        out.ln_a = den == 0 ? -std::copysign(inf, num) : num / den;
        return out;
    }
    out.ln_a = num / den;
    out.a = std::exp(out.ln_a);
    return out;
}

ScatteringLength scattering_length_2d(const Potential& v, const ZeroEnergyOptions& opt) {
    return scattering_length_2d(v, zero_energy_solution(v, 2, opt), opt.resonance_threshold);
}

double scattering_length_2d_fit(const Potential& v, const RadialSolution& u0) {
    const auto [w1, w2] = two_windows(v, u0);
    if (std::fabs(w1 - w2) > 1e-6 * std::max(1.0, std::fabs(w2)))
        throw TailTooLong("asymptotic fit windows disagree: ln a = " + std::to_string(w1) + " vs " +
                          std::to_string(w2));
    return std::exp(w2);
}

double scattering_length_3d(const Potential& v, const RadialSolution& u0) {
    if (u0.dimension != 3) throw PreconditionError("3D solution expected");
    const auto [w1, w2] = two_windows(v, u0);
    const double scale = std::max({std::fabs(w2), v.structure_radius(), v.first_scale()});
    if (!(std::fabs(w1 - w2) <= 1e-6 * scale))
        throw TailTooLong("asymptotic fit windows disagree: a = " + std::to_string(w1) + " vs " +
                          std::to_string(w2));
    return w2;
}

double scattering_length_3d(const Potential& v, const ZeroEnergyOptions& opt) {
    return scattering_length_3d(v, zero_energy_solution(v, 3, opt));
}

int bound_state_count(const Potential& v, const RadialSolution& u0) {
    int count = 0;
    double last = 0.0;
    std::size_t last_change = 0;
    for (std::size_t i = 0; i < u0.nodes.size(); ++i) {
        const double p = u0.nodes[i].phi;
        if (p == 0.0) continue;
        if (last != 0.0 && (p > 0) != (last > 0)) {
            ++count;
            last_change = i;
        }
        last = p;
    }
    if (count > 0 && last_change + 10 >= u0.nodes.size())
        throw TailTooShort("node of u0 within 10 grid steps of r_max");
    // a zero beyond the grid, from the asymptotic form
    const auto f = asymptotic_form(v, u0, u0.r_max());
    if (last != 0.0 && f.B != 0.0 && (last > 0) != (f.B > 0)) ++count;
    return count;
}

int bound_state_count(const Potential& v, int dimension) {
    return bound_state_count(v, zero_energy_solution(v, dimension));
}

double critical_coupling(const Potential& v, double g_lo, double g_hi) {
    if (!(g_lo < g_hi)) throw PreconditionError("bracket must satisfy g_lo < g_hi");
    auto x1 = [&](double g) { return scattering_coefficients(v.with_coupling(g)).first; };
    const double f_lo = x1(g_lo), f_hi = x1(g_hi);
    if (!(f_lo * f_hi < 0))
        throw NoSignChange("X1 does not change sign on [" + std::to_string(g_lo) + ", " + std::to_string(g_hi) + "]");
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(x1, g_lo, g_hi, f_lo, f_hi,
                                                        boost::math::tools::eps_tolerance<double>(36), iters);
    return 0.5 * (root.first + root.second);
}

PhaseShiftResult born_phase_shift(const Potential& v, double k, int dimension) {
    check_dimension(dimension);
    if (!(k > 0) || !std::isfinite(k)) throw PreconditionError("momentum must be positive");
    PhaseShiftResult res;
    res.k = k;
    res.method = Method::born;
    if (v.is_zero()) return res;

    double r_end = std::max({v.structure_radius(), v.first_scale(), 1.0 / k});
    while (phase_tail_bound(v, k, dimension, r_end) > 1e-13 && k * r_end < 1e5) r_end *= 1.5;
    const bool slow = v.tail_kind() == TailKind::power || v.tail_kind() == TailKind::log_corrected;
    if (!slow && phase_tail_bound(v, k, dimension, r_end) > 1e-13)
        throw TailTooLong("Born integral does not converge within k r = 1e5");

    std::vector<double> cuts{0.0};
    for (double r = 1e-3 * v.first_scale(); r < r_end; r *= 2) cuts.push_back(r);
    for (double b : v.breakpoints())
        if (b < r_end) cuts.push_back(b);
    const double period = 0.5 * pi / k;
    for (double r = period; r < r_end; r += period) cuts.push_back(r);
    cuts.push_back(r_end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double r) {
        const double gv = v.value(r);
        if (gv == 0.0) return 0.0;
        if (dimension == 2) {
            const double j = bessel_j0(k * r).value;
            return -0.5 * pi * gv * r * j * j;
        }
        const double s = std::sin(k * r);
        return -gv * s * s / k;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i] * (1 + 4 * eps), hi = cuts[i + 1] * (1 - 4 * eps);
        sum += quad::adaptive_abs(integrand, lo, hi, 1e-15);
    }
    for (const auto& sh : v.shells()) {
        if (dimension == 2) {
            const double j = bessel_j0(k * sh.radius).value;
            sum -= 0.5 * pi * sh.strength * sh.radius * j * j;
        } else {
            const double s = std::sin(k * sh.radius);
            sum -= sh.strength * s * s / k;
        }
    }
    if (slow) {
        const auto t = v.tail_integral(r_end, 0, 0);
        if (!t) throw TailTooLong("Born integral diverges");
        sum -= *t / (2 * k);
    }
    res.delta = std::atan(sum);
    res.err_estimate = 1e-15 * cuts.size() + phase_tail_bound(v, k, dimension, r_end) * (slow ? 0.0 : 1.0);
    return res;
}

double weak_coupling_scattering_length(const Potential& v, double g) {
    if (!(g != 0.0) || !std::isfinite(g)) throw PreconditionError("coupling must be finite and non-zero");
    const Potential v1 = v.with_coupling(1.0);
    require_scattering_condition(v1, 2);
    const auto [i1, iln] = scattering_coefficients(v1, march(v.with_coupling(0.0), 2, {}, nullptr, false));
    if (std::fabs(i1) <= 1e-14 * std::max(1.0, std::fabs(iln)))
        throw PreconditionError("Int r V dr vanishes: the weak-coupling formula degenerates");
    // X1 of the first iterate is Int r V + the double integral
    const double dbl = scattering_coefficients(v1, march(v1, 2, {}, nullptr, true)).first - i1;
    return std::exp((-1.0 / g + iln) / i1 + dbl / (i1 * i1));
}

std::vector<LowEnergyResidual> low_energy_limit_check(const Potential& v, const std::vector<double>& k_list) {
    const auto sl = scattering_length_2d(v);
    std::vector<LowEnergyResidual> out;
    for (double k : k_list) {
        const double d = phase_shift_by_matching(v, k, 2).delta;
        const double law = 2 / pi * (std::log(k / 2) + sl.ln_a + euler_gamma);
        out.push_back({k, d, sl.zero_energy_resonance ? std::numeric_limits<double>::quiet_NaN() : 1 / std::tan(d) - law});
    }
    return out;
}

ZeroEnergyReport zero_energy(const Potential& v, int dimension, const ZeroEnergyOptions& opt) {
    ZeroEnergyReport rep;
    rep.dimension = dimension;
    rep.u0 = zero_energy_solution(v, dimension, opt, &rep.iteration_diagnostics);
    const auto f = asymptotic_form(v, rep.u0, rep.u0.r_max());
    rep.A_coefficient = f.A;
    rep.B_coefficient = f.B;
    if (dimension == 2) {
        std::tie(rep.X1, rep.X2) = scattering_coefficients(v, rep.u0);
        rep.scattering_length = scattering_length_2d(v, rep.u0, opt.resonance_threshold);
    } else {
        ScatteringLength s;
        if (std::fabs(f.B) <= opt.resonance_threshold * std::fabs(f.A)) {
            s.zero_energy_resonance = true;
        } else {
            s.a = -f.A / f.B;
        }
        rep.scattering_length = s;
    }
    rep.bound_state_count = bound_state_count(v, rep.u0);
    return rep;
}

}  // namespace lowk
