#include "lowk/effective_range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowk/errors.hpp"
#include "lowk/quadrature.hpp"
#include "lowk/radial_solver.hpp"
#include "lowk/specfun.hpp"
#include "lowk/zero_energy.hpp"

namespace lowk {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

template <class F>
double over_nodes(const RadialSolution& s, F&& f) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i) {
        const double ta = s.nodes[i].t, tb = s.nodes[i + 1].t;
        total += quad::gauss10(
            [&](double t) {
                double phi, w;
                s.interpolate(i, t, phi, w);
                return f(t, std::exp(t), s.scale * phi);
            },
            ta, tb);
    }
    return total;
}

double moment(const Potential& v, double r, int p, int m) {
    const auto t = v.tail_integral(r, p, m);
    if (!t) throw TailTooLong("tail moment diverges beyond the zero-energy grid");
    return *t;
}

// Int_r^inf g V r^p (ln r - L)^j
double shifted_moment(const Potential& v, double r, int p, int j, double L) {
    const double t0 = moment(v, r, p, 0);
    if (j == 0) return t0;
    const double t1 = moment(v, r, p, 1);
    if (j == 1) return t1 - L * t0;
    return moment(v, r, p, 2) - 2 * L * t1 + L * L * t0;
}

double value_2d(const Potential& v, const ZeroEnergyReport& z) {
    const auto& u0 = z.u0;
    const double L = z.scattering_length.ln_a, b = z.B_coefficient;
    double sum = over_nodes(u0, [&](double t, double r, double phi) {
        const double s = t - L, p = phi / b;
        return r * r * (s * s - p * p);
    });
    const double rm = u0.r_min(), sm = std::log(rm) - L, pm = u0.phi_at(rm) / b;
    sum += 0.5 * rm * rm * (sm * sm - sm + 0.5 - pm * pm);
    if (!v.is_zero()) {
        // first-order correction u0 - v0 beyond the grid
        const double rf = u0.r_max(), sf = std::log(rf) - L, rf2 = rf * rf;
        const double c1 = -rf2 * (sf / 2 - 0.25), c0 = rf2 * (sf * sf / 2 - sf / 2 + 0.25);
        sum -= 2 * ((shifted_moment(v, rf, 3, 2, L) - shifted_moment(v, rf, 3, 1, L)) / 4 +
                    c1 * shifted_moment(v, rf, 1, 2, L) + c0 * shifted_moment(v, rf, 1, 1, L));
    }
    return sum;
}

double value_3d(const Potential& v, const ZeroEnergyReport& z) {
    const auto& u0 = z.u0;
    const double A = z.A_coefficient;
    const double a = *z.scattering_length.a;
    if (A == 0.0) throw PreconditionError("effective range undefined for a = 0");
    double sum = over_nodes(u0, [&](double, double r, double phi) {
        const double v0 = 1 - r / a, un = r * phi / A;
        return r * (v0 * v0 - un * un);
    });
    const double rm = u0.r_min(), pm = u0.phi_at(rm) / A;
    sum += rm - rm * rm / a + rm * rm * rm / (3 * a * a) - rm * rm * rm * pm * pm / 3;
    if (!v.is_zero()) {
        const double rf = u0.r_max();
        const double h[4] = {rf * rf / 2 - rf * rf * rf / (3 * a), -rf + rf * rf / (2 * a), 0.5, -1 / (6 * a)};
        double c[5] = {};
        for (int i = 0; i < 4; ++i) {
            c[i] += h[i];
            c[i + 1] -= h[i] / a;
        }
        double t = 0.0;
        for (int p = 0; p < 5; ++p)
            if (c[p] != 0.0) t += c[p] * moment(v, rf, p, 0);
        sum -= 2 * t;
    }
    return 2 * sum;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> ks(n);
    for (int i = 0; i < n; ++i) ks[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return ks;
}

}  // namespace

std::vector<std::pair<double, double>> low_energy_residuals(const Potential& v, int dimension,
                                                            const std::vector<double>& k_list) {
    const auto z = zero_energy(v, dimension);
    if (z.scattering_length.zero_energy_resonance) throw PreconditionError("zero-energy resonance: a undefined");
    std::vector<std::pair<double, double>> out;
    for (double k : k_list) {
        const double d = phase_shift_by_matching(v, k, dimension).delta;
        if (dimension == 2)
            out.emplace_back(k, 1 / std::tan(d) - 2 / pi * (std::log(k / 2) + z.scattering_length.ln_a + euler_gamma));
        else
            out.emplace_back(k, k / std::tan(d) + 1 / *z.scattering_length.a);
    }
    return out;
}

double anomalous_residual_2d(double g, double nu, double a, double k, LogArgument arg) {
    if (!(nu > 2 && nu < 4)) throw DomainError("anomalous law needs 2 < nu < 4");
    if (!(a > 0) || !(k > 0)) throw DomainError("a and k must be positive");
    const double l = std::log(arg == LogArgument::half_ka ? 0.5 * k * a : k * a);
    return -g * bessel_moment(nu) * std::pow(k, nu - 2) * l * l;
}

AnomalyFit fit_anomaly(const std::vector<std::pair<double, double>>& residuals, const AnomalyModel& model) {
    auto pts = residuals;
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 8) throw PreconditionError("anomaly fit needs at least 8 points");
    if (!(pts.front().first > 0) || std::log10(pts.back().first / pts.front().first) < 1.5)
        throw PreconditionError("anomaly fit needs k spanning at least 1.5 decades");
    const bool log2d = model.kind == AnomalyKind::power_log_2d;
    const double sign = pts.front().second > 0 ? 1.0 : -1.0;
    std::vector<double> x, y;
    for (const auto& [k, res] : pts) {
        if (!(res * sign > 0)) throw RegimeError("residual changes sign: use smaller k");
        double val = std::log(std::fabs(res));
        if (log2d) {
            const double ka = k * model.a * (model.log_argument == LogArgument::half_ka ? 0.5 : 1.0);
            if (ka >= 1) throw RegimeError("k a not small: use smaller k");
            val -= model.log_power * std::log(std::fabs(std::log(ka)));
        } else {
            val -= 2 * std::log(k);
        }
        x.push_back(std::log(k));
        y.push_back(val);
    }
    const double trend = y.back() - y.front();
    for (std::size_t i = 1; i < y.size(); ++i)
        if ((y[i] - y[i - 1]) * trend <= 0) throw RegimeError("residual magnitudes not monotone: use smaller k");

    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double p = sxy / sxx, lc = my - p * mx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) rss += std::pow(y[i] - lc - p * x[i], 2);

    AnomalyFit fit;
    fit.anomaly.exponent = p;
    fit.anomaly.log_power = log2d ? model.log_power : 0.0;
    const double pc = model.exponent.value_or(p);
    fit.anomaly.coefficient = sign * std::exp(my - pc * mx);
    fit.fit_quality = std::sqrt(rss / n);
    return fit;
}

EffectiveRangeReport effective_range(const Potential& v, int dimension, const EffectiveRangeOptions& opt) {
    if (dimension != 2 && dimension != 3) throw PreconditionError("dimension must be 2 or 3");
    EffectiveRangeReport rep;
    rep.dimension = dimension;
    const auto z = zero_energy(v, dimension);
    if (z.scattering_length.zero_energy_resonance) throw PreconditionError("zero-energy resonance: a undefined");
    rep.scattering_length = *z.scattering_length.a;

    if (v.is_zero()) {
        rep.convergent = true;
        rep.condition.name = dimension == 2 ? cond_2d_effective_range : cond_3d_effective_range;
        rep.condition.verdict = Verdict::convergent;
    } else {
        rep.condition = check_conditions(v, dimension, dimension == 2 ? std::optional<double>(rep.scattering_length) : std::nullopt)
                            .effective_range();
        if (rep.condition.verdict == Verdict::indeterminate)
            throw IndeterminateCondition(rep.condition.name +
                                         " is indeterminate: classify the tail of the potential explicitly");
        rep.convergent = rep.condition.verdict == Verdict::convergent;
    }

    if (rep.convergent) {
        if (dimension == 2) {
            rep.value = value_2d(v, z);
            rep.k2_coefficient = 2 / pi * *rep.value;
        } else {
            rep.value = value_3d(v, z);
        }
        return rep;
    }

    const double a = rep.scattering_length;
    const double scale = std::max({a, v.structure_radius(), v.first_scale()});
    const auto ks = log_grid(opt.anomaly_ka_min / scale, opt.anomaly_ka_max / scale, opt.anomaly_points);
    AnomalyModel model;
    model.kind = dimension == 2 ? AnomalyKind::power_log_2d : AnomalyKind::power_3d;
    model.a = a;
    model.log_argument = opt.log_argument;
    if (const auto nu = v.tail_exponent()) model.exponent = dimension == 2 ? *nu - 2 : *nu - 5;
    try {
        const auto fit = fit_anomaly(low_energy_residuals(v, dimension, ks), model);
        rep.anomaly = fit.anomaly;
        rep.fit_quality = fit.fit_quality;
    } catch (const RegimeError& e) {
        if (model.exponent) throw;
        rep.note = std::string("divergent without a power-law anomaly: ") + e.what();
    }
    return rep;
}

std::pair<double, double> exact_relation_2d(const Potential& v, double k) {
    if (!(k > 0)) throw PreconditionError("momentum must be positive");
    const auto z = zero_energy(v, 2);
    if (z.scattering_length.zero_energy_resonance) throw PreconditionError("zero-energy resonance: a undefined");
    const double L = z.scattering_length.ln_a, b = z.B_coefficient;
    const double r_int = z.u0.r_max();
    const auto sol = regular_solution(v, k, 2, std::max(r_int, 10 / k));

    // phi = P J0 + Q Y0 outside the potential
    const double re = sol.r_max(), sr = std::sqrt(re);
    const double phi = sol.u_at(re) / sr, phi_r = (sol.u_prime_at(re) - sol.u_at(re) / (2 * re)) / sr;
    const auto bs = bessel01(k * re);
    const double det = 2 / (pi * re);
    const double P = (-k * bs.y1 * phi - bs.y0 * phi_r) / det;
    const double Q = (bs.j0 * phi_r + k * bs.j1 * phi) / det;
    const double cot = -P / Q, lambda = pi / (2 * Q);

    auto integrand = [&](double t) {
        const double r = std::exp(t);
        const auto c = bessel01(k * r);
        const double vk = 0.5 * pi * (c.y0 - cot * c.j0);
        return r * r * (vk * (t - L) - lambda * sol.phi_at(r) * z.u0.phi_at(r) / b);
    };
    std::vector<double> cuts{z.u0.r_min()};
    for (double r = 2 * cuts[0]; r < r_int; r *= 2) cuts.push_back(r);
    for (double x : v.breakpoints())
        if (x < r_int) cuts.push_back(x);
    cuts.push_back(r_int);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        sum += quad::adaptive_abs(integrand, std::log(cuts[i]) + 4 * eps, std::log(cuts[i + 1]) - 4 * eps, 1e-12, 14);

    const double lhs = cot - 2 / pi * (std::log(k / 2) + L + euler_gamma);
    return {lhs, 2 / pi * k * k * sum};
}

}  // namespace lowk
