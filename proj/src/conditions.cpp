#include "lowk/conditions.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "lowk/errors.hpp"
#include "lowk/quadrature.hpp"
#include "lowk/specfun.hpp"

namespace lowk {

namespace {

constexpr int nw = 5;
using Vec = std::array<double, nw>;

// 0: r(1+|ln r|+ln+^2 r)  1: r^3 ln^2(r/a)  2: r  3: r^2  4: r^4
Vec weights(double r, double ln_a) {
    const double l = std::log(r);
    const double lp = l > 0 ? l : 0.0;
    const double la = l - ln_a;
    return {r * (1.0 + std::fabs(l) + lp * lp), r * r * r * la * la, r, r * r, r * r * r * r};
}

struct Integrator {
    const Potential& v;  // uncoupled
    double ln_a;
    std::vector<double> breaks;
    std::vector<Shell> shells;

    Vec smooth(double lo, double hi) const {
        Vec out{};
        if (hi <= lo) return out;
        std::vector<double> cuts{lo};
        for (double b : breaks)
            if (b > lo && b < hi) cuts.push_back(b);
        cuts.push_back(hi);
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double t0 = std::log(cuts[s]), t1 = std::log(cuts[s + 1]);
            // nudge inside the segment so disc edges are read from the correct side
            const double mid_lo = cuts[s], mid_hi = cuts[s + 1];
            for (int i = 0; i < nw; ++i) {
                auto f = [&, i](double t) {
                    double r = std::exp(t);
                    r = std::clamp(r, mid_lo * (1 + 1e-14), mid_hi * (1 - 1e-14));
                    return weights(r, ln_a)[i] * v.magnitude(r) * r;
                };
                out[i] += quad::adaptive(f, t0, t1, 1e-12, 15);
            }
        }
        for (const auto& sh : shells)
            if (sh.radius > lo && sh.radius <= hi) {
                const Vec w = weights(sh.radius, ln_a);
                for (int i = 0; i < nw; ++i) out[i] += std::fabs(sh.strength) * w[i];
            }
        return out;
    }
};

// Contribution of the bump around r = n pi, integrated in the local variable x = r - n pi.
Vec gap_bump(const OscillatingGap& o, int n, double ln_a) {
    const double c = n * pi;
    const double w = std::pow(c, -0.5 * o.power);
    auto vloc = [&](double x) {
        const double s = std::sin(x);
        return std::fabs(o.strength) * std::exp(-std::pow(c + x, o.power) * s * s);
    };
    Vec out{};
    if (20.0 * w >= 0.5 * pi) {
        std::vector<double> cuts = {-0.5 * pi, -w, 0.0, w, 0.5 * pi};
        if (w >= 0.5 * pi) cuts = {-0.5 * pi, 0.0, 0.5 * pi};
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
            for (int i = 0; i < nw; ++i) {
                auto f = [&, i](double x) { return weights(c + x, ln_a)[i] * vloc(x); };
                out[i] += quad::adaptive(f, cuts[s], cuts[s + 1], 1e-11, 10);
            }
        return out;
    }
    // narrow bump: composite Gauss-Legendre on a fixed graded mesh
    using G = boost::math::quadrature::gauss<double, 10>;
    static constexpr double mesh[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 9.0, 14.0, 20.0};
    auto add = [&](double x, double wt) {
        const Vec wv = weights(c + x, ln_a);
        const double f = wt * vloc(x);
        for (int i = 0; i < nw; ++i) out[i] += wv[i] * f;
    };
    for (std::size_t s = 0; s + 1 < std::size(mesh); ++s)
        for (double sign : {-1.0, 1.0}) {
            const double a = sign * mesh[s] * w, b = sign * mesh[s + 1] * w;
            const double m = 0.5 * (a + b), h = 0.5 * std::fabs(b - a);
            for (std::size_t k = 0; k < G::abscissa().size(); ++k) {
                add(m - h * G::abscissa()[k], h * G::weights()[k]);
                add(m + h * G::abscissa()[k], h * G::weights()[k]);
            }
        }
    return out;
}

// Analytic convergence of each weighted integral, where the tail is classified.
std::optional<std::array<bool, nw>> analytic_verdicts(const Potential& v) {
    return std::visit(
        [](const auto& x) -> std::optional<std::array<bool, nw>> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Zero> || std::is_same_v<T, Exponential> || std::is_same_v<T, Disc> ||
                          std::is_same_v<T, DeltaShells>) {
                return std::array<bool, nw>{true, true, true, true, true};
            } else if constexpr (std::is_same_v<T, PowerTail>) {
                if (x.strength == 0.0) return std::array<bool, nw>{true, true, true, true, true};
                const double nu = x.exponent;
                return std::array<bool, nw>{nu > 2.0, nu > 4.0, nu > 2.0, nu > 3.0, nu > 5.0};
            } else if constexpr (std::is_same_v<T, LogCorrectedTail>) {
                if (x.strength == 0.0) return std::array<bool, nw>{true, true, true, true, true};
                return std::array<bool, nw>{true, true, true, true, x.log_power > 1.0};
            } else {
                return std::nullopt;
            }
        },
        v.shape());
}

// Int_{R}^inf of each weight times the power tail, when it converges.
Vec power_remainder(const PowerTail& p, double R, double ln_a) {
    Vec out{};
    const double c = std::fabs(p.strength);
    if (c == 0.0 || R < p.onset) return out;
    auto I = [&](double mu, int m) {
        if (mu <= 0) return std::numeric_limits<double>::infinity();
        const double l = std::log(R), s = std::pow(R, -mu);
        if (m == 0) return s / mu;
        if (m == 1) return s * (l / mu + 1.0 / (mu * mu));
        return s * (l * l / mu + 2.0 * l / (mu * mu) + 2.0 / (mu * mu * mu));
    };
    const double nu = p.exponent;
    if (R >= 1.0) out[0] = c * (I(nu - 2, 0) + I(nu - 2, 1) + I(nu - 2, 2));
    out[1] = c * (I(nu - 4, 2) - 2.0 * ln_a * I(nu - 4, 1) + ln_a * ln_a * I(nu - 4, 0));
    out[2] = c * I(nu - 2, 0);
    out[3] = c * I(nu - 3, 0);
    out[4] = c * I(nu - 5, 0);
    return out;
}

const char* descriptions[4] = {
    "Int (1+|ln r|+(ln+ r)^2) |V| r dr",
    "Int |V| r^3 ln^2(r/a) dr",
    "Int r |V| dr, Int r^2 |V| dr",
    "Int r^4 |V| dr",
};

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::convergent: return "convergent";
        case Verdict::divergent: return "divergent";
        default: return "indeterminate";
    }
}

const ConditionRecord& ConditionReport::get(std::string_view name) const {
    for (const auto& r : records)
        if (r.name == name) return r;
    throw std::out_of_range("no condition named " + std::string(name));
}

const ConditionRecord& ConditionReport::scattering_length() const {
    return get(dimension == 2 ? cond_2d_scattering_length : cond_3d_scattering_length);
}

const ConditionRecord& ConditionReport::effective_range() const {
    return get(dimension == 2 ? cond_2d_effective_range : cond_3d_effective_range);
}

ConditionReport check_conditions(const Potential& vin, int dimension, std::optional<double> a_hint,
                                 const ConditionOptions& opt) {
    if (dimension != 2 && dimension != 3) throw PreconditionError("dimension must be 2 or 3");
    if (a_hint && !(*a_hint > 0)) throw PreconditionError("a_hint must be positive");
    const Potential v = vin.with_coupling(1.0);
    const double ln_a = a_hint ? std::log(*a_hint) : 0.0;

    ConditionReport rep;
    rep.dimension = dimension;
    rep.a_hint = a_hint;
    rep.growth_factor = opt.growth_factor;

    const auto* gap = std::get_if<OscillatingGap>(&v.shape());
    Integrator integ{v, ln_a, v.breakpoints(), v.shells()};

    const double r_lo = 1e-12 * v.first_scale();
    double R = std::max({8.0 * v.structure_radius(), 8.0 * v.first_scale(), 8.0});
    double max_cutoff = opt.max_cutoff;
    if (gap) max_cutoff = std::min(max_cutoff, 1e5);

    Vec total{};
    int gap_n = 0;
    auto advance_to = [&](double cutoff) {
        if (gap) {
            if (gap_n == 0) {
                const Vec a = integ.smooth(r_lo, 0.5 * pi);
                for (int i = 0; i < nw; ++i) total[i] += a[i];
            }
            while ((gap_n + 1.5) * pi <= cutoff) {
                ++gap_n;
                const Vec b = gap_bump(*gap, gap_n, ln_a);
                for (int i = 0; i < nw; ++i) total[i] += b[i];
            }
        } else {
            const Vec a = integ.smooth(rep.cutoff > 0 ? rep.cutoff : r_lo, cutoff);
            for (int i = 0; i < nw; ++i) total[i] += a[i];
        }
        rep.cutoff = cutoff;
    };

    std::array<Verdict, nw> numeric;
    numeric.fill(Verdict::indeterminate);
    std::array<int, nw> conv_run{}, div_run{};
    std::array<double, nw> frozen{}, frozen_at{};
    std::array<std::vector<std::pair<double, double>>, nw> history;

    advance_to(R);
    for (int i = 0; i < nw; ++i) history[i].push_back({R, total[i]});
    for (int j = 0; j < opt.max_doublings && 2.0 * R <= max_cutoff; ++j) {
        const Vec prev = total;
        R *= 2.0;
        advance_to(R);
        bool pending = false;
        for (int i = 0; i < nw; ++i) {
            if (numeric[i] != Verdict::indeterminate) continue;
            history[i].push_back({R, total[i]});
            const double d = std::fabs(total[i] - prev[i]);
            conv_run[i] = d <= opt.rel_change * std::fabs(total[i]) ? conv_run[i] + 1 : 0;
            div_run[i] = (prev[i] > 0 && total[i] / prev[i] >= opt.growth_factor) ? div_run[i] + 1 : 0;
            if (conv_run[i] >= 2) {
                numeric[i] = Verdict::convergent;
                frozen[i] = total[i];
                frozen_at[i] = R;
            } else if (div_run[i] >= 2) {
                numeric[i] = Verdict::divergent;
            } else {
                pending = true;
            }
        }
        if (!pending) break;
    }
    for (int i = 0; i < nw; ++i)
        if (numeric[i] != Verdict::convergent) {
            frozen[i] = total[i];
            frozen_at[i] = rep.cutoff;
        }

    // a tabulated grid that ends on a non-negligible value gives no evidence about the tail
    bool truncated = false;
    if (const auto* t = std::get_if<Tabulated>(&v.shape())) {
        double vmax = 0.0;
        for (double x : t->v()) vmax = std::max(vmax, std::fabs(x));
        truncated = std::fabs(t->v().back()) > 1e-8 * vmax;
        if (truncated) numeric.fill(Verdict::indeterminate);
    }

    const auto analytic = analytic_verdicts(v);
    Vec remainder{};
    if (const auto* p = std::get_if<PowerTail>(&v.shape()))
        for (int i = 0; i < nw; ++i) remainder[i] = power_remainder(*p, frozen_at[i], ln_a)[i];

    auto combine = [](Verdict a, Verdict b) {
        if (a == Verdict::divergent || b == Verdict::divergent) return Verdict::divergent;
        if (a == Verdict::convergent && b == Verdict::convergent) return Verdict::convergent;
        return Verdict::indeterminate;
    };
    auto as_verdict = [](bool c) { return c ? Verdict::convergent : Verdict::divergent; };

    const char* names[4] = {cond_2d_scattering_length, cond_2d_effective_range, cond_3d_scattering_length,
                            cond_3d_effective_range};
    const int first[4] = {0, 1, 2, 4};
    for (int c = 0; c < 4; ++c) {
        ConditionRecord rec;
        rec.name = names[c];
        rec.integral = descriptions[c];
        const int i = first[c];
        rec.history = history[i];
        rec.cutoff = rep.cutoff;
        if (c == 2) {
            rec.numeric = combine(numeric[2], numeric[3]);
            if (analytic) rec.analytic = combine(as_verdict((*analytic)[2]), as_verdict((*analytic)[3]));
        } else {
            rec.numeric = numeric[i];
            if (analytic) rec.analytic = as_verdict((*analytic)[i]);
        }
        rec.verdict = rec.analytic ? *rec.analytic : rec.numeric;
        if (rec.analytic && rec.numeric != Verdict::indeterminate && rec.numeric != *rec.analytic)
            rec.note = "analytic and numerical verdicts disagree";
        if (truncated) rec.note = "tabulated grid ends on a non-negligible value; tail cannot be extrapolated";
        if (rec.verdict == Verdict::convergent) {
            auto val = [&](int k) { return frozen[k] + (std::isfinite(remainder[k]) ? remainder[k] : 0.0); };
            rec.value = val(i);
            if (c == 2) rec.secondary = val(3);
            if (rec.numeric != Verdict::convergent && rec.note.empty())
                rec.note = "numerical sequence not yet stable at the cutoff; analytic tail added";
        }
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

}  // namespace lowk
