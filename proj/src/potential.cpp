#include "lowk/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowk/errors.hpp"
#include "lowk/quadrature.hpp"

namespace lowk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double inf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError("invalid potential: " + msg);
}

bool finite(double x) { return std::isfinite(x); }

void validate(const Zero&) {}
void validate(const Exponential& e) {
    require(finite(e.strength), "exponential strength must be finite");
    require(finite(e.rate) && e.rate > 0, "exponential rate must be positive");
}
void validate(const Disc& d) {
    require(finite(d.strength), "disc strength must be finite");
    require(finite(d.radius) && d.radius > 0, "disc radius must be positive");
}
void validate(const DeltaShells& s) {
    double last = 0.0;
    for (const auto& sh : s.shells) {
        require(finite(sh.strength), "shell strength must be finite");
        require(finite(sh.radius) && sh.radius > last, "shell radii must be positive and strictly increasing");
        last = sh.radius;
    }
}
void validate(const Tabulated& t) { require(t.r().size() >= 2, "tabulated potential needs at least two points"); }
void validate(const InnerShape& s) {
    std::visit([](const auto& x) { validate(x); }, s);
}
void validate(const PowerTail& p) {
    validate(p.inner);
    require(finite(p.exponent) && p.exponent > 0, "tail exponent must be positive");
    require(finite(p.onset) && p.onset > 0, "tail onset must be positive");
    require(finite(p.strength), "tail strength must be finite");
}
void validate(const LogCorrectedTail& l) {
    require(finite(l.strength), "log tail strength must be finite");
    require(finite(l.onset) && l.onset > 0.5, "log tail onset must exceed 1/2 so that ln(r+R) > 0");
    require(finite(l.log_power), "log power must be finite");
}
void validate(const OscillatingGap& o) {
    require(finite(o.strength), "strength must be finite");
    require(finite(o.power) && o.power > 0, "power must be positive");
}

// ---- pointwise values (no coupling, no shells)

double regular(const Zero&, double) { return 0.0; }
double regular(const Exponential& e, double r) { return e.strength * std::exp(-e.rate * r); }
double regular(const Disc& d, double r) { return r <= d.radius ? d.strength : 0.0; }
double regular(const DeltaShells&, double) { return 0.0; }
double regular(const Tabulated& t, double r) { return t(r); }
double regular(const InnerShape& s, double r) {
    return std::visit([r](const auto& x) { return regular(x, r); }, s);
}
double regular(const PowerTail& p, double r) {
    double v = regular(p.inner, r);
    if (r >= p.onset) v += p.strength * std::pow(r, -p.exponent);
    return v;
}
double regular(const LogCorrectedTail& l, double r) {
    if (r <= l.onset) return 0.0;
    return l.strength / (std::pow(r, 5.0) * std::pow(std::log(r + l.onset), l.log_power));
}
double regular(const OscillatingGap& o, double r) {
    const double s = std::sin(r);
    return o.strength * std::exp(-std::pow(r, o.power) * s * s);
}

// ---- structure

void shells_of(const Zero&, std::vector<Shell>&) {}
void shells_of(const Exponential&, std::vector<Shell>&) {}
void shells_of(const Disc&, std::vector<Shell>&) {}
void shells_of(const DeltaShells& s, std::vector<Shell>& out) { out.insert(out.end(), s.shells.begin(), s.shells.end()); }
void shells_of(const Tabulated&, std::vector<Shell>&) {}
void shells_of(const InnerShape& s, std::vector<Shell>& out) {
    std::visit([&](const auto& x) { shells_of(x, out); }, s);
}
void shells_of(const PowerTail& p, std::vector<Shell>& out) { shells_of(p.inner, out); }
void shells_of(const LogCorrectedTail&, std::vector<Shell>&) {}
void shells_of(const OscillatingGap&, std::vector<Shell>&) {}

void breaks_of(const Zero&, std::vector<double>&) {}
void breaks_of(const Exponential&, std::vector<double>&) {}
void breaks_of(const Disc& d, std::vector<double>& out) { out.push_back(d.radius); }
void breaks_of(const DeltaShells& s, std::vector<double>& out) {
    for (const auto& sh : s.shells) out.push_back(sh.radius);
}
void breaks_of(const Tabulated& t, std::vector<double>& out) {
    if (t.r().empty()) return;
    if (t.r().front() > 0) out.push_back(t.r().front());
    out.push_back(t.r().back());
}
void breaks_of(const InnerShape& s, std::vector<double>& out) {
    std::visit([&](const auto& x) { breaks_of(x, out); }, s);
}
void breaks_of(const PowerTail& p, std::vector<double>& out) {
    breaks_of(p.inner, out);
    out.push_back(p.onset);
}
void breaks_of(const LogCorrectedTail& l, std::vector<double>& out) { out.push_back(l.onset); }
void breaks_of(const OscillatingGap&, std::vector<double>&) {}

double scale_of(const Zero&) { return inf; }
double scale_of(const Exponential& e) { return 1.0 / e.rate; }
double scale_of(const Disc& d) { return d.radius; }
double scale_of(const DeltaShells& s) { return s.shells.empty() ? inf : s.shells.front().radius; }
double scale_of(const Tabulated& t) {
    if (t.r().size() < 2) return inf;
    return t.r().front() > 0 ? t.r().front() : t.r()[1] - t.r()[0];
}
double scale_of(const InnerShape& s) {
    return std::visit([](const auto& x) { return scale_of(x); }, s);
}
double scale_of(const PowerTail& p) { return std::min(scale_of(p.inner), p.onset); }
double scale_of(const LogCorrectedTail& l) { return l.onset; }
double scale_of(const OscillatingGap&) { return 1.0; }

// eps applies to the uncoupled shape
double negligible_of(const Zero&, double) { return 0.0; }
double negligible_of(const Exponential& e, double eps) {
    const double s = std::fabs(e.strength);
    return s <= eps ? 0.0 : std::log(s / eps) / e.rate;
}
double negligible_of(const Disc& d, double) { return d.strength == 0.0 ? 0.0 : d.radius; }
double negligible_of(const DeltaShells&, double) { return 0.0; }
double negligible_of(const Tabulated& t, double) { return t.r().empty() ? 0.0 : t.r().back(); }
double negligible_of(const InnerShape& s, double eps) {
    return std::visit([eps](const auto& x) { return negligible_of(x, eps); }, s);
}
double negligible_of(const PowerTail& p, double eps) {
    double r = negligible_of(p.inner, eps);
    const double c = std::fabs(p.strength);
    if (c > 0) r = std::max({r, p.onset, std::pow(c / eps, 1.0 / p.exponent)});
    return r;
}
double negligible_of(const LogCorrectedTail& l, double eps) {
    const double s = std::fabs(l.strength);
    if (s == 0.0) return 0.0;
    double r = std::max(l.onset, 1.0);
    for (int i = 0; i < 60; ++i) {
        const double next = std::max(l.onset, std::pow(s / (eps * std::pow(std::log(r + l.onset), l.log_power)), 0.2));
        if (std::fabs(next - r) < 1e-12 * r) break;
        r = next;
    }
    return r;
}
double negligible_of(const OscillatingGap& o, double) { return o.strength == 0.0 ? 0.0 : inf; }

double varlen_of(const Zero&, double) { return inf; }
double varlen_of(const Exponential& e, double) { return 1.0 / e.rate; }
double varlen_of(const Disc&, double) { return inf; }
double varlen_of(const DeltaShells&, double) { return inf; }
double varlen_of(const Tabulated& t, double r) {
    const auto& x = t.r();
    if (x.size() < 2 || r < x.front() || r > x.back()) return inf;
    auto it = std::upper_bound(x.begin(), x.end(), r);
    const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - x.begin()), 1, x.size() - 1);
    return x[i] - x[i - 1];
}
double varlen_of(const InnerShape& s, double r) {
    return std::visit([r](const auto& x) { return varlen_of(x, r); }, s);
}
double varlen_of(const PowerTail& p, double r) { return std::min(varlen_of(p.inner, r), r); }
double varlen_of(const LogCorrectedTail&, double r) { return r; }
double varlen_of(const OscillatingGap& o, double r) {
    return std::min(1.0, std::pow(std::max(r, 1.0), -0.5 * o.power));
}

bool zero_of(const Zero&) { return true; }
bool zero_of(const Exponential& e) { return e.strength == 0.0; }
bool zero_of(const Disc& d) { return d.strength == 0.0; }
bool zero_of(const DeltaShells& s) {
    return std::all_of(s.shells.begin(), s.shells.end(), [](const Shell& x) { return x.strength == 0.0; });
}
bool zero_of(const Tabulated& t) {
    return std::all_of(t.v().begin(), t.v().end(), [](double x) { return x == 0.0; });
}
bool zero_of(const InnerShape& s) {
    return std::visit([](const auto& x) { return zero_of(x); }, s);
}
bool zero_of(const PowerTail& p) { return zero_of(p.inner) && p.strength == 0.0; }
bool zero_of(const LogCorrectedTail& l) { return l.strength == 0.0; }
bool zero_of(const OscillatingGap& o) { return o.strength == 0.0; }

// Int_a^b r^p ln^m r dr of the smooth part on a finite interval
template <class F>
double finite_moment(F&& v, double a, double b, int p, int m) {
    if (b <= a) return 0.0;
    auto f = [&](double r) { return v(r) * std::pow(r, p) * std::pow(std::log(r), m); };
    return quad::adaptive(f, a, b, 1e-13, 12);
}

double power_moment(double r0, double mu, int m) {
    const double l = std::log(r0), s = std::pow(r0, -mu);
    switch (m) {
        case 0: return s / mu;
        case 1: return s * (l / mu + 1.0 / (mu * mu));
        default: return s * (l * l / mu + 2.0 * l / (mu * mu) + 2.0 / (mu * mu * mu));
    }
}

std::optional<double> tail_of(const Zero&, double, int, int) { return 0.0; }
std::optional<double> tail_of(const Exponential& e, double r0, int p, int m) {
    if (e.strength == 0.0) return 0.0;
    boost::math::quadrature::exp_sinh<double> es;
    auto f = [&](double u) {
        const double r = r0 + u;
        const double y = std::exp(-e.rate * u) * std::pow(r, p) * std::pow(std::log(r), m);
        return std::isfinite(y) ? y : 0.0;
    };
    return e.strength * std::exp(-e.rate * r0) * es.integrate(f, 1e-13);
}
std::optional<double> tail_of(const Disc& d, double r0, int p, int m) {
    return finite_moment([&](double) { return d.strength; }, r0, d.radius, p, m);
}
std::optional<double> tail_of(const DeltaShells& s, double r0, int p, int m) {
    double sum = 0.0;
    for (const auto& sh : s.shells)
        if (sh.radius > r0) sum += sh.strength * std::pow(sh.radius, p) * std::pow(std::log(sh.radius), m);
    return sum;
}
std::optional<double> tail_of(const Tabulated& t, double r0, int p, int m) {
    if (t.r().empty()) return 0.0;
    return finite_moment([&](double r) { return t(r); }, std::max(r0, t.r().front()), t.r().back(), p, m);
}
std::optional<double> tail_of(const InnerShape& s, double r0, int p, int m) {
    return std::visit([&](const auto& x) { return tail_of(x, r0, p, m); }, s);
}
std::optional<double> tail_of(const PowerTail& pt, double r0, int p, int m) {
    auto inner = tail_of(pt.inner, r0, p, m);
    if (!inner) return std::nullopt;
    if (pt.strength == 0.0) return inner;
    const double mu = pt.exponent - p - 1.0;
    if (mu <= 0) return std::nullopt;
    return *inner + pt.strength * power_moment(std::max(r0, pt.onset), mu, m);
}
std::optional<double> tail_of(const LogCorrectedTail& l, double r0, int p, int m) {
    if (l.strength == 0.0) return 0.0;
    if (p > 4 || (p == 4 && l.log_power - m <= 1)) return std::nullopt;
    const double a = std::max(r0, l.onset);
    boost::math::quadrature::exp_sinh<double> es;
    auto f = [&](double u) {
        const double r = a * std::exp(u);
        const double y = regular(l, r) * std::pow(r, p + 1) * std::pow(std::log(r), m);
        return std::isfinite(y) ? y : 0.0;
    };
    return es.integrate(f, 1e-12);
}
std::optional<double> tail_of(const OscillatingGap& o, double, int, int) {
    if (o.strength == 0.0) return 0.0;
    return std::nullopt;
}

}  // namespace

Tabulated::Tabulated(std::vector<double> r, std::vector<double> v) : r_(std::move(r)), v_(std::move(v)) {
    require(r_.size() == v_.size(), "tabulated r and V must have the same length");
    require(r_.size() >= 2, "tabulated potential needs at least two points");
    for (std::size_t i = 0; i < r_.size(); ++i) {
        require(finite(r_[i]) && finite(v_[i]), "tabulated values must be finite");
        require(r_[i] >= 0.0, "tabulated radii must be non-negative");
        if (i) require(r_[i] > r_[i - 1], "tabulated radii must be strictly increasing");
    }
    // natural spline second derivatives
    const std::size_t n = r_.size();
    m_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = r_[i] - r_[i - 1], h1 = r_[i + 1] - r_[i];
            const double diag = 2.0 * (h0 + h1);
            const double rhs = 6.0 * ((v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0);
            const double denom = diag - h0 * c[i - 1];
            c[i] = h1 / denom;
            d[i] = (rhs - h0 * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }
}

double Tabulated::operator()(double x) const {
    if (r_.empty() || x < r_.front() || x > r_.back()) return 0.0;
    auto it = std::upper_bound(r_.begin(), r_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - r_.begin());
    i = std::clamp<std::size_t>(i, 1, r_.size() - 1);
    const double h = r_[i] - r_[i - 1];
    const double a = (r_[i] - x) / h, b = (x - r_[i - 1]) / h;
    return a * v_[i - 1] + b * v_[i] + ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * h * h / 6.0;
}

Potential::Potential(Shape shape, double coupling) : shape_(std::move(shape)), g_(coupling) {
    require(finite(g_), "coupling must be finite");
    std::visit([](const auto& x) { validate(x); }, shape_);
}

double Potential::value(double r) const {
    return g_ * std::visit([r](const auto& x) { return regular(x, r); }, shape_);
}

double Potential::magnitude(double r) const {
    return std::fabs(std::visit([r](const auto& x) { return regular(x, r); }, shape_));
}

double Potential::evaluate(double r) const {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("evaluate: r must be positive and finite");
    for (const auto& s : shells())
        if (std::fabs(r - s.radius) <= 4.0 * std::numeric_limits<double>::epsilon() * s.radius)
            throw DistributionalError("potential is distributional at r = " + std::to_string(r) +
                                      " (delta shell); it enters only through jump conditions");
    return value(r);
}

std::vector<Shell> Potential::shells() const {
    std::vector<Shell> out;
    std::visit([&](const auto& x) { shells_of(x, out); }, shape_);
    for (auto& s : out) s.strength *= g_;
    return out;
}

std::vector<double> Potential::breakpoints() const {
    std::vector<double> out;
    std::visit([&](const auto& x) { breaks_of(x, out); }, shape_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double Potential::structure_radius() const {
    const auto b = breakpoints();
    return b.empty() ? 0.0 : b.back();
}

double Potential::first_scale() const {
    const double s = std::visit([](const auto& x) { return scale_of(x); }, shape_);
    return std::isfinite(s) ? s : 1.0;
}

double Potential::negligible_radius(double eps) const {
    if (g_ == 0.0) return 0.0;
    return std::visit([&](const auto& x) { return negligible_of(x, eps / std::fabs(g_)); }, shape_);
}

double Potential::variation_length(double r) const {
    return std::visit([r](const auto& x) { return varlen_of(x, r); }, shape_);
}

TailKind Potential::tail_kind() const {
    return std::visit(overloaded{
                          [](const Exponential&) { return TailKind::exponential; },
                          [](const PowerTail& p) {
                              if (p.strength != 0.0) return TailKind::power;
                              return std::holds_alternative<Exponential>(p.inner) ? TailKind::exponential
                                                                                 : TailKind::none;
                          },
                          [](const LogCorrectedTail&) { return TailKind::log_corrected; },
                          [](const OscillatingGap&) { return TailKind::oscillating; },
                          [](const auto&) { return TailKind::none; },
                      },
                      shape_);
}

std::optional<double> Potential::tail_exponent() const {
    if (const auto* p = std::get_if<PowerTail>(&shape_); p && p->strength != 0.0) return p->exponent;
    return std::nullopt;
}

double Potential::tail_strength() const {
    if (const auto* p = std::get_if<PowerTail>(&shape_)) return g_ * p->strength;
    return 0.0;
}

std::optional<double> Potential::tail_integral(double r0, int p, int m) const {
    if (g_ == 0.0) return 0.0;
    auto t = std::visit([&](const auto& x) { return tail_of(x, r0, p, m); }, shape_);
    if (!t) return std::nullopt;
    return g_ * *t;
}

bool Potential::is_zero() const {
    return g_ == 0.0 || std::visit([](const auto& x) { return zero_of(x); }, shape_);
}

std::string kind_name(const Shape& s) {
    return std::visit(overloaded{
                          [](const Zero&) { return std::string("zero"); },
                          [](const Exponential&) { return std::string("exponential"); },
                          [](const Disc&) { return std::string("disc"); },
                          [](const PowerTail&) { return std::string("power_tail"); },
                          [](const DeltaShells&) { return std::string("delta_shells"); },
                          [](const LogCorrectedTail&) { return std::string("log_corrected_tail"); },
                          [](const OscillatingGap&) { return std::string("oscillating_gap"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                      },
                      s);
}

}  // namespace lowk
