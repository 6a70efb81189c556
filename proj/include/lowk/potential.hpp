#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lowk {

struct Zero {
    bool operator==(const Zero&) const = default;
};

/// s exp(-beta r)
struct Exponential {
    double strength = 1.0;
    double rate = 1.0;
    bool operator==(const Exponential&) const = default;
};

/// s for r <= R, 0 beyond
struct Disc {
    double strength = 1.0;
    double radius = 1.0;
    bool operator==(const Disc&) const = default;
};

/// lambda delta(r - R)
struct Shell {
    double strength = 0.0;
    double radius = 1.0;
    bool operator==(const Shell&) const = default;
};

struct DeltaShells {
    std::vector<Shell> shells;
    bool operator==(const DeltaShells&) const = default;
};

/// s Theta(r - R) / (r^5 ln^alpha(r + R))
struct LogCorrectedTail {
    double strength = 1.0;
    double onset = 1.0;
    double log_power = 2.0;
    bool operator==(const LogCorrectedTail&) const = default;
};

/// s exp(-r^p sin^2 r); equals s at every r = n pi
struct OscillatingGap {
    double strength = 1.0;
    double power = 12.0;
    bool operator==(const OscillatingGap&) const = default;
};

/// Natural cubic spline through (r_i, v_i), zero outside [r_0, r_n].
class Tabulated {
public:
    Tabulated() = default;
    Tabulated(std::vector<double> r, std::vector<double> v);
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& v() const { return v_; }
    double operator()(double x) const;
    bool operator==(const Tabulated& o) const { return r_ == o.r_ && v_ == o.v_; }

private:
    std::vector<double> r_, v_, m_;
};

using InnerShape = std::variant<Zero, Exponential, Disc, DeltaShells, Tabulated>;

/// inner(r) + C r^(-nu) Theta(r - R)
struct PowerTail {
    InnerShape inner = Zero{};
    double exponent = 3.0;
    double onset = 1.0;
    double strength = 1.0;
    bool operator==(const PowerTail&) const = default;
};

using Shape = std::variant<Zero, Exponential, Disc, PowerTail, DeltaShells, LogCorrectedTail,
                           OscillatingGap, Tabulated>;

enum class TailKind { none, exponential, power, log_corrected, oscillating };

/// g V(r). Radii and r in the length unit L, V in 1/L^2 (2m/hbar^2 = 1).
class Potential {
public:
    Potential() = default;
    explicit Potential(Shape shape, double coupling = 1.0);

    static Potential zero() { return Potential(); }
    static Potential exponential(double strength, double rate, double g = 1.0) {
        return Potential(Exponential{strength, rate}, g);
    }
    static Potential disc(double strength, double radius, double g = 1.0) {
        return Potential(Disc{strength, radius}, g);
    }
    static Potential power_tail(InnerShape inner, double nu, double onset, double strength, double g = 1.0) {
        return Potential(PowerTail{std::move(inner), nu, onset, strength}, g);
    }
    static Potential delta_shells(std::vector<Shell> shells, double g = 1.0) {
        return Potential(DeltaShells{std::move(shells)}, g);
    }
    static Potential log_corrected_tail(double onset, double alpha, double strength = 1.0, double g = 1.0) {
        return Potential(LogCorrectedTail{strength, onset, alpha}, g);
    }
    static Potential oscillating_gap(double strength = 1.0, double power = 12.0, double g = 1.0) {
        return Potential(OscillatingGap{strength, power}, g);
    }
    static Potential tabulated(std::vector<double> r, std::vector<double> v, double g = 1.0) {
        return Potential(Tabulated(std::move(r), std::move(v)), g);
    }

    const Shape& shape() const { return shape_; }
    double coupling() const { return g_; }
    Potential with_coupling(double g) const { return Potential(shape_, g); }

    /// g V(r); throws DistributionalError at a shell radius.
    double evaluate(double r) const;
    /// g V(r) without the delta shells; never throws for r > 0.
    double value(double r) const;
    /// |V(r)| without the coupling and the shells.
    double magnitude(double r) const;

    /// Shells (radius ascending) with coupled strengths g lambda.
    std::vector<Shell> shells() const;
    /// Radii where V or its derivatives jump, ascending.
    std::vector<double> breakpoints() const;
    /// Largest breakpoint, 0 when there is none.
    double structure_radius() const;
    /// Smallest natural length of the potential (used for the start radius).
    double first_scale() const;
    /// Smallest R such that |g V(r)| <= eps for all r >= R (shells excluded); +inf if none.
    double negligible_radius(double eps) const;
    /// Length over which V changes appreciably near r.
    double variation_length(double r) const;

    TailKind tail_kind() const;
    /// Exponent of the power-law tail, if any.
    std::optional<double> tail_exponent() const;
    /// Coupled strength g C of the power-law tail.
    double tail_strength() const;

    /// Int_{r0}^inf g V(r) r^p ln^m(r) dr for r0 at or beyond structure_radius(), m <= 2.
    /// Empty when it diverges or cannot be computed.
    std::optional<double> tail_integral(double r0, int p, int m) const;

    bool is_zero() const;
    bool operator==(const Potential&) const = default;

private:
    Shape shape_ = Zero{};
    double g_ = 1.0;
};

std::string kind_name(const Shape& s);

}  // namespace lowk
