#pragma once

#include <string>
#include <vector>

#include "lowk/potential.hpp"

namespace lowk {

enum class Normalization { regular_origin, asymptotic_free };
enum class Method { matching, variable_phase, born };

std::string to_string(Method m);

struct SolverOptions {
    double rtol = 1e-12;
    double atol = 1e-20;
    // > 0 switches to classical RK4 with this many equal steps in ln r
    int fixed_steps = 0;
    // upper bound on (local wave number) * (step in ln r), for accurate dense output
    double dense_step = 0.1;
    double match_tol = 1e-8;        // |gV(r_m)| <= match_tol k^2
    double power_match_tol = 1e-13; // |gV(r_m)| <= 2 k^2 power_match_tol for slow tails
    double r_max_cap = 1e9;
};

/// Regular S-wave solution, stored through phi = u / r^{(d-1)/2} and w = d phi / d ln r.
struct RadialSolution {
    struct Node {
        double t;        // ln r
        double phi;
        double w_left, w_right;    // one-sided limits differ only at shells
        double wt_left, wt_right;  // d w / d ln r
    };

    double k = 0.0;
    int dimension = 2;
    std::vector<double> grid;
    std::vector<double> u;
    std::vector<double> u_prime;  // right limit at shells
    Normalization normalization = Normalization::regular_origin;
    double match_radius = 0.0;

    std::vector<Node> nodes;
    double scale = 1.0;   // u = scale * r^{(d-1)/2} phi
    double q_start = 0.0; // k^2 - gV near the origin, for r below the first node

    double r_min() const { return grid.front(); }
    double r_max() const { return grid.back(); }

    double phi_at(double r) const;
    double w_at(double r) const;
    double u_at(double r) const;
    double u_prime_at(double r) const;

    /// phi and w at t = ln r inside node interval [i, i+1] (unscaled).
    void interpolate(std::size_t i, double t, double& phi, double& w) const;
    /// Fill grid, u and u_prime from the nodes.
    void finalize();

    /// Copy multiplied by c and retagged.
    RadialSolution scaled(double c, Normalization n) const;
};

struct PhaseShiftResult {
    double k = 0.0;
    double delta = 0.0;
    Method method = Method::matching;
    double err_estimate = 0.0;
    std::string warning;
};

/// r_min used by every solver for this potential.
double start_radius(const Potential& v);

RadialSolution regular_solution(const Potential& v, double k, int dimension, double r_max,
                                const SolverOptions& opt = {});

/// Same, with extra radii where the integration is split and a node is guaranteed.
RadialSolution regular_solution(const Potential& v, double k, int dimension, double r_max,
                                const std::vector<double>& extra_nodes, const SolverOptions& opt);

/// Radius beyond which the remaining potential is negligible for matching at momentum k.
double match_radius(const Potential& v, double k, const SolverOptions& opt = {});

/// delta mod pi in (-pi/2, pi/2] from the solution at radius r (no tail correction).
double matched_phase(const RadialSolution& s, double r);

PhaseShiftResult phase_shift_by_matching(const Potential& v, double k, int dimension,
                                         const SolverOptions& opt = {});

/// Reduce x into (-pi/2, pi/2].
double reduce_mod_pi(double x);

}  // namespace lowk
