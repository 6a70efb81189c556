#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lowk/potential.hpp"
#include "lowk/radial_solver.hpp"

namespace lowk {

struct ZeroEnergyOptions {
    int panel_nodes = 20;
    double max_panel_t = 0.25;
    double panel_tol = 1e-15;
    int max_iterations = 200;
    double resonance_threshold = 1e-12;
    double tail_tol = 1e-7;  // size of the first-order tail correction at the last radius
};

struct IterationDiagnostics {
    int panels = 0;
    int max_iterations = 0;
    double max_update = 0.0;  // last Picard update, weighted sup-norm
};

/// Asymptotic zero-energy form, corrected for the potential beyond the radius it was read at.
/// 2D: u0 / sqrt(r) -> A + B ln r.  3D: u0 -> B r + A.
struct AsymptoticForm {
    double A = 0.0;
    double B = 0.0;
};

struct ScatteringLength {
    std::optional<double> a;  // empty at a zero-energy resonance
    double ln_a = 0.0;
    bool zero_energy_resonance = false;
};

struct ZeroEnergyReport {
    int dimension = 2;
    RadialSolution u0;
    double X1 = 0.0;
    double X2 = 0.0;
    ScatteringLength scattering_length;
    double A_coefficient = 0.0;
    double B_coefficient = 0.0;
    int bound_state_count = 0;
    IterationDiagnostics iteration_diagnostics;
};

/// Outer radius of the zero-energy grid.
double zero_energy_radius(const Potential& v, int dimension, const ZeroEnergyOptions& opt = {});

/// u0 from the Volterra equation, iterated panel by panel.
RadialSolution zero_energy_solution(const Potential& v, int dimension, const ZeroEnergyOptions& opt = {},
                                    IterationDiagnostics* diag = nullptr);

/// u0 from the radial ODE at k = 0 on the same outer radius.
RadialSolution zero_energy_solution_ode(const Potential& v, int dimension, const SolverOptions& opt = {});

AsymptoticForm asymptotic_form(const Potential& v, const RadialSolution& u0, double r);

/// (X1, X2) by quadrature of sqrt(r) V u0 and sqrt(r) ln r V u0, V without the coupling.
std::pair<double, double> scattering_coefficients(const Potential& v, const RadialSolution& u0);
std::pair<double, double> scattering_coefficients(const Potential& v);

ScatteringLength scattering_length_2d(const Potential& v, const ZeroEnergyOptions& opt = {});
ScatteringLength scattering_length_2d(const Potential& v, const RadialSolution& u0, double threshold = 1e-12);
/// a read off the asymptotic zero over two windows near the end of the grid.
double scattering_length_2d_fit(const Potential& v, const RadialSolution& u0);

double scattering_length_3d(const Potential& v, const ZeroEnergyOptions& opt = {});
double scattering_length_3d(const Potential& v, const RadialSolution& u0);

int bound_state_count(const Potential& v, int dimension);
int bound_state_count(const Potential& v, const RadialSolution& u0);

/// Root of g -> X1(g) inside the bracket.
double critical_coupling(const Potential& v, double g_lo, double g_hi);

PhaseShiftResult born_phase_shift(const Potential& v, double k, int dimension = 2);

/// Small-g expansion of the 2D scattering length, truncated at O(g) in ln a.
double weak_coupling_scattering_length(const Potential& v, double g);

struct LowEnergyResidual {
    double k;
    double delta;
    double residual;  // cot delta - (2/pi)(ln(ka/2) + gamma)
};

std::vector<LowEnergyResidual> low_energy_limit_check(const Potential& v, const std::vector<double>& k_list);

ZeroEnergyReport zero_energy(const Potential& v, int dimension, const ZeroEnergyOptions& opt = {});

}  // namespace lowk
