#pragma once

#include <vector>

#include "lowk/potential.hpp"
#include "lowk/radial_solver.hpp"

namespace lowk {

struct PhaseFunction {
    double k = 0.0;
    std::vector<double> grid;        // starts at r = 0
    std::vector<double> delta_of_r;  // right limits at shells
    bool converged_tail = false;
    double tail_bound = 0.0;         // bound on the phase still to come beyond grid.back()
};

struct VariablePhaseOptions {
    double rtol = 1e-12;
    double atol = 1e-15;
    double tail_tol = 1e-10;
    double r_max_cap = 1e8;
    double max_kr = 2e5;  // step budget: the phase oscillates k r / pi times
    double max_phase_step = 0.5;  // bound on 2 k r * (step in ln r)
};

PhaseFunction phase_function(const Potential& v, double k, int dimension, const VariablePhaseOptions& opt = {});

PhaseShiftResult phase_shift_variable_phase(const Potential& v, double k, int dimension,
                                            const VariablePhaseOptions& opt = {});

/// Upper bound on |delta(k, inf) - delta(k, r)| from the remaining potential, +inf if unknown.
double phase_tail_bound(const Potential& v, double k, int dimension, double r);

/// Phase after crossing a shell of coupled strength s at radius r, on the branch the jump selects.
double shell_phase_jump(double delta, double s, double r, double k, int dimension);

}  // namespace lowk
