#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lowk/potential.hpp"
#include "lowk/radial_solver.hpp"

namespace lowk {

inline constexpr const char* version_string = "lowk 1.0";

struct SweepSpec {
    Potential potential;
    int dimension = 2;
    double k_min = 1e-3;
    double k_max = 5.0;
    int count = 50;
    bool log_spacing = true;
    std::vector<Method> methods{Method::matching, Method::variable_phase, Method::born};
    std::string label;  // free text for the header
};

struct SweepRow {
    double k = 0.0;
    std::optional<double> delta_matching;
    std::optional<double> delta_variable_phase;
    std::optional<double> delta_born;
    double err_estimate = 0.0;
    int branch_n = 0;  // delta_variable_phase - delta_matching in units of pi
    std::string error;
    std::string warning;
};

std::vector<double> k_grid(const SweepSpec& spec);

/// Rows in k order; threads = 0 uses the hardware concurrency.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

struct ReportEntry {
    std::string key;
    std::string value;
};

struct Report {
    std::vector<ReportEntry> entries;
    bool indeterminate = false;
    bool numeric_failure = false;
};

Report make_report(const Potential& v, int dimension);

void write_report(std::ostream& out, const Report& r);

struct Preset {
    std::string file_stem;
    SweepSpec spec;
};

/// fig1: V = +g e^-r, g in {0.5, 1, 2}; fig2: V = -g e^-r, g in {0.5, 1, 2, 3, 6}.
std::vector<Preset> preset(const std::string& name);

}  // namespace lowk
