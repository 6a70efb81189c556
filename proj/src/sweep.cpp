#include "lowk/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "lowk/conditions.hpp"
#include "lowk/effective_range.hpp"
#include "lowk/errors.hpp"
#include "lowk/potential_io.hpp"
#include "lowk/specfun.hpp"
#include "lowk/variable_phase.hpp"
#include "lowk/zero_energy.hpp"

namespace lowk {

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : "nan"; }

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

SweepRow sweep_row(const SweepSpec& spec, double k) {
    SweepRow row;
    row.k = k;
    std::vector<std::string> errors;
    auto attempt = [&](Method m, auto&& f) {
        if (std::find(spec.methods.begin(), spec.methods.end(), m) == spec.methods.end()) return;
        try {
            f();
        } catch (const std::exception& e) {
            errors.push_back(to_string(m) + ": " + e.what());
        }
    };
    attempt(Method::matching, [&] {
        const auto r = phase_shift_by_matching(spec.potential, k, spec.dimension);
        row.delta_matching = r.delta;
        row.err_estimate = std::max(row.err_estimate, r.err_estimate);
    });
    attempt(Method::variable_phase, [&] {
        const auto r = phase_shift_variable_phase(spec.potential, k, spec.dimension);
        row.delta_variable_phase = r.delta;
        row.err_estimate = std::max(row.err_estimate, r.err_estimate);
        if (!r.warning.empty()) row.warning = one_line(r.warning);
    });
    attempt(Method::born, [&] { row.delta_born = born_phase_shift(spec.potential, k, spec.dimension).delta; });
    if (row.delta_matching && row.delta_variable_phase)
        row.branch_n = static_cast<int>(std::lround((*row.delta_variable_phase - *row.delta_matching) / pi));
    for (const auto& e : errors) row.error += (row.error.empty() ? "" : " | ") + one_line(e);
    return row;
}

}  // namespace

std::vector<double> k_grid(const SweepSpec& spec) {
    if (!(spec.k_min > 0) || !(spec.k_max > spec.k_min)) throw PreconditionError("need 0 < kmin < kmax");
    if (spec.count < 2) throw PreconditionError("need at least two k points");
    std::vector<double> ks(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        const double f = static_cast<double>(i) / (spec.count - 1);
        ks[i] = spec.log_spacing ? spec.k_min * std::pow(spec.k_max / spec.k_min, f)
                                 : spec.k_min + f * (spec.k_max - spec.k_min);
    }
    ks.back() = spec.k_max;
    return ks;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
    if (spec.dimension != 2 && spec.dimension != 3) throw PreconditionError("dimension must be 2 or 3");
    const auto ks = k_grid(spec);
    std::vector<SweepRow> rows(ks.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(ks.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < ks.size();) rows[i] = sweep_row(spec, ks[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    out << "# " << version_string << " phase-shift sweep\n";
    if (!spec.label.empty()) out << "# " << spec.label << "\n";
    out << "# dimension = " << spec.dimension << "\n";
    out << "# k grid = " << num(spec.k_min) << " .. " << num(spec.k_max) << ", " << spec.count << " points, "
        << (spec.log_spacing ? "log" : "linear") << "\n";
    std::istringstream pot(write_potential(spec.potential));
    for (std::string line; std::getline(pot, line);)
        if (!line.empty() && line[0] != '#') out << "# potential: " << line << "\n";
    out << "k,delta_matching,delta_variable_phase,delta_born,err_estimate,branch_n,status\n";
    for (const auto& r : rows) {
        out << num(r.k) << ',' << opt_num(r.delta_matching) << ',' << opt_num(r.delta_variable_phase) << ','
            << opt_num(r.delta_born) << ',' << num(r.err_estimate) << ',' << r.branch_n << ','
            << (!r.error.empty() ? "error: " + r.error : !r.warning.empty() ? "warning: " + r.warning : "ok") << "\n";
    }
}

Report make_report(const Potential& v, int dimension) {
    if (dimension != 2 && dimension != 3) throw PreconditionError("dimension must be 2 or 3");
    Report rep;
    auto add = [&](std::string k, std::string val) { rep.entries.push_back({std::move(k), std::move(val)}); };
    auto fail = [&](const std::string& step, const std::exception& e) {
        add(step + ".error", one_line(e.what()));
        if (dynamic_cast<const IndeterminateCondition*>(&e))
            rep.indeterminate = true;
        else
            rep.numeric_failure = true;
    };
    add("kind", kind_name(v.shape()));
    add("dimension", std::to_string(dimension));
    add("coupling", num(v.coupling()));

    std::optional<double> a_hint;
    try {
        const auto z = zero_energy(v, dimension);
        const auto& sl = z.scattering_length;
        if (sl.zero_energy_resonance) {
            add("scattering_length", "zero_energy_resonance");
        } else {
            add("scattering_length", num(*sl.a));
            if (dimension == 2) add("ln_a", num(sl.ln_a));
            if (dimension == 2 || *sl.a > 0) a_hint = *sl.a;
        }
        if (dimension == 2) {
            add("X1", num(z.X1));
            add("X2", num(z.X2));
        }
        add("B_coefficient", num(z.B_coefficient));
        add("bound_state_count", std::to_string(z.bound_state_count));
    } catch (const std::exception& e) {
        fail("zero_energy", e);
    }

    try {
        const auto cond = check_conditions(v, dimension, dimension == 2 ? a_hint : std::nullopt);
        for (const auto& rec : cond.records) {
            add("condition." + rec.name, to_string(rec.verdict));
            if (rec.value) add("condition." + rec.name + ".value", num(*rec.value));
            if (rec.verdict == Verdict::indeterminate) rep.indeterminate = true;
        }
    } catch (const std::exception& e) {
        fail("conditions", e);
    }

    try {
        const auto er = effective_range(v, dimension);
        add("effective_range", er.convergent ? "convergent" : "divergent");
        if (er.value) add(dimension == 2 ? "effective_range.integral" : "effective_range.r0", num(*er.value));
        if (er.k2_coefficient) add("effective_range.k2_coefficient", num(*er.k2_coefficient));
        if (er.anomaly) {
            add("anomaly.exponent", num(er.anomaly->exponent));
            add("anomaly.coefficient", num(er.anomaly->coefficient));
            add("anomaly.log_power", num(er.anomaly->log_power));
            add("anomaly.fit_quality", num(er.fit_quality));
        }
        if (!er.note.empty()) add("effective_range.note", one_line(er.note));
    } catch (const std::exception& e) {
        fail("effective_range", e);
    }
    return rep;
}

void write_report(std::ostream& out, const Report& r) {
    out << "# " << version_string << " report\n";
    std::size_t width = 0;
    for (const auto& e : r.entries) width = std::max(width, e.key.size());
    for (const auto& e : r.entries) out << e.key << std::string(width - e.key.size(), ' ') << " = " << e.value << "\n";
    out << "status" << std::string(width > 6 ? width - 6 : 0, ' ') << " = "
        << (r.numeric_failure ? "numeric_failure" : r.indeterminate ? "indeterminate" : "ok") << "\n";
}

std::vector<Preset> preset(const std::string& name) {
    std::vector<double> gs;
    double sign;
    if (name == "fig1") {
        gs = {0.5, 1, 2};
        sign = 1;
    } else if (name == "fig2") {
        gs = {0.5, 1, 2, 3, 6};
        sign = -1;
    } else {
        throw PreconditionError("unknown preset '" + name + "' (fig1 or fig2)");
    }
    std::vector<Preset> out;
    for (double g : gs) {
        Preset p;
        p.file_stem = name + "_g" + num(g);
        p.spec.potential = Potential::exponential(sign, 1, g);
        p.spec.dimension = 2;
        p.spec.k_min = 1e-4;
        p.spec.k_max = 5;
        p.spec.count = 80;
        p.spec.label = "preset " + name + ": V = " + (sign > 0 ? "+" : "-") + num(g) + " exp(-r)";
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace lowk
