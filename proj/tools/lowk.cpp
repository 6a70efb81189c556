#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lowk/errors.hpp"
#include "lowk/potential_io.hpp"
#include "lowk/sweep.hpp"

namespace {

enum Exit { ok = 0, usage = 1, numeric = 2, indeterminate = 3 };

int sweep_to(const lowk::SweepSpec& spec, const std::string& out_path, unsigned threads = 0) {
    const auto rows = lowk::run_sweep(spec, threads);
    bool failed = false;
    for (const auto& r : rows) failed |= !r.error.empty();
    if (out_path.empty() || out_path == "-") {
        lowk::write_csv(std::cout, spec, rows);
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "lowk: cannot write " << out_path << "\n";
            return usage;
        }
        lowk::write_csv(f, spec, rows);
    }
    if (failed) std::cerr << "lowk: some rows failed; see the status column\n";
    return failed ? numeric : ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-energy scattering in two and three dimensions"};
    app.set_version_flag("--version", lowk::version_string);
    app.require_subcommand(1);

    std::string potential_path, out_path;
    int dim = 2;

    lowk::SweepSpec spec;
    auto* sweep = app.add_subcommand("sweep", "phase shifts on a k grid, as CSV");
    sweep->add_option("--potential", potential_path, "potential file")->required();
    sweep->add_option("--dim", dim, "dimension")->check(CLI::IsMember({2, 3}));
    sweep->add_option("--kmin", spec.k_min, "smallest k")->capture_default_str();
    sweep->add_option("--kmax", spec.k_max, "largest k")->capture_default_str();
    sweep->add_option("--n", spec.count, "number of k points")->capture_default_str();
    bool linear = false;
    auto* log_flag = sweep->add_flag("--log", "log spacing (default)");
    sweep->add_flag("--linear", linear, "linear spacing")->excludes(log_flag);
    sweep->add_option("--out", out_path, "output file (default stdout)");
    unsigned threads = 0;
    sweep->add_option("--threads", threads, "worker threads (0: all cores)");

    auto* report = app.add_subcommand("report", "zero-energy quantities, conditions and effective range");
    report->add_option("--potential", potential_path, "potential file")->required();
    report->add_option("--dim", dim, "dimension")->check(CLI::IsMember({2, 3}));

    std::string preset_name, out_dir = ".";
    auto* pre = app.add_subcommand("preset", "figure sweeps for V = +-g exp(-r)");
    pre->add_option("name", preset_name, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
    pre->add_option("--out", out_dir, "output directory");

    auto* canon = app.add_subcommand("canon", "print the canonical form of a potential file");
    canon->add_option("--potential", potential_path, "potential file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    if (!potential_path.empty() && !std::filesystem::is_regular_file(potential_path)) {
        std::cerr << "lowk: no such file: " << potential_path << "\n";
        return usage;
    }
    try {
        if (*sweep) {
            spec.potential = lowk::read_potential_file(potential_path);
            spec.dimension = dim;
            spec.log_spacing = !linear;
            spec.label = "potential file: " + std::filesystem::path(potential_path).filename().string();
            lowk::k_grid(spec);
            return sweep_to(spec, out_path, threads);
        }
        if (*report) {
            const auto v = lowk::read_potential_file(potential_path);
            const auto rep = lowk::make_report(v, dim);
            lowk::write_report(std::cout, rep);
            return rep.numeric_failure ? numeric : rep.indeterminate ? indeterminate : ok;
        }
        if (*pre) {
            std::filesystem::create_directories(out_dir);
            int worst = ok;
            for (const auto& p : lowk::preset(preset_name)) {
                const auto path = (std::filesystem::path(out_dir) / (p.file_stem + ".csv")).string();
                const int code = sweep_to(p.spec, path);
                if (code == ok) std::cout << path << "\n";
                worst = std::max(worst, code);
            }
            return worst;
        }
        if (*canon) {
            std::cout << lowk::write_potential(lowk::read_potential_file(potential_path));
            return ok;
        }
    } catch (const lowk::ParseError& e) {
        std::cerr << potential_path << ": " << e.what() << "\n";
        return usage;
    } catch (const lowk::PreconditionError& e) {
        std::cerr << "lowk: " << e.what() << "\n";
        return usage;
    } catch (const lowk::IndeterminateCondition& e) {
        std::cerr << "lowk: " << e.what() << "\n";
        return indeterminate;
    } catch (const std::exception& e) {
        std::cerr << "lowk: " << e.what() << "\n";
        return numeric;
    }
    return usage;
}
