#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lowk/potential.hpp"

namespace lowk {

enum class Verdict { convergent, divergent, indeterminate };

std::string to_string(Verdict v);

struct ConditionRecord {
    std::string name;
    std::string integral;
    Verdict verdict = Verdict::indeterminate;
    std::optional<Verdict> analytic;
    Verdict numeric = Verdict::indeterminate;
    std::optional<double> value;      // finite when convergent
    std::optional<double> secondary;  // Int r^2|V| for the 3D scattering-length pair
    double cutoff = 0.0;
    std::vector<std::pair<double, double>> history;  // (cutoff, partial integral)
    std::string note;
};

struct ConditionReport {
    int dimension = 2;
    std::optional<double> a_hint;
    double growth_factor = 1.5;
    double cutoff = 0.0;
    std::vector<ConditionRecord> records;

    const ConditionRecord& get(std::string_view name) const;
    /// The two conditions that matter in this report's dimension.
    const ConditionRecord& scattering_length() const;
    const ConditionRecord& effective_range() const;
};

struct ConditionOptions {
    double growth_factor = 1.5;   // divergence when I(2R)/I(R) >= this, twice in a row
    double rel_change = 1e-3;     // convergence when |I(2R)-I(R)| <= rel_change |I(2R)|, twice in a row
    int max_doublings = 40;
    double max_cutoff = 1e12;
};

inline constexpr const char* cond_2d_scattering_length = "cond_2d_scattering_length";
inline constexpr const char* cond_2d_effective_range = "cond_2d_effective_range";
inline constexpr const char* cond_3d_scattering_length = "cond_3d_scattering_length";
inline constexpr const char* cond_3d_effective_range = "cond_3d_effective_range";

ConditionReport check_conditions(const Potential& v, int dimension, std::optional<double> a_hint = std::nullopt,
                                 const ConditionOptions& opt = {});

}  // namespace lowk
