#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lowk/conditions.hpp"
#include "lowk/potential.hpp"

namespace lowk {

/// Argument of the squared logarithm in the 2D anomalous law.
enum class LogArgument { half_ka, ka };

/// residual(k) ~ coefficient * k^exponent * ln^log_power(...)
struct Anomaly {
    double exponent = 0.0;
    double coefficient = 0.0;
    double log_power = 0.0;
};

enum class AnomalyKind { power_log_2d, power_3d };

struct AnomalyModel {
    AnomalyKind kind = AnomalyKind::power_log_2d;
    double log_power = 2.0;
    double a = 1.0;  // scattering length inside the logarithm
    LogArgument log_argument = LogArgument::half_ka;
    std::optional<double> exponent;  // when set, the coefficient is fitted at this exponent
};

struct AnomalyFit {
    Anomaly anomaly;
    double fit_quality = 0.0;  // rms of the log-space residual
};

struct EffectiveRangeOptions {
    LogArgument log_argument = LogArgument::half_ka;
    int anomaly_points = 12;
    double anomaly_ka_min = 1e-5;  // the fit grid spans [ka_min, ka_max] / a
    double anomaly_ka_max = 1e-3;
};

struct EffectiveRangeReport {
    int dimension = 2;
    bool convergent = false;
    ConditionRecord condition;
    double scattering_length = 0.0;
    /// 3D: r0. 2D: Int (v0^2 - u0^2) dr.
    std::optional<double> value;
    /// 2D: coefficient of k^2 in cot delta - (2/pi)[ln(ka/2) + gamma], i.e. (2/pi) value.
    std::optional<double> k2_coefficient;
    std::optional<Anomaly> anomaly;
    double fit_quality = 0.0;
    std::string note;  // set when a divergent case admits no power-law fit
};

EffectiveRangeReport effective_range(const Potential& v, int dimension, const EffectiveRangeOptions& opt = {});

/// 2D: cot delta - (2/pi)[ln(ka/2) + gamma].  3D: k cot delta + 1/a.
std::vector<std::pair<double, double>> low_energy_residuals(const Potential& v, int dimension,
                                                            const std::vector<double>& k_list);

/// Leading anomalous term for V = g r^-nu beyond the core, 2 < nu < 4.
double anomalous_residual_2d(double g, double nu, double a, double k, LogArgument arg = LogArgument::half_ka);

AnomalyFit fit_anomaly(const std::vector<std::pair<double, double>>& residuals, const AnomalyModel& model);

/// Both sides of the exact 2D relation
/// cot delta - (2/pi)[ln(ka/2) + gamma] = (2/pi) k^2 Int (v v0 - u u0) dr.
std::pair<double, double> exact_relation_2d(const Potential& v, double k);

}  // namespace lowk
