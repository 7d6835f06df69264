#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "steerdist/assemblage.hpp"

namespace steerdist {

enum class FilterKind { None, Optimal, Asymptotic, Fixed };

struct FilterChoice {
    FilterKind kind = FilterKind::None;
    double fixed_kappa = 1.0;  // used by Fixed only
};

/// "none" | "optimal" | "asymptotic" | "fixed:<kappa>". Throws Parse.
FilterChoice parse_filter(std::string_view text);
std::string filter_name(FilterKind kind);

enum class ScenarioSelection { OneSided, TwoSided, Both };

/// "1sdi" | "2sdi" | "both". Throws Parse.
ScenarioSelection parse_scenario_selection(std::string_view text);

/// kappa used for GGHZ(theta) under `filter`. Optimal runs the numeric
/// optimizer on the scenario's fidelity.
double resolve_kappa(double theta, int n_copies, const FilterChoice& filter, Scenario scenario);

struct SweepRow {
    double theta = 0.0;
    int n_copies = 2;
    FilterKind filter = FilterKind::None;
    double kappa = 1.0;
    double p_succ_total = 0.0;
    std::optional<double> f_1sdi;
    std::optional<double> f_2sdi;
    std::optional<double> s_1sdi;
    std::optional<double> s_2sdi;
};

/// Metrics of the distilled GGHZ(theta) assemblage at a given kappa.
SweepRow evaluate_row(double theta, int n_copies, FilterKind filter, double kappa,
                      ScenarioSelection selection);

SweepRow compute_row(double theta, int n_copies, const FilterChoice& filter,
                     ScenarioSelection selection);

/// `steps` evenly spaced points from theta_min to theta_max inclusive, in
/// grid order. Points are evaluated on up to `threads` workers.
std::vector<SweepRow> run_sweep(double theta_min, double theta_max, int steps, int n_copies,
                                const FilterChoice& filter, ScenarioSelection selection,
                                int threads = 1);

inline constexpr std::string_view kSweepHeader =
    "theta,n,filter,kappa,p_succ,f_1sdi,f_2sdi,s_1sdi,s_2sdi";

/// 9 significant digits, shortest form, locale independent.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
nlohmann::json to_json(const SweepRow& row);

/// Root of the witness on theta in [0.01, pi/4] by bisection to 1e-6.
/// Throws NoSignChange if the witness has the same sign at both ends.
double find_threshold(const FilterChoice& filter, int n_copies, Scenario scenario);

inline constexpr double kThresholdLow = 0.01;
inline constexpr double kThresholdTol = 1e-6;

}  // namespace steerdist
