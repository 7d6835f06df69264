#include "steerdist/sweep.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "steerdist/distillation.hpp"
#include "steerdist/errors.hpp"
#include "steerdist/metrics.hpp"
#include "steerdist/protocol_sim.hpp"
#include "steerdist/states.hpp"

namespace steerdist {

FilterChoice parse_filter(std::string_view text) {
    if (text == "none") {
        return {FilterKind::None, 1.0};
    }
    if (text == "optimal") {
        return {FilterKind::Optimal, 1.0};
    }
    if (text == "asymptotic") {
        return {FilterKind::Asymptotic, 1.0};
    }
    constexpr std::string_view prefix = "fixed:";
    if (text.starts_with(prefix)) {
        const auto num = text.substr(prefix.size());
        double kappa = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), kappa);
        if (ec != std::errc() || ptr != num.data() + num.size()) {
            throw Error(ErrorCode::Parse, "bad kappa in '" + std::string(text) + "'");
        }
        if (!(kappa >= 0.0 && kappa <= 1.0)) {
            throw Error(ErrorCode::KappaOutOfRange, std::string(text));
        }
        return {FilterKind::Fixed, kappa};
    }
    throw Error(ErrorCode::Parse, "unknown filter '" + std::string(text) + "'");
}

std::string filter_name(FilterKind kind) {
    switch (kind) {
        case FilterKind::None: return "none";
        case FilterKind::Optimal: return "optimal";
        case FilterKind::Asymptotic: return "asymptotic";
        case FilterKind::Fixed: return "fixed";
    }
    return "?";
}

ScenarioSelection parse_scenario_selection(std::string_view text) {
    if (text == "1sdi") {
        return ScenarioSelection::OneSided;
    }
    if (text == "2sdi") {
        return ScenarioSelection::TwoSided;
    }
    if (text == "both") {
        return ScenarioSelection::Both;
    }
    throw Error(ErrorCode::Parse, "unknown scenario '" + std::string(text) + "'");
}

double resolve_kappa(double theta, int n_copies, const FilterChoice& filter, Scenario scenario) {
    switch (filter.kind) {
        case FilterKind::None: return 1.0;
        case FilterKind::Asymptotic: return asymptotic_kappa(theta);
        case FilterKind::Fixed: return filter.fixed_kappa;
        case FilterKind::Optimal: return optimize_kappa(theta, n_copies, scenario).kappa_star;
    }
    return 1.0;
}

SweepRow evaluate_row(double theta, int n_copies, FilterKind filter, double kappa,
                      ScenarioSelection selection) {
    SweepRow row;
    row.theta = theta;
    row.n_copies = n_copies;
    row.filter = filter;
    row.kappa = kappa;
    row.p_succ_total = success_probability(theta, kappa, n_copies);
    auto fill = [&](Scenario s, std::optional<double>& f, std::optional<double>& w) {
        const auto dist = distilled_assemblage({theta, n_copies, kappa, s});
        f = assemblage_fidelity(dist, ghz_assemblage(s));
        w = witness(dist).value;
    };
    if (selection != ScenarioSelection::TwoSided) {
        fill(Scenario::OneSided, row.f_1sdi, row.s_1sdi);
    }
    if (selection != ScenarioSelection::OneSided) {
        fill(Scenario::TwoSided, row.f_2sdi, row.s_2sdi);
    }
    return row;
}

SweepRow compute_row(double theta, int n_copies, const FilterChoice& filter,
                     ScenarioSelection selection) {
    const Scenario primary =
        selection == ScenarioSelection::TwoSided ? Scenario::TwoSided : Scenario::OneSided;
    const double kappa = resolve_kappa(theta, n_copies, filter, primary);
    return evaluate_row(theta, n_copies, filter.kind, kappa, selection);
}

std::vector<SweepRow> run_sweep(double theta_min, double theta_max, int steps, int n_copies,
                                const FilterChoice& filter, ScenarioSelection selection,
                                int threads) {
    checked_theta(theta_min);
    checked_theta(theta_max);
    if (!(theta_min < theta_max) || steps < 2) {
        throw Error(ErrorCode::ThetaOutOfRange, "need theta_min < theta_max and steps >= 2");
    }
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) {
        grid[i] = i == steps - 1 ? theta_max
                                 : theta_min + (theta_max - theta_min) * i / (steps - 1);
    }
    std::vector<SweepRow> rows(steps);
    threads = std::clamp(threads, 1, steps);
    if (threads == 1) {
        for (int i = 0; i < steps; ++i) {
            rows[i] = compute_row(grid[i], n_copies, filter, selection);
        }
        return rows;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        for (int w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (int i = w; i < steps; i += threads) {
                        rows[i] = compute_row(grid[i], n_copies, filter, selection);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

std::string format_number(double value) {
    if (value == 0.0) {
        value = 0.0;  // drop the sign of -0
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << format_number(r.theta) << ',' << r.n_copies << ',' << filter_name(r.filter) << ','
            << format_number(r.kappa) << ',' << format_number(r.p_succ_total) << ','
            << opt(r.f_1sdi) << ',' << opt(r.f_2sdi) << ',' << opt(r.s_1sdi) << ','
            << opt(r.s_2sdi) << '\n';
    }
}

nlohmann::json to_json(const SweepRow& row) {
    nlohmann::json j{{"theta", row.theta},          {"n", row.n_copies},
                     {"filter", filter_name(row.filter)}, {"kappa", row.kappa},
                     {"p_succ", row.p_succ_total}};
    auto put = [&](const char* key, const std::optional<double>& v) {
        j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    put("f_1sdi", row.f_1sdi);
    put("f_2sdi", row.f_2sdi);
    put("s_1sdi", row.s_1sdi);
    put("s_2sdi", row.s_2sdi);
    return j;
}

double find_threshold(const FilterChoice& filter, int n_copies, Scenario scenario) {
    auto witness_at = [&](double theta) {
        const double kappa = resolve_kappa(theta, n_copies, filter, scenario);
        return witness(distilled_assemblage({theta, n_copies, kappa, scenario})).value;
    };
    double lo = kThresholdLow;
    double hi = std::numbers::pi / 4.0;
    double w_lo = witness_at(lo);
    const double w_hi = witness_at(hi);
    if ((w_lo > 0.0) == (w_hi > 0.0)) {
        throw Error(ErrorCode::NoSignChange, "witness has the same sign on [0.01, pi/4]");
    }
    while (hi - lo > kThresholdTol) {
        const double mid = 0.5 * (lo + hi);
        const double w_mid = witness_at(mid);
        if ((w_mid > 0.0) == (w_lo > 0.0)) {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace steerdist
