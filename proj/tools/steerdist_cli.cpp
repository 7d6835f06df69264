// steerdist: sweeps, thresholds, kappa optimization and Monte Carlo runs of
// N-copy local-filtering distillation for GGHZ steering assemblages.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "steerdist/assemblage.hpp"
#include "steerdist/distillation.hpp"
#include "steerdist/errors.hpp"
#include "steerdist/io.hpp"
#include "steerdist/protocol_sim.hpp"
#include "steerdist/sweep.hpp"

namespace {

using namespace steerdist;

struct Options {
    double theta_min = 0.0;
    double theta_max = std::numbers::pi / 4.0;
    int steps = 101;
    int n_copies = 2;
    std::string filter = "optimal";
    std::string scenario = "both";
    std::string format = "csv";
    std::string out;
    std::optional<double> theta;
    std::optional<double> kappa;
    std::string assemblage;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    int threads = 1;
};

Scenario single_scenario(const std::string& text) {
    const auto sel = parse_scenario_selection(text);
    if (sel == ScenarioSelection::Both) {
        throw Error(ErrorCode::Parse, "this command needs --scenario 1sdi or 2sdi");
    }
    return sel == ScenarioSelection::OneSided ? Scenario::OneSided : Scenario::TwoSided;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const auto rows = run_sweep(o.theta_min, o.theta_max, o.steps, o.n_copies,
                                parse_filter(o.filter), parse_scenario_selection(o.scenario),
                                o.threads);
    if (o.format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : rows) {
            doc.push_back(to_json(r));
        }
        out << doc.dump(2) << '\n';
    } else {
        write_csv(out, rows);
    }
    return 0;
}

int cmd_threshold(const Options& o, std::ostream& out) {
    const auto scenario = single_scenario(o.scenario == "both" ? "1sdi" : o.scenario);
    const double root = find_threshold(parse_filter(o.filter), o.n_copies, scenario);
    nlohmann::json doc{{"theta_root", root},
                       {"filter", o.filter},
                       {"n", o.n_copies},
                       {"scenario", std::string(scenario_name(scenario))}};
    out << doc.dump(2) << '\n';
    return 0;
}

int cmd_optimize(const Options& o, std::ostream& out) {
    const auto scenario = single_scenario(o.scenario == "both" ? "1sdi" : o.scenario);
    nlohmann::json doc;
    if (!o.assemblage.empty()) {
        const Assemblage source = load_assemblage(o.assemblage);
        require_valid(source);
        const auto result =
            optimize_kappa(source, o.n_copies, ghz_assemblage(source.scenario()));
        doc = to_json(result);
        doc["source"] = o.assemblage;
        doc["scenario"] = std::string(scenario_name(source.scenario()));
    } else if (o.theta) {
        const auto result = optimize_kappa(*o.theta, o.n_copies, scenario);
        doc = to_json(result);
        doc["theta"] = *o.theta;
        doc["scenario"] = std::string(scenario_name(scenario));
        doc["asymptotic_kappa"] = asymptotic_kappa(*o.theta);
        if (o.n_copies == 2) {
            doc["closed_form_kappa"] = two_copy_optimal_kappa(*o.theta);
            doc["closed_form_fidelity"] = two_copy_optimal_fidelity(*o.theta);
        }
    } else {
        throw Error(ErrorCode::Parse, "optimize needs --theta or --assemblage");
    }
    doc["n"] = o.n_copies;
    out << doc.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    if (!o.theta) {
        throw Error(ErrorCode::Parse, "simulate needs --theta");
    }
    const auto scenario = single_scenario(o.scenario == "both" ? "1sdi" : o.scenario);
    double kappa = 1.0;
    if (o.kappa) {
        kappa = *o.kappa;
    } else {
        kappa = resolve_kappa(*o.theta, o.n_copies, parse_filter(o.filter), scenario);
    }
    SimConfig config{*o.theta, kappa, o.n_copies, o.trials, o.seed, o.threads, scenario};
    out << to_json(run_protocol(config)).dump(2) << '\n';
    return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
    if (o.assemblage.empty()) {
        throw Error(ErrorCode::Parse, "validate needs --assemblage");
    }
    const auto report = validate(load_assemblage(o.assemblage));
    out << to_json(report).dump(2) << '\n';
    if (!report.ok()) {
        std::cerr << report.to_string();
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"N-copy local-filtering distillation of tripartite steering assemblages"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", o.n_copies, "Number of copies N (>= 2)");
        sub->add_option("--scenario", o.scenario, "1sdi | 2sdi | both");
        sub->add_option("--out", o.out, "Write output to this file instead of stdout");
        sub->add_option("--threads", o.threads, "Worker threads");
    };

    auto* sweep = app.add_subcommand("sweep", "Theta sweep of fidelity and witness values (CSV)");
    add_common(sweep);
    sweep->add_option("--theta-min", o.theta_min, "Lower end of the theta grid");
    sweep->add_option("--theta-max", o.theta_max, "Upper end of the theta grid");
    sweep->add_option("--steps", o.steps, "Grid points (>= 2)");
    sweep->add_option("--filter", o.filter, "none | optimal | asymptotic | fixed:<kappa>");
    sweep->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    auto* threshold = app.add_subcommand("threshold", "Witness root in theta");
    add_common(threshold);
    threshold->add_option("--filter", o.filter, "none | optimal | asymptotic | fixed:<kappa>");

    auto* optimize = app.add_subcommand("optimize", "Maximize assemblage fidelity over kappa");
    add_common(optimize);
    optimize->add_option("--theta", o.theta, "GGHZ angle");
    optimize->add_option("--assemblage", o.assemblage, "Assemblage JSON file");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
    add_common(simulate);
    simulate->add_option("--theta", o.theta, "GGHZ angle");
    simulate->add_option("--kappa", o.kappa, "Filter parameter (overrides --filter)");
    simulate->add_option("--filter", o.filter, "none | optimal | asymptotic | fixed:<kappa>");
    simulate->add_option("--trials", o.trials, "Number of protocol runs");
    simulate->add_option("--seed", o.seed, "PRNG seed");

    auto* lint = app.add_subcommand("validate", "Check an assemblage JSON file");
    lint->add_option("--assemblage", o.assemblage, "Assemblage JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        std::ostringstream buffer;
        int status = 0;
        if (*sweep) {
            status = cmd_sweep(o, buffer);
        } else if (*threshold) {
            status = cmd_threshold(o, buffer);
        } else if (*optimize) {
            status = cmd_optimize(o, buffer);
        } else if (*simulate) {
            status = cmd_simulate(o, buffer);
        } else if (*lint) {
            status = cmd_validate(o, buffer);
        }
        if (o.out.empty()) {
            std::cout << buffer.str();
        } else {
            std::ofstream file(o.out);
            if (!file) {
                std::cerr << "error: cannot write " << o.out << '\n';
                return 2;
            }
            file << buffer.str();
        }
        return status;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
