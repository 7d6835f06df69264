#include "steerdist/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steerdist/errors.hpp"
#include "steerdist/metrics.hpp"
#include "steerdist/states.hpp"
#include "steerdist/tolerances.hpp"

namespace steerdist {

namespace {

double checked_kappa(double kappa) {
    if (!std::isfinite(kappa) || kappa < -tol::domain_slack || kappa > 1.0 + tol::domain_slack) {
        throw Error(ErrorCode::KappaOutOfRange, "kappa = " + std::to_string(kappa));
    }
    return std::clamp(kappa, 0.0, 1.0);
}

void check_copies(int n_copies) {
    if (n_copies < 2) {
        throw Error(ErrorCode::CopiesOutOfRange, "n_copies = " + std::to_string(n_copies));
    }
}

Matrix filter_on_charlie(const FilterOp& filter, Scenario scenario) {
    if (scenario == Scenario::OneSided) {
        return kron(Matrix::identity(2), filter.c0.matrix());
    }
    return filter.c0.matrix();
}

}  // namespace

FilterOp make_filter(double kappa) {
    kappa = checked_kappa(kappa);
    return FilterOp{kappa, HermitianMatrix::diagonal({kappa, 1.0}),
                    HermitianMatrix::diagonal({std::sqrt(1.0 - kappa * kappa), 0.0})};
}

FilterResult apply_filter(const Assemblage& asm_, const FilterOp& filter) {
    const Matrix op = filter_on_charlie(filter, asm_.scenario());
    const double p_succ = asm_.context_sum(0).congruence(op).trace();
    if (!(p_succ >= tol::min_success_probability)) {
        throw Error(ErrorCode::ZeroSuccessProbability, "p_succ = " + std::to_string(p_succ));
    }
    const double inv = 1.0 / p_succ;
    return FilterResult{p_succ, asm_.transformed([&](const HermitianMatrix& e) {
                            return inv * e.congruence(op);
                        })};
}

double n_copy_success_probability(double p_single, int n_copies) {
    check_copies(n_copies);
    if (p_single >= 1.0) {
        return 1.0;
    }
    // 1 - (1-p)^(n-1) without cancellation for small p or large n.
    return -std::expm1(static_cast<double>(n_copies - 1) * std::log1p(-p_single));
}

Assemblage distill(const Assemblage& input, double kappa, int n_copies) {
    check_copies(n_copies);
    const FilterOp filter = make_filter(kappa);
    const Matrix op = filter_on_charlie(filter, input.scenario());
    const double p_single = input.context_sum(0).congruence(op).trace();
    if (p_single < tol::min_success_probability) {
        return input;
    }
    const auto filtered = apply_filter(input, filter);
    return mix(n_copy_success_probability(filtered.p_succ, n_copies), filtered.filtered, input);
}

void DistillationConfig::check() const {
    checked_theta(theta);
    checked_kappa(kappa);
    check_copies(n_copies);
}

Assemblage distilled_assemblage(const DistillationConfig& config) {
    config.check();
    return distill(gghz_assemblage(config.theta, config.scenario), config.kappa, config.n_copies);
}

double two_copy_optimal_kappa(double theta) {
    const double c = std::cos(checked_theta(theta));
    return 1.0 / (2.0 * c * c);
}

double asymptotic_kappa(double theta) { return std::tan(checked_theta(theta)); }

double two_copy_fidelity_closed_form(double theta, double kappa) {
    theta = checked_theta(theta);
    kappa = checked_kappa(kappa);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return std::sqrt(0.5 + c * s * (c * c - kappa * kappa * c * c + kappa));
}

double two_copy_optimal_fidelity(double theta) {
    theta = checked_theta(theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return std::sqrt(0.5 + c * s * (c * c + 1.0 / (4.0 * c * c)));
}

double kappa_prime_ncopy_fidelity(double theta, int n_copies) {
    theta = checked_theta(theta);
    check_copies(n_copies);
    return std::sqrt(1.0 - 0.5 * (1.0 - std::sin(2.0 * theta)) *
                               std::pow(std::cos(2.0 * theta), n_copies - 1));
}

// ---------------------------------------------------------------------------
// Optimizer

OptimizationResult optimize_kappa(const Assemblage& source, int n_copies, const Assemblage& target,
                                  const OptimizerOptions& options) {
    check_copies(n_copies);
    if (source.scenario() != target.scenario()) {
        throw Error(ErrorCode::ScenarioMismatch, "source and target scenarios differ");
    }
    // Scan values this close count as a tie (flat objectives).
    constexpr double kTie = 1e-12;
    // Final pick between scan and golden point: rounding-level ties only.
    constexpr double kFinalTie = 1e-15;

    OptimizationResult result;
    auto objective = [&](double kappa) {
        ++result.evaluations;
        const double f = assemblage_fidelity(distill(source, kappa, n_copies), target);
        if (!std::isfinite(f)) {
            throw Error(ErrorCode::NonFiniteObjective, "fidelity at kappa = " + std::to_string(kappa));
        }
        return f;
    };

    const int m = std::max(options.scan_points, 3);
    const double step = 1.0 / (m - 1);
    std::vector<double> scan(m);
    double f_max = -1.0;
    for (int i = 0; i < m; ++i) {
        scan[i] = objective(i == m - 1 ? 1.0 : i * step);
        f_max = std::max(f_max, scan[i]);
    }
    int best = m - 1;
    while (scan[best] < f_max - kTie) {
        --best;
    }
    const double kappa_scan = best == m - 1 ? 1.0 : best * step;

    // Golden-section maximization on the neighbouring cells.
    double lo = std::max(0.0, (best - 1) * step);
    double hi = std::min(1.0, (best + 1) * step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > options.bracket) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        }
    }
    const double kappa_golden = 0.5 * (lo + hi);
    const double f_golden = objective(kappa_golden);
    result.bracket_width = hi - lo;

    const double f_scan = scan[best];
    const bool golden_wins = f_golden > f_scan + kFinalTie ||
                             (std::abs(f_golden - f_scan) <= kFinalTie && kappa_golden > kappa_scan);
    result.kappa_star = golden_wins ? kappa_golden : kappa_scan;
    result.f_star = golden_wins ? f_golden : f_scan;
    return result;
}

OptimizationResult optimize_kappa(double theta, int n_copies, Scenario scenario,
                                  const OptimizerOptions& options) {
    return optimize_kappa(gghz_assemblage(theta, scenario), n_copies, ghz_assemblage(scenario),
                          options);
}

}  // namespace steerdist
