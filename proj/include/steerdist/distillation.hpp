#pragma once

#include "steerdist/assemblage.hpp"
#include "steerdist/numerics.hpp"

namespace steerdist {

/// Charlie's dichotomic POVM: c0 = kappa|0><0| + |1><1| is the filter
/// (success branch), c1 = sqrt(1 - kappa^2)|0><0| the failure branch.
struct FilterOp {
    double kappa = 1.0;
    HermitianMatrix c0;
    HermitianMatrix c1;
};

/// Throws KappaOutOfRange unless 0 <= kappa <= 1.
FilterOp make_filter(double kappa);

struct FilterResult {
    double p_succ = 0.0;
    Assemblage filtered;
};

/// Applies the success branch to Charlie's qubit (second factor of BC for
/// 1sDI, the whole element for 2sDI) and renormalizes.
/// Throws ZeroSuccessProbability when p_succ < tol::min_success_probability.
FilterResult apply_filter(const Assemblage& asm_, const FilterOp& filter);

/// Probability that at least one of the first n-1 copies was filtered
/// successfully: 1 - (1 - p)^(n-1).
double n_copy_success_probability(double p_single, int n_copies);

/// P_succ^N * filtered + P_fail^N * input. The failure branch keeps the
/// unfiltered input, so any valid assemblage can be distilled.
Assemblage distill(const Assemblage& input, double kappa, int n_copies);

struct DistillationConfig {
    double theta = 0.0;
    int n_copies = 2;
    double kappa = 1.0;
    Scenario scenario = Scenario::OneSided;

    /// Throws ThetaOutOfRange / CopiesOutOfRange / KappaOutOfRange.
    void check() const;
};

/// Distilled GGHZ(theta) assemblage.
Assemblage distilled_assemblage(const DistillationConfig& config);

// Closed forms for GGHZ inputs.

/// 1 / (2 cos^2 theta): the two-copy optimum.
double two_copy_optimal_kappa(double theta);
/// tan theta: filter mapping GGHZ exactly onto GHZ.
double asymptotic_kappa(double theta);
/// Two-copy fidelity to GHZ at any kappa.
double two_copy_fidelity_closed_form(double theta, double kappa);
/// Two-copy fidelity at the optimal kappa.
double two_copy_optimal_fidelity(double theta);
/// N-copy fidelity with kappa = tan theta.
double kappa_prime_ncopy_fidelity(double theta, int n_copies);

struct OptimizationResult {
    double kappa_star = 1.0;
    double f_star = 0.0;
    int evaluations = 0;
    double bracket_width = 0.0;
};

struct OptimizerOptions {
    int scan_points = 1001;
    double bracket = 1e-8;
};

/// Maximizes kappa -> assemblage_fidelity(distill(source, kappa, n), target)
/// over [0, 1]: dense scan, then golden-section refinement of the best
/// cell. Ties go to the larger kappa.
OptimizationResult optimize_kappa(const Assemblage& source, int n_copies, const Assemblage& target,
                                  const OptimizerOptions& options = {});

/// GGHZ(theta) source with the GHZ target of the same scenario.
OptimizationResult optimize_kappa(double theta, int n_copies, Scenario scenario,
                                  const OptimizerOptions& options = {});

}  // namespace steerdist
