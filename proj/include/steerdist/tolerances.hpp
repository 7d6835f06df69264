#pragma once

namespace steerdist::tol {

// Entrywise Hermiticity check |m_ij - conj(m_ji)|.
inline constexpr double herm = 1e-10;
// Eigenvalues in [-psd, 0) count as zero; anything below is a hard error.
inline constexpr double psd = 1e-9;
// Eigen-reconstruction and orthonormality bound.
inline constexpr double eig_reconstruction = 1e-9;
// sqrt(m)^2 == m entrywise.
inline constexpr double sqrt_reconstruction = 1e-8;
// Normalization and no-signaling checks on assemblages.
inline constexpr double assemblage = 1e-10;
// Same checks for Monte Carlo mixtures.
inline constexpr double empirical_assemblage = 1e-6;
// Pure-state normalization.
inline constexpr double state_norm = 1e-12;
// Below this the filter never fires.
inline constexpr double min_success_probability = 1e-12;
// Slack on the closed interval ends of theta and kappa.
inline constexpr double domain_slack = 1e-12;
// Relative size under which an eigenvalue of a PSD matrix is rounding noise.
inline constexpr double relative_rank = 1e-13;

inline constexpr int max_jacobi_sweeps = 200;

}  // namespace steerdist::tol
