#pragma once

#include <optional>
#include <vector>

#include "steerdist/numerics.hpp"

namespace steerdist {

/// Checks 0 <= theta <= pi/4 (with tol::domain_slack) and returns theta
/// clamped into the interval. Throws ThetaOutOfRange.
double checked_theta(double theta);

/// Normalized state vector. `theta` is set when built by gghz().
class PureState {
public:
    explicit PureState(std::vector<Complex> amplitudes, std::optional<double> theta = {});

    int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
    const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
    std::optional<double> theta() const noexcept { return theta_; }

    HermitianMatrix density_matrix() const;

private:
    std::vector<Complex> amplitudes_;
    std::optional<double> theta_;
};

/// cos(theta)|000> + sin(theta)|111>, qubit order A (most significant), B, C.
PureState gghz(double theta);

namespace pauli {
HermitianMatrix i();
HermitianMatrix x();
HermitianMatrix y();
HermitianMatrix z();
}  // namespace pauli

/// Dichotomic projective measurements given by +-1 observables. Outcome a
/// corresponds to eigenvalue (-1)^a, so M_{a|x} = (1 + (-1)^a O_x) / 2.
class MeasurementSet {
public:
    explicit MeasurementSet(std::vector<HermitianMatrix> observables);

    int size() const noexcept { return static_cast<int>(observables_.size()); }
    const HermitianMatrix& observable(int setting) const { return observables_.at(setting); }
    HermitianMatrix projector(int outcome, int setting) const;

private:
    std::vector<HermitianMatrix> observables_;
};

/// Settings 0, 1, 2 = X, Y, Z.
MeasurementSet pauli_xyz();

/// Witness expressions label settings A_1..A_3; internally they are 0..2.
constexpr int setting_from_witness_label(int label) { return label - 1; }

}  // namespace steerdist
