#include "steerdist/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steerdist/errors.hpp"
#include "steerdist/tolerances.hpp"

namespace steerdist {

double checked_theta(double theta) {
    constexpr double upper = std::numbers::pi / 4.0;
    if (!std::isfinite(theta) || theta < -tol::domain_slack || theta > upper + tol::domain_slack) {
        throw Error(ErrorCode::ThetaOutOfRange,
                    "theta = " + std::to_string(theta) + " outside [0, pi/4]");
    }
    return std::clamp(theta, 0.0, upper);
}

PureState::PureState(std::vector<Complex> amplitudes, std::optional<double> theta)
    : amplitudes_(std::move(amplitudes)), theta_(theta) {
    double norm2 = 0.0;
    for (const auto& z : amplitudes_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::NonFinite, "state amplitude");
        }
        norm2 += std::norm(z);
    }
    if (std::abs(norm2 - 1.0) > tol::state_norm) {
        throw Error(ErrorCode::InvariantViolation, "state norm^2 = " + std::to_string(norm2));
    }
}

HermitianMatrix PureState::density_matrix() const {
    return HermitianMatrix::projector(amplitudes_);
}

PureState gghz(double theta) {
    theta = checked_theta(theta);
    std::vector<Complex> amps(8);
    amps[0] = std::cos(theta);
    amps[7] = std::sin(theta);
    return PureState(std::move(amps), theta);
}

namespace pauli {

HermitianMatrix i() { return HermitianMatrix::identity(2); }

HermitianMatrix x() {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return HermitianMatrix(m);
}

HermitianMatrix y() {
    Matrix m(2);
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    return HermitianMatrix(m);
}

HermitianMatrix z() { return HermitianMatrix(Matrix::diagonal({1.0, -1.0})); }

}  // namespace pauli

MeasurementSet::MeasurementSet(std::vector<HermitianMatrix> observables)
    : observables_(std::move(observables)) {
    for (const auto& o : observables_) {
        const Matrix sq = o.matrix() * o.matrix();
        if (sq.max_abs_diff(Matrix::identity(o.dim())) > tol::herm) {
            throw Error(ErrorCode::InvariantViolation, "observable does not square to identity");
        }
    }
}

HermitianMatrix MeasurementSet::projector(int outcome, int setting) const {
    const auto& o = observable(setting);
    const double sign = outcome == 0 ? 1.0 : -1.0;
    Matrix p = Matrix::identity(o.dim()) + o.matrix() * Complex(sign);
    p *= 0.5;
    return HermitianMatrix(p, true);
}

MeasurementSet pauli_xyz() { return MeasurementSet({pauli::x(), pauli::y(), pauli::z()}); }

}  // namespace steerdist
