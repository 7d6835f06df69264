#include "steerdist/assemblage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "steerdist/errors.hpp"
#include "steerdist/tolerances.hpp"

namespace steerdist {

std::string_view scenario_name(Scenario s) {
    return s == Scenario::OneSided ? "1sdi" : "2sdi";
}

Assemblage::Assemblage(Scenario scenario, std::vector<HermitianMatrix> elements,
                       std::optional<double> theta)
    : scenario_(scenario), elements_(std::move(elements)), theta_(theta) {
    if (static_cast<int>(elements_.size()) != element_count(scenario_)) {
        throw Error(ErrorCode::BadDimension,
                    "expected " + std::to_string(element_count(scenario_)) + " elements, got " +
                        std::to_string(elements_.size()));
    }
    for (const auto& e : elements_) {
        if (e.dim() != element_dim(scenario_)) {
            throw Error(ErrorCode::BadDimension, "element dimension " + std::to_string(e.dim()));
        }
    }
}

const HermitianMatrix& Assemblage::at(int a, int x) const {
    if (scenario_ != Scenario::OneSided) {
        throw Error(ErrorCode::ScenarioMismatch, "sigma_{a|x} requested from a 2sDI assemblage");
    }
    return elements_.at(index(a, x));
}

const HermitianMatrix& Assemblage::at(int a, int b, int x, int y) const {
    if (scenario_ != Scenario::TwoSided) {
        throw Error(ErrorCode::ScenarioMismatch, "sigma_{ab|xy} requested from a 1sDI assemblage");
    }
    return elements_.at(index(a, b, x, y));
}

std::vector<HermitianMatrix> Assemblage::context(int c) const {
    const int per = static_cast<int>(elements_.size()) / context_count();
    return {elements_.begin() + c * per, elements_.begin() + (c + 1) * per};
}

HermitianMatrix Assemblage::context_sum(int c) const {
    auto elems = context(c);
    HermitianMatrix sum = elems.front();
    for (std::size_t k = 1; k < elems.size(); ++k) {
        sum += elems[k];
    }
    return sum;
}

Assemblage Assemblage::transformed(
    const std::function<HermitianMatrix(const HermitianMatrix&)>& f) const {
    std::vector<HermitianMatrix> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        out.push_back(f(e));
    }
    return Assemblage(scenario_, std::move(out), theta_);
}

Assemblage mix(double weight, const Assemblage& first, const Assemblage& second) {
    if (first.scenario() != second.scenario()) {
        throw Error(ErrorCode::ScenarioMismatch, "cannot mix 1sDI with 2sDI assemblages");
    }
    std::vector<HermitianMatrix> out;
    const auto a = first.elements();
    const auto b = second.elements();
    out.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.push_back(weight * a[k] + (1.0 - weight) * b[k]);
    }
    std::optional<double> theta;
    if (first.theta() == second.theta()) {
        theta = first.theta();
    }
    return Assemblage(first.scenario(), std::move(out), theta);
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.invariant << " violated at " << v.where << " (deviation " << v.deviation << ")\n";
    }
    return os.str();
}

namespace {

std::string context_label(Scenario s, int c) {
    if (s == Scenario::OneSided) {
        return "x=" + std::to_string(c);
    }
    return "x=" + std::to_string(c / 3) + ",y=" + std::to_string(c % 3);
}

std::string element_label(Scenario s, int k) {
    if (s == Scenario::OneSided) {
        return "a=" + std::to_string(k % 2) + ",x=" + std::to_string(k / 2);
    }
    const int b = k % 2;
    const int a = (k / 2) % 2;
    const int xy = k / 4;
    return "a=" + std::to_string(a) + ",b=" + std::to_string(b) + ",x=" + std::to_string(xy / 3) +
           ",y=" + std::to_string(xy % 3);
}

}  // namespace

ValidationReport validate(const Assemblage& asm_, double tolerance) {
    ValidationReport report;
    const Scenario s = asm_.scenario();
    const auto elems = asm_.elements();

    for (std::size_t k = 0; k < elems.size(); ++k) {
        const double lo = eig_hermitian(elems[k]).values.front();
        if (lo < -tol::psd) {
            report.violations.push_back({"psd", element_label(s, static_cast<int>(k)), -lo});
        }
    }

    const int contexts = asm_.context_count();
    std::vector<HermitianMatrix> sums;
    for (int c = 0; c < contexts; ++c) {
        sums.push_back(asm_.context_sum(c));
        const double dev = std::abs(sums.back().trace() - 1.0);
        if (dev > tolerance) {
            report.violations.push_back({"normalization", context_label(s, c), dev});
        }
    }
    for (int c = 1; c < contexts; ++c) {
        const double dev = sums[c].max_abs_diff(sums[0]);
        if (dev > tolerance) {
            report.violations.push_back({"no-signaling", context_label(s, c), dev});
        }
    }

    if (s == Scenario::TwoSided) {
        // Bob's marginal must not depend on Alice's setting, and vice versa.
        for (int y = 0; y < 3; ++y) {
            for (int b = 0; b < 2; ++b) {
                auto bob = [&](int x) { return asm_.at(0, b, x, y) + asm_.at(1, b, x, y); };
                const auto ref = bob(0);
                for (int x = 1; x < 3; ++x) {
                    const double dev = bob(x).max_abs_diff(ref);
                    if (dev > tolerance) {
                        report.violations.push_back(
                            {"no-signaling", "sum_a, b=" + std::to_string(b) + ",x=" +
                                                 std::to_string(x) + ",y=" + std::to_string(y),
                             dev});
                    }
                }
            }
        }
        for (int x = 0; x < 3; ++x) {
            for (int a = 0; a < 2; ++a) {
                auto alice = [&](int y) { return asm_.at(a, 0, x, y) + asm_.at(a, 1, x, y); };
                const auto ref = alice(0);
                for (int y = 1; y < 3; ++y) {
                    const double dev = alice(y).max_abs_diff(ref);
                    if (dev > tolerance) {
                        report.violations.push_back(
                            {"no-signaling", "sum_b, a=" + std::to_string(a) + ",x=" +
                                                 std::to_string(x) + ",y=" + std::to_string(y),
                             dev});
                    }
                }
            }
        }
    }
    return report;
}

void require_valid(const Assemblage& asm_, double tolerance) {
    const auto report = validate(asm_, tolerance);
    if (!report.ok()) {
        throw Error(ErrorCode::InvariantViolation, report.to_string());
    }
}

// ---------------------------------------------------------------------------
// Construction

Assemblage assemblage_from_state(const PureState& state, unsigned measured,
                                 std::span<const MeasurementSet> sets) {
    if (state.dim() != 8) {
        throw Error(ErrorCode::BadDimension, "tripartite qubit state required");
    }
    const HermitianMatrix rho = state.density_matrix();
    const Matrix id2 = Matrix::identity(2);
    const Matrix id4 = Matrix::identity(4);

    if (measured == kPartyA) {
        if (sets.size() != 1) {
            throw Error(ErrorCode::BadMask, "one measurement set required for {A}");
        }
        std::vector<HermitianMatrix> out(Assemblage::element_count(Scenario::OneSided));
        for (int x = 0; x < 3; ++x) {
            for (int a = 0; a < 2; ++a) {
                const Matrix p = kron(sets[0].projector(a, x).matrix(), id4);
                out[Assemblage::index(a, x)] =
                    partial_trace(rho.congruence(p), kPartyB | kPartyC);
            }
        }
        auto result = Assemblage(Scenario::OneSided, std::move(out), state.theta());
        require_valid(result);
        return result;
    }
    if (measured == (kPartyA | kPartyB)) {
        if (sets.size() != 2) {
            throw Error(ErrorCode::BadMask, "two measurement sets required for {A,B}");
        }
        std::vector<HermitianMatrix> out(Assemblage::element_count(Scenario::TwoSided));
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < 3; ++y) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        const Matrix p = kron(kron(sets[0].projector(a, x).matrix(),
                                                   sets[1].projector(b, y).matrix()),
                                              id2);
                        out[Assemblage::index(a, b, x, y)] =
                            partial_trace(rho.congruence(p), kPartyC);
                    }
                }
            }
        }
        auto result = Assemblage(Scenario::TwoSided, std::move(out), state.theta());
        require_valid(result);
        return result;
    }
    throw Error(ErrorCode::BadMask, "measured parties must be {A} or {A,B}");
}

Assemblage gghz_assemblage_1sdi(double theta) {
    theta = checked_theta(theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex i(0.0, 1.0);
    // Two-qubit kets on BC supported on |00>, |11>.
    auto ket = [](Complex a00, Complex a11) { return std::vector<Complex>{a00, 0.0, 0.0, a11}; };

    std::vector<HermitianMatrix> out(Assemblage::element_count(Scenario::OneSided));
    out[Assemblage::index(0, 0)] = HermitianMatrix::projector(ket(c, s), 0.5);
    out[Assemblage::index(1, 0)] = HermitianMatrix::projector(ket(c, -s), 0.5);
    out[Assemblage::index(0, 1)] = HermitianMatrix::projector(ket(c, -i * s), 0.5);
    out[Assemblage::index(1, 1)] = HermitianMatrix::projector(ket(c, i * s), 0.5);
    out[Assemblage::index(0, 2)] = HermitianMatrix::diagonal({c * c, 0.0, 0.0, 0.0});
    out[Assemblage::index(1, 2)] = HermitianMatrix::diagonal({0.0, 0.0, 0.0, s * s});
    return Assemblage(Scenario::OneSided, std::move(out), theta);
}

Assemblage gghz_assemblage_2sdi(double theta) {
    theta = checked_theta(theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex i(0.0, 1.0);
    const std::vector<Complex> real_plus{c, s};
    const std::vector<Complex> real_minus{c, -s};
    const std::vector<Complex> imag_plus{c, i * s};
    const std::vector<Complex> imag_minus{c, -i * s};

    std::vector<HermitianMatrix> out(Assemblage::element_count(Scenario::TwoSided));
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const bool same = a == b;
                    HermitianMatrix e;
                    if (x < 2 && y < 2) {
                        if (x == y) {
                            // XX: even parity -> +; YY: odd parity -> +.
                            const bool plus = (x == 0) == same;
                            e = HermitianMatrix::projector(plus ? real_plus : real_minus, 0.25);
                        } else {
                            e = HermitianMatrix::projector(same ? imag_minus : imag_plus, 0.25);
                        }
                    } else if (x == 2 && y == 2) {
                        if (!same) {
                            e = HermitianMatrix::zero(2);
                        } else {
                            e = a == 0 ? HermitianMatrix::diagonal({c * c, 0.0})
                                       : HermitianMatrix::diagonal({0.0, s * s});
                        }
                    } else {
                        // Exactly one party measures Z; its outcome fixes Charlie's qubit.
                        const int z_outcome = x == 2 ? a : b;
                        e = z_outcome == 0 ? HermitianMatrix::diagonal({0.5 * c * c, 0.0})
                                           : HermitianMatrix::diagonal({0.0, 0.5 * s * s});
                    }
                    out[Assemblage::index(a, b, x, y)] = e;
                }
            }
        }
    }
    return Assemblage(Scenario::TwoSided, std::move(out), theta);
}

Assemblage gghz_assemblage(double theta, Scenario scenario) {
    return scenario == Scenario::OneSided ? gghz_assemblage_1sdi(theta)
                                          : gghz_assemblage_2sdi(theta);
}

Assemblage ghz_assemblage(Scenario scenario) {
    return gghz_assemblage(std::numbers::pi / 4.0, scenario);
}

}  // namespace steerdist
