#include "steerdist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steerdist/errors.hpp"
#include "steerdist/states.hpp"
#include "steerdist/tolerances.hpp"

namespace steerdist {

double root_fidelity(const HermitianMatrix& sigma, const HermitianMatrix& rho) {
    if (sigma.dim() != rho.dim()) {
        throw Error(ErrorCode::DimMismatch, "root_fidelity arguments differ in size");
    }
    const HermitianMatrix root = psd_sqrt(sigma);
    if (!rho.psd_hint()) {
        HermitianMatrix::checked_psd(rho.matrix());
    }
    const HermitianMatrix inner(root.matrix() * rho.matrix() * root.matrix(), true);
    return psd_sqrt(inner).trace();
}

std::vector<double> context_fidelities(const Assemblage& asm_, const Assemblage& target) {
    if (asm_.scenario() != target.scenario()) {
        throw Error(ErrorCode::ScenarioMismatch, "fidelity between 1sDI and 2sDI assemblages");
    }
    const auto a = asm_.elements();
    const auto b = target.elements();
    const int per = static_cast<int>(a.size()) / asm_.context_count();
    std::vector<double> sums(asm_.context_count(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        sums[k / per] += root_fidelity(a[k], b[k]);
    }
    return sums;
}

double assemblage_fidelity(const Assemblage& asm_, const Assemblage& target) {
    const auto sums = context_fidelities(asm_, target);
    return *std::min_element(sums.begin(), sums.end());
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

constexpr double kThird = 1.0 / 3.0;

// Published two- and three-body coefficients.
constexpr double kZZ1sdi = 0.1547;
constexpr double kPair2sdi = 0.1831;
constexpr double kTriple2sdi = 0.2582;

const std::vector<WitnessTerm> kTerms1sdi = {
    {"ZB_ZC", kZZ1sdi},    {"A3_ZB", -kThird},   {"A3_ZC", -kThird},   {"A1_XB_XC", -kThird},
    {"A1_YB_YC", kThird},  {"A2_XB_YC", kThird}, {"A2_YB_XC", kThird},
};

const std::vector<WitnessTerm> kTerms2sdi = {
    {"A3_B3", -kPair2sdi},       {"A3_ZC", -kPair2sdi},       {"B3_ZC", -kPair2sdi},
    {"A1_B1_XC", -kTriple2sdi},  {"A1_B2_YC", kTriple2sdi},   {"A2_B1_YC", kTriple2sdi},
    {"A2_B2_XC", kTriple2sdi},
};

double sign(int outcome) { return outcome == 0 ? 1.0 : -1.0; }

double expect(const HermitianMatrix& op, const HermitianMatrix& sigma) {
    return (op.matrix() * sigma.matrix()).trace().real();
}

void require_no_signaling(const Assemblage& asm_) {
    const auto report = validate(asm_, tol::assemblage);
    for (const auto& v : report.violations) {
        if (v.invariant == "no-signaling") {
            throw Error(ErrorCode::InvariantViolation,
                        "witness marginals need a no-signaling assemblage: " + report.to_string());
        }
    }
}

}  // namespace

const std::vector<WitnessTerm>& witness_terms(Scenario scenario) {
    return scenario == Scenario::OneSided ? kTerms1sdi : kTerms2sdi;
}

double witness_value(Scenario scenario, const std::map<std::string, double, std::less<>>& terms) {
    double value = 1.0;
    for (const auto& t : witness_terms(scenario)) {
        value += t.coefficient * terms.at(std::string(t.name));
    }
    return value;
}

WitnessResult witness_1sdi(const Assemblage& asm_) {
    if (asm_.scenario() != Scenario::OneSided) {
        throw Error(ErrorCode::ScenarioMismatch, "S_1sDI needs a 1sDI assemblage");
    }
    require_no_signaling(asm_);
    const auto x = pauli::x();
    const auto y = pauli::y();
    const auto z = pauli::z();
    const auto id = pauli::i();
    const int a1 = setting_from_witness_label(1);
    const int a2 = setting_from_witness_label(2);
    const int a3 = setting_from_witness_label(3);

    auto correlator = [&](int setting, const HermitianMatrix& op) {
        double acc = 0.0;
        for (int a = 0; a < 2; ++a) {
            acc += sign(a) * expect(op, asm_.at(a, setting));
        }
        return acc;
    };

    WitnessResult r;
    r.terms["ZB_ZC"] = expect(kron(z, z), asm_.context_sum(a3));
    r.terms["A3_ZB"] = correlator(a3, kron(z, id));
    r.terms["A3_ZC"] = correlator(a3, kron(id, z));
    r.terms["A1_XB_XC"] = correlator(a1, kron(x, x));
    r.terms["A1_YB_YC"] = correlator(a1, kron(y, y));
    r.terms["A2_XB_YC"] = correlator(a2, kron(x, y));
    r.terms["A2_YB_XC"] = correlator(a2, kron(y, x));
    r.value = witness_value(Scenario::OneSided, r.terms);
    return r;
}

WitnessResult witness_2sdi(const Assemblage& asm_) {
    if (asm_.scenario() != Scenario::TwoSided) {
        throw Error(ErrorCode::ScenarioMismatch, "S_2sDI needs a 2sDI assemblage");
    }
    require_no_signaling(asm_);
    const auto x = pauli::x();
    const auto y = pauli::y();
    const auto z = pauli::z();
    const int s1 = setting_from_witness_label(1);
    const int s2 = setting_from_witness_label(2);
    const int s3 = setting_from_witness_label(3);

    // sum_{ab} wa(a) wb(b) Tr[op sigma_{ab|xy}]
    auto weighted = [&](int xs, int ys, const HermitianMatrix& op, bool alice_sign,
                        bool bob_sign) {
        double acc = 0.0;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const double w = (alice_sign ? sign(a) : 1.0) * (bob_sign ? sign(b) : 1.0);
                acc += w * expect(op, asm_.at(a, b, xs, ys));
            }
        }
        return acc;
    };
    const auto id = pauli::i();

    WitnessResult r;
    r.terms["A3_B3"] = weighted(s3, s3, id, true, true);
    r.terms["A3_ZC"] = weighted(s3, s3, z, true, false);
    r.terms["B3_ZC"] = weighted(s3, s3, z, false, true);
    r.terms["A1_B1_XC"] = weighted(s1, s1, x, true, true);
    r.terms["A1_B2_YC"] = weighted(s1, s2, y, true, true);
    r.terms["A2_B1_YC"] = weighted(s2, s1, y, true, true);
    r.terms["A2_B2_XC"] = weighted(s2, s2, x, true, true);
    r.value = witness_value(Scenario::TwoSided, r.terms);
    return r;
}

WitnessResult witness(const Assemblage& asm_) {
    return asm_.scenario() == Scenario::OneSided ? witness_1sdi(asm_) : witness_2sdi(asm_);
}

}  // namespace steerdist
