#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "steerdist/assemblage.hpp"
#include "steerdist/numerics.hpp"

namespace steerdist {

/// Tr sqrt(sqrt(sigma) rho sqrt(sigma)) for PSD arguments of equal size.
double root_fidelity(const HermitianMatrix& sigma, const HermitianMatrix& rho);

/// Per-context sums of root fidelities, in context order (3 settings for
/// 1sDI, 9 setting pairs for 2sDI).
std::vector<double> context_fidelities(const Assemblage& asm_, const Assemblage& target);

/// Minimum over contexts of the summed root fidelities; 1 iff identical.
double assemblage_fidelity(const Assemblage& asm_, const Assemblage& target);

struct WitnessTerm {
    std::string_view name;
    double coefficient;
};

/// Expectation values entering a witness, keyed by the names in
/// witness_terms(); `value` = 1 + sum(coefficient * term), accumulated in
/// witness_terms() order. Negative values witness genuine tripartite
/// steering.
struct WitnessResult {
    double value = 0.0;
    std::map<std::string, double, std::less<>> terms;
};

const std::vector<WitnessTerm>& witness_terms(Scenario scenario);

/// Evaluates the witness polynomial from stored term values.
double witness_value(Scenario scenario, const std::map<std::string, double, std::less<>>& terms);

WitnessResult witness_1sdi(const Assemblage& asm_);
WitnessResult witness_2sdi(const Assemblage& asm_);
WitnessResult witness(const Assemblage& asm_);

}  // namespace steerdist
