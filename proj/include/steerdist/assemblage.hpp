#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steerdist/numerics.hpp"
#include "steerdist/states.hpp"

namespace steerdist {

/// OneSided: Alice untrusted, elements sigma_{a|x} on BC (dim 4).
/// TwoSided: Alice and Bob untrusted, elements sigma_{ab|xy} on C (dim 2).
enum class Scenario { OneSided, TwoSided };

std::string_view scenario_name(Scenario s);

/// Parties for assemblage_from_state; same bit layout as QubitMask.
enum Party : unsigned { kPartyA = 1u, kPartyB = 2u, kPartyC = 4u };

/// Dense table of unnormalized conditional states over the full
/// 2-outcome / 3-setting grid. Construction checks shape only; use
/// validate() for the physical invariants.
class Assemblage {
public:
    static constexpr int kOutcomes = 2;
    static constexpr int kSettings = 3;

    Assemblage(Scenario scenario, std::vector<HermitianMatrix> elements,
               std::optional<double> theta = {});

    static constexpr int element_count(Scenario s) {
        return s == Scenario::OneSided ? kOutcomes * kSettings
                                       : kOutcomes * kOutcomes * kSettings * kSettings;
    }
    static constexpr int element_dim(Scenario s) { return s == Scenario::OneSided ? 4 : 2; }
    static constexpr int index(int a, int x) { return x * kOutcomes + a; }
    static constexpr int index(int a, int b, int x, int y) {
        return ((x * kSettings + y) * kOutcomes + a) * kOutcomes + b;
    }

    Scenario scenario() const noexcept { return scenario_; }
    int element_dim() const noexcept { return element_dim(scenario_); }
    std::optional<double> theta() const noexcept { return theta_; }
    std::span<const HermitianMatrix> elements() const noexcept { return elements_; }

    /// sigma_{a|x}; throws ScenarioMismatch on a TwoSided assemblage.
    const HermitianMatrix& at(int a, int x) const;
    /// sigma_{ab|xy}; throws ScenarioMismatch on a OneSided assemblage.
    const HermitianMatrix& at(int a, int b, int x, int y) const;

    /// Number of measurement contexts: 3 settings (OneSided) or 9 pairs.
    int context_count() const noexcept { return scenario_ == Scenario::OneSided ? 3 : 9; }
    /// Elements belonging to one context, in outcome order.
    std::vector<HermitianMatrix> context(int c) const;
    /// Sum of the elements of one context (the reduced state seen through it).
    HermitianMatrix context_sum(int c) const;

    Assemblage transformed(const std::function<HermitianMatrix(const HermitianMatrix&)>& f) const;

private:
    Scenario scenario_;
    std::vector<HermitianMatrix> elements_;
    std::optional<double> theta_;
};

/// weight * first + (1 - weight) * second, elementwise.
Assemblage mix(double weight, const Assemblage& first, const Assemblage& second);

struct Violation {
    std::string invariant;  // "psd", "normalization", "no-signaling"
    std::string where;
    double deviation = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

/// Checks PSD (tol::psd), normalization and no-signaling (`tolerance`).
ValidationReport validate(const Assemblage& asm_, double tolerance = 1e-10);

/// Throws InvariantViolation with the report text if validation fails.
void require_valid(const Assemblage& asm_, double tolerance = 1e-10);

/// Conditional states left after the parties in `measured` perform the
/// given measurements on `state`: {A} gives a OneSided assemblage on BC,
/// {A,B} a TwoSided one on C.
Assemblage assemblage_from_state(const PureState& state, unsigned measured,
                                 std::span<const MeasurementSet> sets);

/// Closed-form GGHZ assemblages for Pauli X, Y, Z measurements.
Assemblage gghz_assemblage_1sdi(double theta);
Assemblage gghz_assemblage_2sdi(double theta);
Assemblage gghz_assemblage(double theta, Scenario scenario);
/// theta = pi/4.
Assemblage ghz_assemblage(Scenario scenario);

}  // namespace steerdist
