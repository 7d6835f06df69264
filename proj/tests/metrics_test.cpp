#include "steerdist/metrics.hpp"

#include <gtest/gtest.h>

#include "steerdist/errors.hpp"
#include "test_util.h"

using namespace steerdist;
using namespace steerdist::testing;

namespace {

// S_1sDI of GGHZ(theta): all correlators expanded by hand.
double s1_closed_form(double t) { return 1.1547 - (2.0 + 4.0 * std::sin(2 * t)) / 3.0; }
double s2_closed_form(double t) { return 1.0 - 3 * 0.1831 - 4 * 0.2582 * std::sin(2 * t); }

double det2(const Matrix& m) { return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real(); }

}  // namespace

TEST(RootFidelity, self_fidelity_is_trace) {
    std::mt19937_64 rng(1);
    for (int dim : {2, 4, 8}) {
        const auto s = random_psd(rng, dim);
        EXPECT_NEAR(root_fidelity(s, s), s.trace(), 1e-8 * s.trace());
    }
}

TEST(RootFidelity, rank_one_overlap) {
    for (double t : linspace(0.0, kPi / 4, 9)) {
        const double h = 1 / std::sqrt(2.0);
        const auto phi = HermitianMatrix::projector(std::vector<Complex>{h, 0, 0, h}, 0.5);
        const auto theta_plus = HermitianMatrix::projector(
            std::vector<Complex>{std::cos(t), 0, 0, std::sin(t)}, 0.5);
        EXPECT_NEAR(root_fidelity(phi, theta_plus), (std::cos(t) + std::sin(t)) / (2 * std::sqrt(2.0)),
                    1e-12);
    }
}

TEST(RootFidelity, commuting_diagonal) {
    const auto a = HermitianMatrix::diagonal({0.5, 0, 0, 0});
    EXPECT_NEAR(root_fidelity(a, a), 0.5, 1e-15);
    const auto p = HermitianMatrix::diagonal({0.1, 0.2, 0.3, 0.4});
    const auto q = HermitianMatrix::diagonal({0.4, 0.3, 0.2, 0.1});
    EXPECT_NEAR(root_fidelity(p, q), 2 * std::sqrt(0.04) + 2 * std::sqrt(0.06), 1e-14);
}

TEST(RootFidelity, qubit_determinant_formula) {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        const bool rank_one = rep % 5 == 0;
        const auto s = random_psd(rng, 2, rank_one ? 1 : -1);
        const auto r = random_psd(rng, 2);
        // A rank-one argument has det exactly 0; computing it would inject sqrt(eps) noise.
        const double dets = rank_one ? 0.0 : det2(s.matrix()) * det2(r.matrix());
        const double sq = (s.matrix() * r.matrix()).trace().real() + 2 * std::sqrt(dets);
        EXPECT_NEAR(root_fidelity(s, r), std::sqrt(sq), 1e-9);
    }
}

TEST(RootFidelity, symmetric_and_bounded) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const int dim = rep % 2 ? 4 : 2;
        const auto s = random_psd(rng, dim);
        const auto r = random_psd(rng, dim, rep % 3 == 0 ? 1 : -1);
        const double f = root_fidelity(s, r);
        EXPECT_NEAR(f, root_fidelity(r, s), 1e-8);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, std::sqrt(s.trace() * r.trace()) + 1e-9);
    }
}

TEST(RootFidelity, errors) {
    EXPECT_THROW(root_fidelity(HermitianMatrix::identity(2), HermitianMatrix::identity(4)), Error);
    try {
        root_fidelity(HermitianMatrix::diagonal({1, -0.1}), HermitianMatrix::identity(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPsd);
    }
}

TEST(AssemblageFidelity, identical_is_one) {
    for (auto s : {Scenario::OneSided, Scenario::TwoSided}) {
        EXPECT_NEAR(assemblage_fidelity(ghz_assemblage(s), ghz_assemblage(s)), 1.0, 1e-12);
    }
}

TEST(AssemblageFidelity, gghz_against_ghz) {
    for (double t : linspace(0.0, kPi / 4, 15)) {
        const double expected = std::sqrt((1 + std::sin(2 * t)) / 2);
        EXPECT_NEAR(assemblage_fidelity(gghz_assemblage_1sdi(t), ghz_assemblage(Scenario::OneSided)),
                    expected, 1e-12);
        EXPECT_NEAR(assemblage_fidelity(gghz_assemblage_2sdi(t), ghz_assemblage(Scenario::TwoSided)),
                    expected, 1e-12);
    }
    EXPECT_NEAR(assemblage_fidelity(gghz_assemblage_1sdi(kPi / 8), ghz_assemblage(Scenario::OneSided)),
                0.92388, 1e-5);
    EXPECT_NEAR(assemblage_fidelity(gghz_assemblage_1sdi(0), ghz_assemblage(Scenario::OneSided)),
                0.70711, 1e-5);
}

TEST(AssemblageFidelity, scenario_mismatch) {
    try {
        assemblage_fidelity(ghz_assemblage(Scenario::OneSided), ghz_assemblage(Scenario::TwoSided));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ScenarioMismatch);
    }
}

TEST(AssemblageFidelity, two_sided_has_nine_contexts) {
    EXPECT_EQ(context_fidelities(gghz_assemblage_2sdi(0.2), ghz_assemblage(Scenario::TwoSided)).size(),
              9u);
}

TEST(Witness1sdi, ghz_value) {
    EXPECT_NEAR(witness_1sdi(ghz_assemblage(Scenario::OneSided)).value, -0.8453, 5e-4);
}

TEST(Witness1sdi, product_state_value) {
    const auto r = witness_1sdi(gghz_assemblage_1sdi(0.0));
    EXPECT_NEAR(r.value, 1.1547 - 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.value, 0.48803, 1e-5);
    EXPECT_NEAR(r.terms.at("ZB_ZC"), 1.0, 1e-15);
    EXPECT_NEAR(r.terms.at("A1_XB_XC"), 0.0, 1e-15);
}

TEST(Witness1sdi, closed_form_and_monotone) {
    double prev = 10.0;
    for (double t : linspace(0.0, kPi / 4, 60)) {
        const double v = witness_1sdi(gghz_assemblage_1sdi(t)).value;
        EXPECT_NEAR(v, s1_closed_form(t), 1e-12);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Witness1sdi, sign_change_near_0_187) {
    // Root of the closed form, solved by hand: sin 2t = (3 * 1.1547 - 2) / 4.
    const double root = 0.5 * std::asin((3 * 1.1547 - 2) / 4);
    EXPECT_NEAR(root, 0.18737, 1e-5);
    EXPECT_GT(witness_1sdi(gghz_assemblage_1sdi(root - 1e-4)).value, 0);
    EXPECT_LT(witness_1sdi(gghz_assemblage_1sdi(root + 1e-4)).value, 0);
}

TEST(Witness2sdi, ghz_and_product_values) {
    EXPECT_NEAR(witness_2sdi(ghz_assemblage(Scenario::TwoSided)).value, -0.5820, 5e-4);
    EXPECT_NEAR(witness_2sdi(gghz_assemblage_2sdi(0.0)).value, 0.4507, 1e-12);
    for (double t : linspace(0.0, kPi / 4, 20)) {
        EXPECT_NEAR(witness_2sdi(gghz_assemblage_2sdi(t)).value, s2_closed_form(t), 1e-12);
    }
}

TEST(Witness2sdi, unsteerable_construction_does_not_violate) {
    // Every (x,y) context replaced by the ZZ context: a classical mixture.
    const auto ghz = ghz_assemblage(Scenario::TwoSided);
    std::vector<HermitianMatrix> e(36);
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    e[Assemblage::index(a, b, x, y)] = ghz.at(a, b, 2, 2);
                }
            }
        }
    }
    EXPECT_GE(witness_2sdi(Assemblage(Scenario::TwoSided, e)).value, 0.0);
}

TEST(Witness, linear_in_convex_mixtures) {
    for (auto s : {Scenario::OneSided, Scenario::TwoSided}) {
        const auto a = gghz_assemblage(0.15, s);
        const auto b = gghz_assemblage(0.7, s);
        for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
            const double mixed = witness(mix(lambda, a, b)).value;
            EXPECT_NEAR(mixed, lambda * witness(a).value + (1 - lambda) * witness(b).value, 1e-10);
        }
    }
}

TEST(Witness, value_reconstructs_exactly_from_terms) {
    for (auto s : {Scenario::OneSided, Scenario::TwoSided}) {
        const auto r = witness(gghz_assemblage(0.33, s));
        double v = 1.0;
        for (const auto& t : witness_terms(s)) {
            v += t.coefficient * r.terms.at(std::string(t.name));
        }
        EXPECT_EQ(v, r.value);
        EXPECT_EQ(r.terms.size(), witness_terms(s).size());
    }
}

TEST(Witness, scenario_mismatch_and_signaling) {
    EXPECT_THROW(witness_1sdi(ghz_assemblage(Scenario::TwoSided)), Error);
    EXPECT_THROW(witness_2sdi(ghz_assemblage(Scenario::OneSided)), Error);

    const auto a = gghz_assemblage_1sdi(0.3);
    const auto b = gghz_assemblage_1sdi(0.6);
    std::vector<HermitianMatrix> e(a.elements().begin(), a.elements().end());
    e[Assemblage::index(0, 2)] = b.at(0, 2);
    e[Assemblage::index(1, 2)] = b.at(1, 2);
    try {
        witness_1sdi(Assemblage(Scenario::OneSided, e));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::InvariantViolation);
    }
}
