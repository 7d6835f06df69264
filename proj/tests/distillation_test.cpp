#include "steerdist/distillation.hpp"

#include <gtest/gtest.h>

#include "steerdist/errors.hpp"
#include "steerdist/metrics.hpp"
#include "test_util.h"

using namespace steerdist;
using namespace steerdist::testing;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Parse;
}

double max_element_diff(const Assemblage& a, const Assemblage& b) {
    double worst = 0;
    for (std::size_t k = 0; k < a.elements().size(); ++k) {
        worst = std::max(worst, a.elements()[k].max_abs_diff(b.elements()[k]));
    }
    return worst;
}

// Two-copy distilled 1sDI elements written out entry by entry (support on
// |00>, |11>): the x=0,1 blocks share diag (d0, d1) and an off-diagonal of
// modulus `off` with phase +-1 / +-i; x=2 is diagonal.
Assemblage two_copy_1sdi_oracle(double t, double k) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double d0 = k * k * c * c * s * s + std::pow(c, 4);
    const double d1 = s * s * (1 + c * c - k * k * c * c);
    const double off = c * s * (k + c * c - k * k * c * c);
    const Complex i(0, 1);
    auto block = [&](Complex phase) {
        Matrix m(4);
        m(0, 0) = 0.5 * d0;
        m(3, 3) = 0.5 * d1;
        m(0, 3) = 0.5 * off * phase;
        m(3, 0) = std::conj(m(0, 3));
        return HermitianMatrix(m);
    };
    std::vector<HermitianMatrix> e(6);
    e[Assemblage::index(0, 0)] = block(1.0);
    e[Assemblage::index(1, 0)] = block(-1.0);
    e[Assemblage::index(0, 1)] = block(i);
    e[Assemblage::index(1, 1)] = block(-i);
    e[Assemblage::index(0, 2)] = HermitianMatrix::diagonal({d0, 0, 0, 0});
    e[Assemblage::index(1, 2)] = HermitianMatrix::diagonal({0, 0, 0, d1});
    return Assemblage(Scenario::OneSided, e);
}

// Same numbers for the XX-context of the 2sDI assemblage (prefactor 1/4).
HermitianMatrix two_copy_2sdi_xx_oracle(double t, double k) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    Matrix m(2);
    m(0, 0) = 0.25 * (k * k * c * c * s * s + std::pow(c, 4));
    m(1, 1) = 0.25 * s * s * (1 + c * c - k * k * c * c);
    m(0, 1) = m(1, 0) = 0.25 * c * s * (k + c * c - k * k * c * c);
    return HermitianMatrix(m);
}

}  // namespace

TEST(MakeFilter, endpoints_and_midpoint) {
    const auto id = make_filter(1.0);
    EXPECT_EQ(id.c0.max_abs_diff(HermitianMatrix::identity(2)), 0.0);
    EXPECT_EQ(id.c1.max_abs_diff(HermitianMatrix::zero(2)), 0.0);

    const auto zero = make_filter(0.0);
    EXPECT_EQ(zero.c0.max_abs_diff(HermitianMatrix::diagonal({0, 1})), 0.0);
    EXPECT_EQ(zero.c1.max_abs_diff(HermitianMatrix::diagonal({1, 0})), 0.0);

    EXPECT_NEAR(make_filter(0.5).c1(0, 0).real(), std::sqrt(3.0) / 2, 1e-15);
}

TEST(MakeFilter, completeness) {
    for (double k : linspace(0, 1, 11)) {
        const auto f = make_filter(k);
        const Matrix sum = f.c0.matrix().adjoint() * f.c0.matrix() + f.c1.matrix().adjoint() * f.c1.matrix();
        EXPECT_LT(sum.max_abs_diff(Matrix::identity(2)), 1e-12);
    }
    EXPECT_EQ(code_of([] { make_filter(1.01); }), ErrorCode::KappaOutOfRange);
    EXPECT_EQ(code_of([] { make_filter(-0.2); }), ErrorCode::KappaOutOfRange);
}

TEST(ApplyFilter, success_probability_formula) {
    for (auto s : {Scenario::OneSided, Scenario::TwoSided}) {
        for (double t : linspace(0.05, kPi / 4, 6)) {
            for (double k : linspace(0, 1, 6)) {
                const auto r = apply_filter(gghz_assemblage(t, s), make_filter(k));
                EXPECT_NEAR(r.p_succ, k * k * std::pow(std::cos(t), 2) + std::pow(std::sin(t), 2),
                            1e-14);
                EXPECT_TRUE(validate(r.filtered).ok());
            }
        }
    }
}

TEST(ApplyFilter, identity_filter_is_noop) {
    const auto in = gghz_assemblage_1sdi(0.4);
    const auto r = apply_filter(in, make_filter(1.0));
    EXPECT_NEAR(r.p_succ, 1.0, 1e-15);
    EXPECT_LT(max_element_diff(r.filtered, in), 1e-15);
}

TEST(ApplyFilter, tan_theta_maps_onto_ghz) {
    for (auto s : {Scenario::OneSided, Scenario::TwoSided}) {
        for (double t : linspace(0.05, kPi / 4, 8)) {
            const auto r = apply_filter(gghz_assemblage(t, s), make_filter(std::tan(t)));
            EXPECT_LE(max_element_diff(r.filtered, ghz_assemblage(s)), 1e-10) << t;
        }
    }
}

TEST(ApplyFilter, zero_success_probability) {
    EXPECT_EQ(code_of([] { apply_filter(gghz_assemblage_1sdi(0.0), make_filter(0.0)); }),
              ErrorCode::ZeroSuccessProbability);
}

TEST(Distill, ghz_input_is_a_fixed_point_of_the_trivial_filter) {
    for (int n : {2, 5, 50}) {
        const auto d = distilled_assemblage({kPi / 4, n, 1.0, Scenario::OneSided});
        EXPECT_LE(max_element_diff(d, ghz_assemblage(Scenario::OneSided)), 1e-12);
    }
}

TEST(Distill, identity_filter_returns_input) {
    const auto d = distilled_assemblage({kPi / 8, 2, 1.0, Scenario::OneSided});
    EXPECT_LE(max_element_diff(d, gghz_assemblage_1sdi(kPi / 8)), 1e-15);
}

TEST(Distill, two_copy_matches_explicit_matrices) {
    for (double t : linspace(0, kPi / 4, 12)) {
        for (double k : linspace(0, 1, 12)) {
            const auto d1 = distilled_assemblage({t, 2, k, Scenario::OneSided});
            EXPECT_LE(max_element_diff(d1, two_copy_1sdi_oracle(t, k)), 1e-12) << t << " " << k;
            EXPECT_TRUE(validate(d1).ok());

            const auto d2 = distilled_assemblage({t, 2, k, Scenario::TwoSided});
            for (auto [a, b] : {std::pair{0, 0}, {1, 1}}) {
                EXPECT_LE(d2.at(a, b, 0, 0).max_abs_diff(two_copy_2sdi_xx_oracle(t, k)), 1e-12);
            }
            EXPECT_TRUE(validate(d2).ok());
        }
    }
}

TEST(Distill, top_left_entry_at_pi_over_8) {
    const double t = kPi / 8;
    const double k = 1 / (2 * std::pow(std::cos(t), 2));
    const auto d = distilled_assemblage({t, 2, k, Scenario::OneSided});
    // (k^2 c^2 s^2 + c^4) / 2 evaluated by hand: 0.3857233.
    EXPECT_NEAR(d.at(0, 0)(0, 0).real(), 0.385723305, 1e-9);
}

TEST(Distill, n_copy_weights) {
    EXPECT_NEAR(n_copy_success_probability(0.3, 2), 0.3, 1e-15);
    EXPECT_NEAR(n_copy_success_probability(0.3, 4), 1 - std::pow(0.7, 3), 1e-15);
    EXPECT_EQ(n_copy_success_probability(1.0, 7), 1.0);
    EXPECT_EQ(code_of([] { n_copy_success_probability(0.5, 1); }), ErrorCode::CopiesOutOfRange);
}

TEST(Distill, zero_success_falls_back_to_input) {
    const auto d = distilled_assemblage({0.0, 3, 0.0, Scenario::OneSided});
    EXPECT_LE(max_element_diff(d, gghz_assemblage_1sdi(0.0)), 1e-15);
}

TEST(ClosedForms, optimal_kappa) {
    EXPECT_NEAR(two_copy_optimal_kappa(kPi / 4), 1.0, 1e-15);
    EXPECT_NEAR(two_copy_optimal_kappa(0.0), 0.5, 1e-15);
    EXPECT_NEAR(two_copy_optimal_kappa(kPi / 8), 0.58579, 1e-5);
    for (double t : linspace(0, kPi / 4, 20)) {
        const double k = two_copy_optimal_kappa(t);
        EXPECT_GE(k, 0.5);
        EXPECT_LE(k, 1.0 + 1e-15);
    }
    EXPECT_EQ(code_of([] { two_copy_optimal_kappa(1.0); }), ErrorCode::ThetaOutOfRange);
}

TEST(ClosedForms, asymptotic_kappa) {
    EXPECT_NEAR(asymptotic_kappa(kPi / 4), 1.0, 1e-15);
    EXPECT_EQ(asymptotic_kappa(0.0), 0.0);
    EXPECT_NEAR(asymptotic_kappa(kPi / 8), 0.41421, 1e-5);
}

TEST(ClosedForms, two_copy_fidelity_values) {
    EXPECT_NEAR(two_copy_optimal_fidelity(kPi / 4), 1.0, 1e-15);
    EXPECT_NEAR(two_copy_fidelity_closed_form(kPi / 4, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(two_copy_optimal_fidelity(kPi / 8), 0.951488, 1e-6);
    // tan-theta filter, two copies: sqrt(1 - (1 - sin 0.36) cos 0.36 / 2).
    EXPECT_NEAR(two_copy_fidelity_closed_form(0.18, std::tan(0.18)), 0.834804, 1e-6);
    EXPECT_NEAR(two_copy_fidelity_closed_form(0.18, std::tan(0.18)),
                kappa_prime_ncopy_fidelity(0.18, 2), 1e-14);
}

TEST(ClosedForms, kappa_prime_n_copies) {
    EXPECT_NEAR(kappa_prime_ncopy_fidelity(kPi / 4, 7), 1.0, 1e-15);
    EXPECT_NEAR(kappa_prime_ncopy_fidelity(kPi / 8, 2), 0.946809, 1e-6);
    EXPECT_NEAR(kappa_prime_ncopy_fidelity(kPi / 8, 10), 0.996759, 1e-6);
    double prev = 0;
    for (int n : {2, 5, 10, 50, 200}) {
        const double f = kappa_prime_ncopy_fidelity(0.3, n);
        EXPECT_GT(f, prev);
        prev = f;
    }
    EXPECT_NEAR(prev, 1.0, 1e-12);
}

TEST(ClosedForms, generic_pipeline_agrees) {
    for (double t : linspace(0, kPi / 4, 10)) {
        for (double k : linspace(0, 1, 10)) {
            const auto d = distilled_assemblage({t, 2, k, Scenario::OneSided});
            EXPECT_NEAR(assemblage_fidelity(d, ghz_assemblage(Scenario::OneSided)),
                        two_copy_fidelity_closed_form(t, k), 1e-10);
        }
        for (int n : {2, 5, 10, 50}) {
            if (t == 0.0) {
                continue;
            }
            const auto d = distilled_assemblage({t, n, std::tan(t), Scenario::OneSided});
            EXPECT_NEAR(assemblage_fidelity(d, ghz_assemblage(Scenario::OneSided)),
                        kappa_prime_ncopy_fidelity(t, n), 1e-10);
        }
    }
}

TEST(FidelityStructure, non_z_contexts_attain_the_minimum_for_two_copies) {
    for (double t : linspace(0.02, kPi / 4, 10)) {
        for (double k : linspace(0, 1, 11)) {
            const auto d = distilled_assemblage({t, 2, k, Scenario::OneSided});
            const auto sums = context_fidelities(d, ghz_assemblage(Scenario::OneSided));
            EXPECT_LE(sums[0], sums[2] + 1e-12) << t << " " << k;
            EXPECT_NEAR(sums[0], sums[1], 1e-12);
        }
    }
}

TEST(FidelityStructure, one_and_two_sided_agree) {
    for (double t : linspace(0, kPi / 4, 10)) {
        for (double k : linspace(0, 1, 10)) {
            const double f1 = assemblage_fidelity(distilled_assemblage({t, 2, k, Scenario::OneSided}),
                                                  ghz_assemblage(Scenario::OneSided));
            const double f2 = assemblage_fidelity(distilled_assemblage({t, 2, k, Scenario::TwoSided}),
                                                  ghz_assemblage(Scenario::TwoSided));
            EXPECT_NEAR(f1, f2, 1e-10);
        }
    }
}

TEST(FidelityStructure, objective_is_unimodal_in_kappa) {
    for (int n : {2, 5, 10, 50}) {
        for (double t : {0.05, 0.2, 0.4, 0.7}) {
            const auto src = gghz_assemblage_1sdi(t);
            const auto target = ghz_assemblage(Scenario::OneSided);
            bool descending = false;
            double prev = -1;
            for (double k : linspace(0, 1, 401)) {
                const double f = assemblage_fidelity(distill(src, k, n), target);
                if (descending) {
                    EXPECT_LE(f, prev + 1e-13) << n << " " << t << " " << k;
                } else if (f < prev - 1e-13) {
                    descending = true;
                }
                prev = f;
            }
        }
    }
}

TEST(OptimizeKappa, two_copy_closed_form) {
    for (int i = 1; i <= 20; ++i) {
        const double t = i * kPi / 80;
        const auto r = optimize_kappa(t, 2, Scenario::OneSided);
        EXPECT_NEAR(r.kappa_star, two_copy_optimal_kappa(t), 1e-6) << t;
        EXPECT_NEAR(r.f_star, two_copy_optimal_fidelity(t), 1e-9) << t;
        EXPECT_LE(r.bracket_width, 1e-8);
        EXPECT_GE(r.kappa_star, 0.0);
        EXPECT_LE(r.kappa_star, 1.0);
    }
}

TEST(OptimizeKappa, ghz_needs_no_filter) {
    for (int n : {2, 10}) {
        const auto r = optimize_kappa(kPi / 4, n, Scenario::OneSided);
        EXPECT_NEAR(r.f_star, 1.0, 1e-12);
        EXPECT_EQ(r.kappa_star, 1.0);
    }
}

TEST(OptimizeKappa, flat_objective_prefers_larger_kappa) {
    // At theta = 0 nothing can be distilled: every kappa gives sqrt(1/2).
    const auto r = optimize_kappa(0.0, 2, Scenario::OneSided);
    EXPECT_NEAR(r.f_star, std::sqrt(0.5), 1e-12);
    EXPECT_EQ(r.kappa_star, 1.0);
}

TEST(OptimizeKappa, many_copies_approach_tan_theta) {
    for (double t : linspace(0.3, kPi / 4, 6)) {
        const auto r = optimize_kappa(t, 100, Scenario::OneSided);
        EXPECT_NEAR(r.kappa_star, std::tan(t), 0.05) << t;
    }
}

TEST(OptimizeKappa, dominates_tan_theta_and_identity) {
    for (int n : {2, 5, 10, 50}) {
        for (double t : linspace(0.05, kPi / 4, 6)) {
            const auto r = optimize_kappa(t, n, Scenario::OneSided);
            EXPECT_GE(r.f_star, kappa_prime_ncopy_fidelity(t, n) - 1e-9) << n << " " << t;
            EXPECT_GE(r.f_star, assemblage_fidelity(gghz_assemblage_1sdi(t),
                                                    ghz_assemblage(Scenario::OneSided)) - 1e-9);
        }
    }
}

TEST(OptimizeKappa, arbitrary_noisy_assemblage) {
    // A GGHZ assemblage mixed with its own Z-context copied into every
    // setting: valid but not of the GGHZ family.
    const auto gghz_asm = gghz_assemblage_1sdi(0.35);
    std::vector<HermitianMatrix> flat(6);
    for (int x = 0; x < 3; ++x) {
        flat[Assemblage::index(0, x)] = gghz_asm.at(0, 2);
        flat[Assemblage::index(1, x)] = gghz_asm.at(1, 2);
    }
    const auto noisy = mix(0.8, gghz_asm, Assemblage(Scenario::OneSided, flat));
    ASSERT_TRUE(validate(noisy).ok());

    const auto target = ghz_assemblage(Scenario::OneSided);
    const auto r = optimize_kappa(noisy, 3, target);
    // Brute-force oracle on a grid finer than the optimizer's scan.
    double brute = 0;
    for (double k : linspace(0, 1, 4001)) {
        brute = std::max(brute, assemblage_fidelity(distill(noisy, k, 3), target));
    }
    EXPECT_GE(r.f_star, brute - 1e-9);
    EXPECT_NEAR(r.f_star, assemblage_fidelity(distill(noisy, r.kappa_star, 3), target), 1e-9);
}

TEST(OptimizeKappa, two_sided_matches_one_sided) {
    for (double t : {0.1, 0.4}) {
        const auto r1 = optimize_kappa(t, 2, Scenario::OneSided);
        const auto r2 = optimize_kappa(t, 2, Scenario::TwoSided);
        EXPECT_NEAR(r1.kappa_star, r2.kappa_star, 1e-6);
        EXPECT_NEAR(r1.f_star, r2.f_star, 1e-10);
    }
}

TEST(OptimizeKappa, errors) {
    EXPECT_EQ(code_of([] { optimize_kappa(0.3, 1, Scenario::OneSided); }),
              ErrorCode::CopiesOutOfRange);
    EXPECT_EQ(code_of([] {
                  optimize_kappa(gghz_assemblage_1sdi(0.3), 2, ghz_assemblage(Scenario::TwoSided));
              }),
              ErrorCode::ScenarioMismatch);
}
