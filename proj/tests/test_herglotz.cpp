#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "rankone/herglotz.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/sampling.hpp"
#include "support.hpp"

using namespace rankone;

namespace {

const SpectralModel m2({0.0, 2.0}, {0.5, 0.5});
const Complex I{0.0, 1.0};

void expect_complex_near(Complex a, Complex b, double tol) {
    EXPECT_NEAR(a.real(), b.real(), tol);
    EXPECT_NEAR(a.imag(), b.imag(), tol);
}

void expect_code(auto&& f, ErrorCode code) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

}  // namespace

TEST(Weyl, TwoLevelValues) {
    const WeylValue v = weyl(m2, I);
    expect_complex_near(v.F, {0.2, 0.6}, 1e-15);
    expect_complex_near(v.F_prime, {-0.44, 0.08}, 1e-15);
    const WeylValue mid = weyl(m2, 1.0);
    expect_complex_near(mid.F, 0.0, 1e-16);
    expect_complex_near(mid.F_prime, 1.0, 1e-15);
}

TEST(Weyl, RefusesEigenvalues) {
    expect_code([] { weyl(m2, 2.0 + 1e-15); }, ErrorCode::PoleProximity);
    expect_code([] { weyl(m2, 0.0); }, ErrorCode::PoleProximity);
}

TEST(Weyl, PerturbedTwoLevel) {
    const PerturbedWeylValue v = weyl_h(m2, 1.0, I);
    expect_complex_near(v.F_h, Complex(1.0, 1.0) / 3.0, 1e-15);
    expect_complex_near(v.G_h, {1.5, -1.5}, 1e-15);
    expect_complex_near(weyl_h(m2, 0.0, I).F_h, {0.2, 0.6}, 1e-15);
    expect_code([] { weyl_h(m2, 1.0, 1.0); }, ErrorCode::ZeroOfF);
    expect_code([] { weyl_h(m2, HUGE_VAL, I); }, ErrorCode::InfiniteCoupling);
}

TEST(Weyl, XiNormAtPerturbedEigenvalues) {
    EXPECT_NEAR(xi_norm_sq(m2, (3.0 - std::sqrt(5.0)) / 2.0), 3.618033988749895, 1e-12);
    EXPECT_NEAR(xi_norm_sq(m2, (3.0 + std::sqrt(5.0)) / 2.0), 1.381966011250105, 1e-12);
    expect_code([] { xi_norm_sq(m2, 1.0); }, ErrorCode::ZeroOfF);
    expect_code([] { xi(m2, 1.0); }, ErrorCode::ZeroOfF);
}

TEST(Weyl, XiIsAnEigenvectorOfTheMatchingCoupling) {
    const double x = 0.5;
    const double h = -1.0 / weyl(m2, x).F.real();
    const XiVector v = xi(m2, x);
    const testing_support::DenseOracle oracle(m2, 3);
    const StateVector applied = oracle.apply_perturbed(h, v.as_state());
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(std::abs(applied[j] - x * v.coords[j]), 1e-9);
    EXPECT_NEAR(v.norm_sq(), xi_norm_sq(m2, x), 1e-12);
}

TEST(Weyl, AgreesWithDenseResolvent) {
    Draws draws(101);
    for (int trial = 0; trial < 40; ++trial) {
        const auto model = testing_support::random_model(draws);
        const testing_support::DenseOracle oracle(model, 1000 + trial);
        for (int p = 0; p < 5; ++p) {
            const Complex z = draws.point(model);
            const Complex expected = oracle.weyl(z);
            EXPECT_LE(std::abs(weyl(model, z).F - expected), 1e-11 * std::abs(expected));
        }
    }
}

TEST(Weyl, HerglotzAndConjugateSymmetry) {
    Draws draws(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto model = testing_support::random_model(draws);
        const Complex z = draws.point(model);
        const Complex up{z.real(), std::abs(z.imag())};
        EXPECT_GT(weyl(model, up).F.imag(), 0.0);
        for (double h : {-3.0, -0.2, 0.4, 5.0}) {
            EXPECT_GT(weyl_h(model, h, up).F_h.imag(), 0.0);
        }
        const Complex a = weyl(model, z).F;
        const Complex b = weyl(model, std::conj(z)).F;
        EXPECT_LE(std::abs(a - std::conj(b)), 1e-15 * std::abs(a));
    }
}

TEST(Weyl, FirstResolventIdentity) {
    // F(z) - F(w) = (z - w) <(A - conj z)^{-1} mu, (A - w)^{-1} mu>
    Draws draws(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = testing_support::random_model(draws);
        const testing_support::DenseOracle oracle(model, 50 + trial);
        const Complex z = draws.point(model);
        const Complex w = draws.point(model);
        const Complex lhs = weyl(model, z).F - weyl(model, w).F;
        const Complex rhs = (z - w) * oracle.resolvent_mu(std::conj(z)).dot(oracle.resolvent_mu(w));
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (std::abs(weyl(model, z).F) + std::abs(weyl(model, w).F)));
    }
}

TEST(Weyl, DerivativeMatchesDifferenceQuotient) {
    Draws draws(9);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = testing_support::random_model(draws);
        const Complex z = draws.point(model);
        const double step = 1e-5;
        const Complex numeric = (weyl(model, z + step).F - weyl(model, z - step).F) / (2.0 * step);
        EXPECT_LE(std::abs(numeric - weyl(model, z).F_prime), 1e-6 * std::max(1.0, std::abs(numeric)));
    }
}

TEST(Weyl, AronszajnKreinMatchesPerturbedModel) {
    Draws draws(10);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = testing_support::random_model(draws);
        const double h = draws.coupling();
        const auto moved = perturbed_model(model, h);
        for (int p = 0; p < 5; ++p) {
            const Complex z = draws.point(model);
            const Complex direct = weyl(moved, z).F;
            EXPECT_LE(std::abs(weyl_h(model, h, z).F_h - direct), 1e-10 * std::abs(direct));
        }
    }
}

TEST(Weyl, XiNormBoundsTheTransform) {
    Draws draws(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = testing_support::random_model(draws);
        const StateVector phi = draws.unit_state(model.dimension());
        const Complex z = draws.point(model);
        const double bound = std::sqrt(xi(model, z).norm_sq() * phi.norm_sq());
        EXPECT_LE(std::abs(transform(model, phi, z)), bound * (1.0 + 1e-12));
        EXPECT_NEAR(std::abs(transform(model, xi(model, z).as_state(), z)), xi(model, z).norm_sq(),
                    1e-10 * xi(model, z).norm_sq());
    }
}
