#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "rankone/herglotz.hpp"
#include "rankone/oscillator.hpp"
#include "rankone/sampling.hpp"
#include "support.hpp"

using namespace rankone;

namespace {

void expect_code(auto&& f, ErrorCode code) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

}  // namespace

TEST(Oscillator, Model) {
    const auto raw = oscillator_model(3, false);
    EXPECT_EQ(raw, SpectralModel({1.0, 3.0, 5.0}, {1.0, 1.0, 0.5}));
    const auto unit = oscillator_model(3, true);
    EXPECT_NEAR(unit.weights()[0], 0.4, 1e-15);
    EXPECT_NEAR(unit.weights()[2], 0.2, 1e-15);
    expect_code([] { oscillator_model(1, false); }, ErrorCode::DimensionMismatch);
    EXPECT_NEAR(oscillator_model(25, false).mu_norm_sq(), std::numbers::e, 1e-15);
}

TEST(Oscillator, SeriesValues) {
    EXPECT_NEAR(osc_F_series(0.0, 3).value.real(), 1.0 + 1.0 / 3.0 + 0.1, 1e-15);
    const long double oracle = testing_support::integral_exp_t_squared();
    EXPECT_NEAR(osc_F_series(0.0, 30).value.real(), static_cast<double>(oracle), 1e-12);
    EXPECT_NEAR(osc_F_series(0.0, 30).value.real(), 1.4626517, 1e-7);
    EXPECT_NEAR(osc_F_series(2.0, 30).value.real(), 0.207020, 1e-5);
    expect_code([] { osc_F_series(3.0, 10); }, ErrorCode::PoleProximity);
}

TEST(Oscillator, SeriesTailBoundHolds) {
    for (Complex z : {Complex{0.0, 0.0}, Complex{2.0, 0.0}, Complex{4.5, 1.0}, Complex{-3.0, 0.2}}) {
        for (std::size_t terms : {3u, 6u, 10u}) {
            const SeriesValue s = osc_F_series(z, terms);
            const auto exact = testing_support::oscillator_series_oracle(z);
            const double gap = std::abs(std::complex<double>(exact) - s.value);
            EXPECT_LE(gap, s.tail_bound);
        }
    }
}

TEST(Oscillator, SeriesEqualsTruncatedModel) {
    const auto model = oscillator_model(12, false);
    for (Complex z : {Complex{0.0, 1.0}, Complex{7.5, -0.4}, Complex{30.0, 0.01}}) {
        EXPECT_LE(std::abs(weyl(model, z).F - osc_F_series(z, 12).value), 1e-14 * std::abs(weyl(model, z).F));
    }
}

TEST(Oscillator, IntegralValues) {
    EXPECT_NEAR(osc_F_integral(0.0, 512).real(), 1.462652, 1e-6);
    EXPECT_NEAR(osc_F_integral(2.0, 512).real(), 0.207020, 1e-5);
    expect_code([] { osc_F_integral(3.0, 512); }, ErrorCode::PoleProximity);
    expect_code([] { osc_F_integral(-1.0, 512); }, ErrorCode::PoleProximity);
    expect_code([] { osc_F_integral(Complex{0.0, 40.0}, 8); }, ErrorCode::QuadratureNonConvergence);
}

TEST(Oscillator, IntegralMatchesSeriesOracle) {
    for (Complex z : {Complex{0.0, 0.0}, Complex{2.0, 0.0}, Complex{-2.0, 0.0}, Complex{5.2, 1.5}, Complex{9.0, -2.0}}) {
        const auto exact = std::complex<double>(testing_support::oscillator_series_oracle(z));
        EXPECT_LE(std::abs(osc_F_integral(z, 1024) - exact), 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST(Oscillator, MuPointwise) {
    EXPECT_NEAR(mu_pointwise(0.0), std::pow(std::numbers::pi, -0.25) * std::exp(-0.5), 1e-16);
    EXPECT_NEAR(mu_pointwise(0.0), 0.455581, 1e-6);
    // The exponent at sqrt(2) is -(2 - 4 + 1)/2 = +1/2.
    EXPECT_NEAR(mu_pointwise(std::numbers::sqrt2), std::pow(std::numbers::pi, -0.25) * std::exp(0.5), 1e-15);
    EXPECT_LT(mu_pointwise(40.0), 1e-300);
    EXPECT_LT(mu_pointwise(-40.0), 1e-300);
    EXPECT_GT(mu_pointwise(-5.0), 0.0);
}

TEST(Oscillator, HermiteOverlaps) {
    EXPECT_NEAR(hermite_overlap(0, 64), 1.0, 1e-8);
    EXPECT_NEAR(hermite_overlap(2, 64), 1.0 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(hermite_overlap(5, 64), 1.0 / std::sqrt(120.0), 1e-8);
    double factorial = 1.0;
    for (std::size_t n = 0; n <= 20; ++n) {
        if (n > 0) factorial *= static_cast<double>(n);
        EXPECT_NEAR(hermite_overlap(n, 80), 1.0 / std::sqrt(factorial), 1e-8) << "n = " << n;
    }
    expect_code([] { hermite_overlap(20, 4); }, ErrorCode::QuadratureNonConvergence);
}

TEST(Oscillator, SamplingAtTheUnperturbedLevels) {
    const auto model = oscillator_model(12, false);
    Draws draws(51);
    const StateVector phi = draws.unit_state(12);
    const SampleSet s = sample(model, phi, 0.0);
    for (std::size_t n = 0; n < 12; ++n) EXPECT_EQ(s.nodes()[n], 2.0 * static_cast<double>(n) + 1.0);
    for (int p = 0; p < 20; ++p) {
        const Complex z = draws.point(model);
        EXPECT_LE(relative_error(reconstruct(s, z), transform(model, phi, z)), 1e-8);
    }
}
