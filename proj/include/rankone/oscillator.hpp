#pragma once

// The harmonic oscillator -d^2/dx^2 + x^2 with eigenvalues 2n+1 and the
// cyclic vector mu(x) = pi^{-1/4} exp(-(x^2 - 2 sqrt(2) x + 1)/2), whose
// Hermite coefficients are 1/sqrt(n!).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "rankone/detail/compensated.hpp"
#include "rankone/detail/gauss_legendre.hpp"
#include "rankone/errors.hpp"
#include "rankone/jacobi.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone {

/// Relative agreement required between a quadrature and its half-size rule.
inline constexpr double kQuadratureRefinementTolerance = 1e-10;

/// Levels 0..levels-1 with eigenvalues 2n+1. Raw weights are 1/n!, so
/// ||mu||^2 tends to e; `normalized` rescales them to sum to one.
inline SpectralModel oscillator_model(std::size_t levels, bool normalized) {
    if (levels < 2) throw Error(ErrorCode::DimensionMismatch, "the oscillator model needs at least two levels");
    std::vector<double> eigenvalues(levels);
    std::vector<double> weights(levels);
    double inv_factorial = 1.0;
    for (std::size_t n = 0; n < levels; ++n) {
        if (n > 0) inv_factorial /= static_cast<double>(n);
        eigenvalues[n] = 2.0 * static_cast<double>(n) + 1.0;
        weights[n] = inv_factorial;
    }
    SpectralModel model(std::move(eigenvalues), std::move(weights));
    return normalized ? normalize(model) : model;
}

struct SeriesValue {
    Complex value;
    double tail_bound;  // bound on the omitted terms n >= terms
};

/// Partial sum of F(z) = sum_n 1 / (n! (2n + 1 - z)).
inline SeriesValue osc_F_series(Complex z, std::size_t terms) {
    if (terms < 1) throw Error(ErrorCode::DimensionMismatch, "at least one term is required");
    const double radius = kExclusionFactor * std::max(1.0, 2.0 * static_cast<double>(terms - 1));
    detail::CompensatedComplexSum s;
    double inv_factorial = 1.0;
    for (std::size_t n = 0; n < terms; ++n) {
        if (n > 0) inv_factorial /= static_cast<double>(n);
        const double pole = 2.0 * static_cast<double>(n) + 1.0;
        if (std::abs(z - pole) <= radius) {
            throw Error(ErrorCode::PoleProximity, "z is at the pole " + std::to_string(pole));
        }
        s.add(inv_factorial / (pole - z));
    }
    // Tail: sum_{n>=T} 1/(n! |2n+1-z|) <= (1/dist) sum_{n>=T} 1/n! <= 2 / (T! dist).
    const double first_tail = 2.0 * static_cast<double>(terms) + 1.0;
    const double nearest_odd = 2.0 * std::round((z.real() - 1.0) / 2.0) + 1.0;
    double dist = HUGE_VAL;
    for (double candidate : {nearest_odd - 2.0, nearest_odd, nearest_odd + 2.0}) {
        dist = std::min(dist, std::abs(z - std::max(first_tail, candidate)));
    }
    const double inv_t_factorial = inv_factorial / static_cast<double>(terms);
    const double tail = dist > 0.0 ? 2.0 * inv_t_factorial / dist : HUGE_VAL;
    return {s.value(), tail};
}

namespace detail {

inline Complex oscillator_contour_integral(Complex z, std::size_t points) {
    const QuadratureRule rule = gauss_legendre(points, -std::numbers::pi, std::numbers::pi);
    const Complex i{0.0, 1.0};
    CompensatedComplexSum s;
    for (std::size_t k = 0; k < points; ++k) {
        const double theta = rule.nodes[k];
        s.add(rule.weights[k] * std::exp(-std::cos(theta) + i * std::sin(theta) - i * (1.0 - z) * theta / 2.0));
    }
    return s.value();
}

}  // namespace detail

/// Closed integral form
///   F(z) = (1 / (4 cos(pi z / 2))) * int_{-pi}^{pi} exp(-cos t + i sin t) exp(-i (1 - z) t / 2) dt
/// by Gauss-Legendre quadrature, checked against the rule of half the size.
/// Points where cos(pi z / 2) vanishes are refused, including the negative
/// odd integers where the representation is 0/0.
inline Complex osc_F_integral(Complex z, std::size_t quad_points) {
    const Complex cosine = std::cos(std::numbers::pi * z / 2.0);
    if (std::abs(cosine) <= kExclusionFactor) {
        throw Error(ErrorCode::PoleProximity, "cos(pi z / 2) vanishes at z = " + std::to_string(z.real()));
    }
    if (quad_points < 2) throw Error(ErrorCode::QuadratureNonConvergence, "need at least two quadrature points");
    const Complex fine = detail::oscillator_contour_integral(z, quad_points);
    const Complex coarse = detail::oscillator_contour_integral(z, quad_points / 2);
    if (std::abs(fine - coarse) > kQuadratureRefinementTolerance * std::max(1.0, std::abs(fine))) {
        throw Error(ErrorCode::QuadratureNonConvergence,
                    "quadrature with " + std::to_string(quad_points) + " points has not converged");
    }
    return fine / (4.0 * cosine);
}

/// mu(x) = pi^{-1/4} exp(-(x^2 - 2 sqrt(2) x + 1) / 2).
inline double mu_pointwise(double x) {
    return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * (x * x - 2.0 * std::numbers::sqrt2 * x + 1.0));
}

namespace detail {

// Gauss-Hermite rule (weight e^{-x^2}) from the Jacobi matrix of the
// normalized Hermite recurrence: q_k = 0, b_k = sqrt(k/2).
inline QuadratureRule gauss_hermite(std::size_t points) {
    std::vector<double> b(points);
    for (std::size_t k = 1; k <= points; ++k) b[k - 1] = std::sqrt(static_cast<double>(k) / 2.0);
    const SpectralModel model = truncate(JacobiParams(std::vector<double>(points, 0.0), std::move(b)), points);
    QuadratureRule rule{{model.eigenvalues().begin(), model.eigenvalues().end()},
                        {model.weights().begin(), model.weights().end()}};
    for (double& w : rule.weights) w *= std::sqrt(std::numbers::pi);
    return rule;
}

// <phi_n, mu> with phi_n(x) = h_n(x) e^{-x^2/2}; the Gaussian factors combine
// into the Hermite weight, leaving h_n(x) pi^{-1/4} e^{sqrt(2) x - 1/2}.
inline double hermite_overlap_with(const QuadratureRule& rule, std::size_t n) {
    const double h0 = std::pow(std::numbers::pi, -0.25);
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        double prev = 0.0;
        double cur = h0;
        for (std::size_t k = 0; k < n; ++k) {
            const double kk = static_cast<double>(k);
            const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
        s.add(rule.weights[i] * cur * h0 * std::exp(std::numbers::sqrt2 * x - 0.5));
    }
    return s.value();
}

}  // namespace detail

/// <phi_n, mu> by Gauss-Hermite quadrature; equals 1/sqrt(n!).
inline double hermite_overlap(std::size_t n, std::size_t quad_points) {
    if (quad_points < 2) throw Error(ErrorCode::QuadratureNonConvergence, "need at least two quadrature points");
    const double fine = detail::hermite_overlap_with(detail::gauss_hermite(quad_points), n);
    const std::size_t half = std::max<std::size_t>(2, quad_points / 2);
    const double coarse = detail::hermite_overlap_with(detail::gauss_hermite(half), n);
    if (std::abs(fine - coarse) > kQuadratureRefinementTolerance * std::max(1.0, std::abs(fine))) {
        throw Error(ErrorCode::QuadratureNonConvergence,
                    "Gauss-Hermite with " + std::to_string(quad_points) + " points has not converged");
    }
    return fine;
}

}  // namespace rankone
