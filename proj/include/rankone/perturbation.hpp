#pragma once

// Spectra and spectral weights of A_h = A + h<mu, .>mu, including the
// infinite coupling A_infinity, and the compression of A to mu's orthogonal
// complement as an independent route to Sp(A_infinity).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rankone/detail/compensated.hpp"
#include "rankone/detail/root_finding.hpp"
#include "rankone/detail/symmetric_eigen.hpp"
#include "rankone/errors.hpp"
#include "rankone/herglotz.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone {

/// Residual |1 + hF(x)| a node of a finite coupling must meet.
inline constexpr double kSecularTolerance = 1e-10;

/// Nodes handed to node_weights must lie within this relative distance of a
/// root of the secular equation.
inline constexpr double kNodeConsistencyTolerance = 1e-8;

namespace detail {

inline double real_scale(const SpectralModel& model) {
    const auto lambda = model.eigenvalues();
    return std::max({1.0, std::abs(lambda.front()), std::abs(lambda.back())});
}

// F(x) and F'(x) at a real point without proximity checks.
inline ValueAndSlope real_weyl(const SpectralModel& model, double x) {
    CompensatedSum f;
    CompensatedSum fp;
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        const double r = 1.0 / (lambda[j] - x);
        f.add(w[j] * r);
        fp.add(w[j] * r * r);
    }
    return {f.value(), fp.value()};
}

inline std::vector<double> zeros_of_weyl(const SpectralModel& model) {
    const auto lambda = model.eigenvalues();
    const double scale = real_scale(model);
    std::vector<double> out;
    out.reserve(lambda.size() - 1);
    for (std::size_t j = 0; j + 1 < lambda.size(); ++j) {
        out.push_back(increasing_root([&](double x) { return real_weyl(model, x); }, lambda[j], lambda[j + 1], scale));
    }
    return out;
}

// Newton on F from an eigenvalue estimate of A_infinity, keeping the iterate
// with the smallest |F|. An eigensolver is only accurate to a few ulps of the
// spread, which can leave |F(x)| well above its rounding level.
inline double polish_zero_of_weyl(const SpectralModel& model, double x) {
    double best = x;
    double best_abs = std::abs(real_weyl(model, x).value);
    for (int step = 0; step < 3 && best_abs > 0.0; ++step) {
        const ValueAndSlope v = real_weyl(model, x);
        if (!(v.slope > 0.0)) break;
        x -= v.value / v.slope;
        const double a = std::abs(real_weyl(model, x).value);
        if (!(a < best_abs)) break;
        best = x;
        best_abs = a;
    }
    return best;
}

// Solutions of 1/h + F(x) = 0. This has the roots of 1 + hF and is increasing
// in x on every interval between poles for either sign of h.
inline std::vector<double> secular_roots(const SpectralModel& model, double h) {
    const auto lambda = model.eigenvalues();
    const double scale = real_scale(model);
    const double inv_h = 1.0 / h;
    auto secular = [&](double x) {
        const ValueAndSlope v = real_weyl(model, x);
        return ValueAndSlope{inv_h + v.value, v.slope};
    };

    std::vector<double> out;
    out.reserve(lambda.size());

    // The exterior root moves by at most |h| * ||mu||^2 from the spectrum.
    const double reach = std::abs(h) * model.mu_norm_sq();
    if (h < 0.0) {
        const double left = lambda.front() - reach;
        if (!(left < lambda.front()) || secular(left).value > 0.0) {
            throw Error(ErrorCode::BracketFailure, "exterior root not enclosed below the spectrum");
        }
        out.push_back(increasing_root(secular, left, lambda.front(), scale));
    }
    for (std::size_t j = 0; j + 1 < lambda.size(); ++j) {
        out.push_back(increasing_root(secular, lambda[j], lambda[j + 1], scale));
    }
    if (h > 0.0) {
        const double right = lambda.back() + reach;
        if (!(right > lambda.back()) || secular(right).value < 0.0) {
            throw Error(ErrorCode::BracketFailure, "exterior root not enclosed above the spectrum");
        }
        out.push_back(increasing_root(secular, lambda.back(), right, scale));
    }
    for (std::size_t j = 1; j < out.size(); ++j) {
        if (!(out[j - 1] < out[j])) {
            throw Error(ErrorCode::BracketFailure, "roots collapsed onto each other; spectrum too dense for double");
        }
    }
    return out;
}

}  // namespace detail

/// Sp(A_h) for a finite coupling, or Sp(A_infinity) = zeros of F.
inline std::vector<double> perturbed_spectrum(const SpectralModel& model, const Coupling& coupling) {
    if (coupling.is_infinite()) return detail::zeros_of_weyl(model);
    const double h = coupling.value();
    if (h == 0.0) return {model.eigenvalues().begin(), model.eigenvalues().end()};
    return detail::secular_roots(model, h);
}

/// |1 + hF(x)| for finite couplings, |F(x)| for the infinite one.
inline double secular_residual(const SpectralModel& model, const Coupling& coupling, double x) {
    const double f = detail::real_weyl(model, x).value;
    if (coupling.is_infinite()) return std::abs(f);
    return std::abs(1.0 + coupling.value() * f);
}

/// Residual bound for a zero x of F: 1e-12 * max_j w_j / (width of the gap
/// containing x).
inline double infinite_coupling_tolerance(const SpectralModel& model, double x) {
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    const double max_w = *std::max_element(w.begin(), w.end());
    const auto upper = std::upper_bound(lambda.begin(), lambda.end(), x);
    double gap = model.spread();
    if (upper != lambda.begin() && upper != lambda.end()) gap = *upper - *(upper - 1);
    return 1e-12 * max_w / gap;
}

/// Point masses m_h({x_j}) = ||xi(x_j)||^{-2} of the spectral measure of A_h.
/// The nodes must be Sp(A_h); inconsistent nodes are rejected.
inline std::vector<double> node_weights(const SpectralModel& model, double h, std::span<const double> nodes) {
    if (!std::isfinite(h)) {
        throw Error(ErrorCode::InfiniteCoupling, "node weights are only defined for finite couplings");
    }
    const auto lambda = model.eigenvalues();
    std::vector<double> out;
    out.reserve(nodes.size());
    if (h == 0.0) {
        for (double x : nodes) {
            const auto it = std::lower_bound(lambda.begin(), lambda.end(), x);
            if (it == lambda.end() || *it != x) {
                throw Error(ErrorCode::InconsistentNodes, "node " + std::to_string(x) + " is not an eigenvalue of A");
            }
            out.push_back(model.weights()[static_cast<std::size_t>(it - lambda.begin())]);
        }
        return out;
    }
    std::vector<double> reference;  // Sp(A_h), computed only if needed
    for (double x : nodes) {
        if (std::binary_search(lambda.begin(), lambda.end(), x)) {
            throw Error(ErrorCode::PoleProximity, "node " + std::to_string(x) + " is an eigenvalue of A");
        }
        // Newton estimate of the distance to the nearest root of 1/h + F. When
        // the root sits within rounding of a pole with a tiny weight the
        // estimate is meaningless, so fall back to comparing with Sp(A_h).
        const double tolerance = kNodeConsistencyTolerance * std::max(1.0, std::abs(x));
        const detail::ValueAndSlope v = detail::real_weyl(model, x);
        if (!(std::abs(1.0 / h + v.value) <= tolerance * v.slope)) {
            if (reference.empty()) reference = detail::secular_roots(model, h);
            const auto it = std::lower_bound(reference.begin(), reference.end(), x);
            double distance = HUGE_VAL;
            if (it != reference.end()) distance = *it - x;
            if (it != reference.begin()) distance = std::min(distance, x - *(it - 1));
            if (!(distance <= tolerance)) {
                throw Error(ErrorCode::InconsistentNodes,
                            "node " + std::to_string(x) + " is not in Sp(A_h) for h = " + std::to_string(h));
            }
        }
        out.push_back(1.0 / detail::xi_norm_sq_unchecked(model, x));
    }
    return out;
}

/// Spectral model of A_h with the same cyclic vector mu.
inline SpectralModel perturbed_model(const SpectralModel& model, double h) {
    if (h == 0.0) return model;
    auto nodes = perturbed_spectrum(model, Coupling::finite(h));
    auto weights = node_weights(model, h, nodes);
    return SpectralModel(std::move(nodes), std::move(weights));
}

/// Eigenvalues of the compression of diag(lambda) to the orthogonal complement
/// of mu's coordinate vector, i.e. Sp(A_infinity) without root finding.
inline std::vector<double> compression_spectrum(const SpectralModel& model) {
    const std::size_t n = model.dimension();
    const auto lambda = model.eigenvalues();
    const double norm = std::sqrt(model.mu_norm_sq());
    // Householder reflection H = I - 2 v v^T / (v^T v) with v = u + e_1 maps
    // e_1 to -u; its remaining columns are an orthonormal basis of u^perp.
    std::vector<double> v = model.mu_coordinates();
    for (double& x : v) x /= norm;
    v[0] += 1.0;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    auto reflector = [&](std::size_t row, std::size_t col) {
        return (row == col ? 1.0 : 0.0) - 2.0 * v[row] * v[col] / vv;
    };
    detail::SymmetricMatrix c(n - 1);
    for (std::size_t a = 1; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            detail::CompensatedSum s;
            for (std::size_t j = 0; j < n; ++j) s.add(reflector(j, a) * lambda[j] * reflector(j, b));
            c(a - 1, b - 1) = s.value();
            c(b - 1, a - 1) = s.value();
        }
    }
    return detail::symmetric_eigenvalues(std::move(c));
}

}  // namespace rankone
