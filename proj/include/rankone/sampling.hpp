#pragma once

// The transform phi -> f(z) = <xi(z), phi>, sampling of f on Sp(A_h), and
// reconstruction of f from those samples alone.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "rankone/detail/compensated.hpp"
#include "rankone/errors.hpp"
#include "rankone/herglotz.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone {

/// Largest |mu_norm_sq - 1| accepted where an orthonormal basis built from mu
/// is needed.
inline constexpr double kNormalizationTolerance = 1e-12;

/// Poles given to from_partial_fractions must match Sp(A_infinity) this well.
inline constexpr double kPoleMatchTolerance = 1e-9;

namespace detail {

inline Complex transform_unchecked(const SpectralModel& model, const StateVector& phi, Complex z, Complex F) {
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    CompensatedComplexSum s;
    for (std::size_t j = 0; j < lambda.size(); ++j) s.add(std::sqrt(w[j]) * phi[j] / (lambda[j] - z));
    return s.value() / F;
}

// f at a real node of a finite coupling. Such nodes are never poles of f; at an
// eigenvalue lambda_k of A the removable singularity has the value
// phi_k / sqrt(w_k).
inline Complex transform_at_node(const SpectralModel& model, const StateVector& phi, double x) {
    const auto lambda = model.eigenvalues();
    const auto it = std::lower_bound(lambda.begin(), lambda.end(), x);
    if (it != lambda.end() && *it == x) {
        const auto k = static_cast<std::size_t>(it - lambda.begin());
        return phi[k] / std::sqrt(model.weights()[k]);
    }
    const double f = real_weyl(model, x).value;
    if (f == 0.0) throw Error(ErrorCode::ZeroOfF, "node " + std::to_string(x) + " is a zero of F");
    return transform_unchecked(model, phi, x, f);
}

inline void require_off_points(std::span<const double> points, double radius, Complex z) {
    for (double x : points) {
        if (std::abs(z - x) <= radius) {
            throw Error(ErrorCode::PoleProximity,
                        "evaluation point " + describe(z) + " is within " + show(radius) + " of " + show(x));
        }
    }
}

}  // namespace detail

/// f(z) = <xi(z), phi> = (1/F(z)) sum_j sqrt(w_j) phi_j / (lambda_j - z).
inline Complex transform(const SpectralModel& model, const StateVector& phi, Complex z) {
    require_dimension(model, phi);
    const WeylValue v = weyl(model, z);
    detail::require_off_zeros(model, z, v);
    return detail::transform_unchecked(model, phi, z, v.F);
}

/// omega(x)_j = sqrt(w_j) / (lambda_j - x). For x in Sp(A_infinity) this is an
/// eigenvector of A_infinity and transform(omega(x))(z) = 1 / (z - x).
inline StateVector omega(const SpectralModel& model, double x) {
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    std::vector<Complex> out(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) out[j] = std::sqrt(w[j]) / (lambda[j] - x);
    return StateVector(std::move(out));
}

inline SampleSet sample(const SpectralModel& model, const StateVector& phi, double h) {
    require_dimension(model, phi);
    if (!std::isfinite(h)) {
        throw Error(ErrorCode::InfiniteCoupling, "functions of the space have their poles on Sp(A_infinity)");
    }
    auto nodes = perturbed_spectrum(model, Coupling::finite(h));
    auto weights = node_weights(model, h, nodes);
    std::vector<Complex> values;
    values.reserve(nodes.size());
    for (double x : nodes) values.push_back(detail::transform_at_node(model, phi, x));
    return SampleSet(h, std::move(nodes), std::move(weights), std::move(values));
}

/// Lagrange-type reconstruction from the samples alone:
///   f(z) = sum_j G_h(z) f(x_j) / ((z - x_j) G_h'(x_j)),
/// with F_h(z) = sum_j m_j / (x_j - z), G_h = 1 / F_h and G_h'(x_j) = -1 / m_j.
inline Complex reconstruct(const SampleSet& samples, Complex z) {
    const auto x = samples.nodes();
    const auto m = samples.node_weights();
    const auto f = samples.values();
    const double radius = samples.exclusion_radius();
    detail::require_off_points(x, radius, z);

    detail::CompensatedComplexSum f_h;
    detail::CompensatedComplexSum f_h_prime;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Complex r = 1.0 / (x[j] - z);
        f_h.add(m[j] * r);
        f_h_prime.add(m[j] * r * r);
    }
    // Zeros of F_h are the poles of G_h.
    if (std::abs(f_h.value()) <= radius * std::abs(f_h_prime.value())) {
        throw Error(ErrorCode::PoleProximity, "evaluation point " + detail::describe(z) + " is at a pole of G_h");
    }
    const Complex g_h = 1.0 / f_h.value();

    detail::CompensatedComplexSum s;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double g_h_prime = -1.0 / m[j];
        s.add(g_h * f[j] / ((z - x[j]) * g_h_prime));
    }
    return s.value();
}

/// Kramer-type orthogonal sampling series
///   f(z) = sum_j <xi(z), xi(x_j)> f(x_j) / ||xi(x_j)||^2
/// with the xi vectors formed explicitly from the model.
inline Complex kramer_reconstruct(const SpectralModel& model, const SampleSet& samples, Complex z) {
    if (samples.size() != model.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "sample set does not cover Sp(A_h) of the model");
    }
    detail::require_off_points(samples.nodes(), samples.exclusion_radius(), z);
    const XiVector xi_z = xi(model, z);
    const StateVector left(xi_z.coords);
    detail::CompensatedComplexSum s;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const StateVector xi_node(detail::xi_coords_at_real(model, samples.nodes()[j]));
        s.add(inner(left, xi_node) * samples.values()[j] / xi_node.norm_sq());
    }
    return s.value();
}

/// f = c + sum_n c_n / (z - x_n) with c = <mu, phi>, x_n in Sp(A_infinity) and
/// c_n = <omega(x_n), phi> / F'(x_n). Requires ||mu|| = 1.
inline MeromorphicRep to_partial_fractions(const SpectralModel& model, const StateVector& phi) {
    require_dimension(model, phi);
    if (std::abs(model.mu_norm_sq() - 1.0) > kNormalizationTolerance) {
        throw Error(ErrorCode::NormalizationRequired, "partial fractions need ||mu|| = 1; normalize the model first");
    }
    auto poles = compression_spectrum(model);
    for (double& x : poles) x = detail::polish_zero_of_weyl(model, x);
    std::vector<Complex> coeffs;
    coeffs.reserve(poles.size());
    for (double x : poles) {
        const double slope = detail::real_weyl(model, x).slope;
        coeffs.push_back(inner(omega(model, x), phi) / slope);
    }
    return MeromorphicRep(mu_overlap(model, phi), std::move(poles), std::move(coeffs));
}

/// Inverse of to_partial_fractions: phi = c mu + sum_n c_n omega(x_n). An
/// empty pole list stands for all coefficients zero.
inline StateVector from_partial_fractions(const SpectralModel& model, const MeromorphicRep& rep) {
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    if (!rep.poles().empty()) {
        const auto expected = compression_spectrum(model);
        if (rep.poles().size() != expected.size()) {
            throw Error(ErrorCode::PoleMismatch, "expected " + std::to_string(expected.size()) + " poles");
        }
        for (std::size_t n = 0; n < expected.size(); ++n) {
            if (std::abs(rep.poles()[n] - expected[n]) > kPoleMatchTolerance * std::max(1.0, std::abs(expected[n]))) {
                throw Error(ErrorCode::PoleMismatch, "pole " + std::to_string(rep.poles()[n]) +
                                                         " is not in Sp(A_infinity)");
            }
        }
    }
    std::vector<Complex> out(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        const double root_w = std::sqrt(w[j]);
        detail::CompensatedComplexSum s;
        s.add(rep.constant() * root_w);
        for (std::size_t n = 0; n < rep.poles().size(); ++n) {
            s.add(rep.coefficients()[n] * root_w / (lambda[j] - rep.poles()[n]));
        }
        out[j] = s.value();
    }
    return StateVector(std::move(out));
}

inline Complex evaluate_rep(const MeromorphicRep& rep, Complex z) {
    detail::require_off_points(rep.poles(), detail::exclusion_radius_for(rep.poles()), z);
    detail::CompensatedComplexSum s;
    s.add(rep.constant());
    for (std::size_t n = 0; n < rep.poles().size(); ++n) s.add(rep.coefficients()[n] / (z - rep.poles()[n]));
    return s.value();
}

/// sum_j conj(f(x_j)) g(x_j) m_h({x_j}); equals <phi, psi> for every finite h.
inline Complex inner_h(const SpectralModel& model, double h, const StateVector& phi, const StateVector& psi) {
    require_dimension(model, psi);
    const SampleSet f = sample(model, phi, h);
    const SampleSet g = sample(model, psi, h);
    detail::CompensatedComplexSum s;
    for (std::size_t j = 0; j < f.size(); ++j) s.add(std::conj(f.values()[j]) * g.values()[j] * f.node_weights()[j]);
    return s.value();
}

/// Complex conjugation in the eigenbasis; A and mu are real with respect to it.
inline StateVector conjugate_state(const SpectralModel& model, const StateVector& phi) {
    require_dimension(model, phi);
    std::vector<Complex> out(phi.coords().begin(), phi.coords().end());
    for (Complex& c : out) c = std::conj(c);
    return StateVector(std::move(out));
}

/// For f = transform(phi) vanishing at a non-real w, returns eta with
/// transform(eta)(z) = ((z - conj w) / (z - w)) f(z) and ||eta|| = ||phi||.
inline StateVector blaschke_swap(const SpectralModel& model, const StateVector& phi, Complex w) {
    require_dimension(model, phi);
    if (std::abs(w.imag()) <= model.exclusion_radius()) {
        throw Error(ErrorCode::RealPoint, "swap point " + detail::describe(w) + " must be non-real");
    }
    const Complex f_w = transform(model, phi, w);
    const double bound = 1e-9 * std::sqrt(xi(model, w).norm_sq() * phi.norm_sq());
    if (std::abs(f_w) > bound) {
        throw Error(ErrorCode::NotAZero, "transform does not vanish at " + detail::describe(w));
    }
    const auto lambda = model.eigenvalues();
    std::vector<Complex> out(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) out[j] = phi[j] * (lambda[j] - std::conj(w)) / (lambda[j] - w);
    return StateVector(std::move(out));
}

/// (A_h phi)_j = lambda_j phi_j + h sqrt(w_j) <mu, phi>.
inline StateVector apply_perturbed(const SpectralModel& model, double h, const StateVector& phi) {
    require_dimension(model, phi);
    const Complex overlap = mu_overlap(model, phi);
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    std::vector<Complex> out(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) out[j] = lambda[j] * phi[j] + h * std::sqrt(w[j]) * overlap;
    return StateVector(std::move(out));
}

}  // namespace rankone
