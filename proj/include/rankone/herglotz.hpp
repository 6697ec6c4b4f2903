#pragma once

// The Borel transform F(z) = <mu, (A - z)^{-1} mu> of the spectral measure,
// its Aronszajn-Krein transforms F_h, G_h = h + 1/F, and the normalized
// resolvent vector xi(z) = (A - conj z)^{-1} mu / F(conj z).

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "rankone/detail/compensated.hpp"
#include "rankone/errors.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone {

struct WeylValue {
    Complex F;
    Complex F_prime;
};

struct PerturbedWeylValue {
    Complex F_h;  // complex infinity when z lies on Sp(A_h)
    Complex G_h;
    Complex G_h_prime;
};

/// xi(z) in the eigenbasis of A.
struct XiVector {
    Complex at;
    std::vector<Complex> coords;

    double norm_sq() const {
        detail::CompensatedSum s;
        for (const Complex& c : coords) s.add(std::norm(c));
        return s.value();
    }

    StateVector as_state() const { return StateVector(coords); }
};

namespace detail {

inline std::string show(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

inline std::string describe(Complex z) {
    return show(z.real()) + (z.imag() < 0 ? "-" : "+") + show(std::abs(z.imag())) + "i";
}

inline WeylValue weyl_unchecked(const SpectralModel& model, Complex z) {
    CompensatedComplexSum f;
    CompensatedComplexSum fp;
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        const Complex r = 1.0 / (lambda[j] - z);
        f.add(w[j] * r);
        fp.add(w[j] * r * r);
    }
    return {f.value(), fp.value()};
}

inline void require_off_spectrum(const SpectralModel& model, Complex z) {
    const double radius = model.exclusion_radius();
    for (double lambda : model.eigenvalues()) {
        if (std::abs(z - lambda) <= radius) {
            throw Error(ErrorCode::PoleProximity, "evaluation point " + describe(z) + " is within " + show(radius) +
                                                      " of eigenvalue " + show(lambda));
        }
    }
}

// Newton estimate |F/F'| of the distance to the nearest zero of F. It is
// bounded below by |Im z|, so only near-real points can be rejected.
inline void require_off_zeros(const SpectralModel& model, Complex z, const WeylValue& v) {
    const double radius = model.exclusion_radius();
    if (std::abs(v.F) <= radius * std::abs(v.F_prime)) {
        throw Error(ErrorCode::ZeroOfF, "evaluation point " + describe(z) + " is at a zero of F");
    }
}

// Caller guarantees z is not an eigenvalue and F(z) != 0.
inline std::vector<Complex> xi_coords_unchecked(const SpectralModel& model, Complex z, Complex F) {
    const auto lambda = model.eigenvalues();
    const auto w = model.weights();
    std::vector<Complex> out(lambda.size());
    // conj(F(z)) = F(conj z) for real spectral data.
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        out[j] = std::sqrt(w[j]) / std::conj((lambda[j] - z) * F);
    }
    return out;
}

// xi at a real point, including the limit at an eigenvalue lambda_k where
// xi(lambda_k) = e_k / sqrt(w_k).
inline std::vector<Complex> xi_coords_at_real(const SpectralModel& model, double x) {
    const auto lambda = model.eigenvalues();
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        if (lambda[k] == x) {
            std::vector<Complex> out(lambda.size(), Complex{});
            out[k] = 1.0 / std::sqrt(model.weights()[k]);
            return out;
        }
    }
    return xi_coords_unchecked(model, x, weyl_unchecked(model, x).F);
}

inline double xi_norm_sq_unchecked(const SpectralModel& model, double x) {
    const auto lambda = model.eigenvalues();
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        if (lambda[k] == x) return 1.0 / model.weights()[k];
    }
    const WeylValue v = weyl_unchecked(model, x);
    const double f = v.F.real();
    return v.F_prime.real() / (f * f);
}

}  // namespace detail

/// F(z) and F'(z). Throws PoleProximity within the exclusion radius of an
/// eigenvalue.
inline WeylValue weyl(const SpectralModel& model, Complex z) {
    detail::require_off_spectrum(model, z);
    return detail::weyl_unchecked(model, z);
}

/// F_h = F / (1 + hF), G_h = h + 1/F and G_h' = -F'/F^2.
inline PerturbedWeylValue weyl_h(const SpectralModel& model, double h, Complex z) {
    if (!std::isfinite(h)) throw Error(ErrorCode::InfiniteCoupling, "weyl_h needs a finite coupling");
    const WeylValue v = weyl(model, z);
    detail::require_off_zeros(model, z, v);
    const Complex inv_f = 1.0 / v.F;
    const Complex g = h + inv_f;
    const Complex f_h = (g == Complex{}) ? Complex{HUGE_VAL, 0.0} : 1.0 / g;
    return {f_h, g, -v.F_prime * inv_f * inv_f};
}

inline XiVector xi(const SpectralModel& model, Complex z) {
    const WeylValue v = weyl(model, z);
    detail::require_off_zeros(model, z, v);
    return {z, detail::xi_coords_unchecked(model, z, v.F)};
}

/// ||xi(x)||^2 = F'(x) / F(x)^2 for real x.
inline double xi_norm_sq(const SpectralModel& model, double x) {
    const WeylValue v = weyl(model, x);
    detail::require_off_zeros(model, x, v);
    const double f = v.F.real();
    return v.F_prime.real() / (f * f);
}

}  // namespace rankone
