#pragma once

// Finite spectral data of a self-adjoint operator A with a cyclic vector mu,
// plus the small value types passed between the other modules.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankone/detail/compensated.hpp"
#include "rankone/errors.hpp"

namespace rankone {

using Complex = std::complex<double>;

/// Smallest weight accepted as nonzero. Anything below is treated as a loss of
/// cyclicity.
inline constexpr double kMinWeight = 1e-300;

/// Relative size of the disc around poles and zeros in which evaluations are
/// refused.
inline constexpr double kExclusionFactor = 1e-8;

namespace detail {

inline double exclusion_radius_for(std::span<const double> sorted_points) {
    const double spread = sorted_points.empty() ? 0.0 : sorted_points.back() - sorted_points.front();
    return kExclusionFactor * std::max(1.0, spread);
}

inline void require_strictly_increasing(std::span<const double> xs, const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) {
            throw Error(ErrorCode::NonFiniteValue, std::string(what) + " contains a non-finite entry");
        }
        if (i > 0 && !(xs[i - 1] < xs[i])) {
            throw Error(ErrorCode::UnsortedEigenvalues,
                        std::string(what) + " must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

inline void require_positive_weights(std::span<const double> ws, const char* what) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!std::isfinite(ws[i])) {
            throw Error(ErrorCode::NonFiniteValue, std::string(what) + " contains a non-finite entry");
        }
        if (!(ws[i] > kMinWeight)) {
            throw Error(ErrorCode::NonPositiveWeight,
                        std::string(what) + " entry " + std::to_string(i) + " is not positive");
        }
    }
}

inline double compensated_total(std::span<const double> ws) {
    CompensatedSum s;
    for (double w : ws) s.add(w);
    return s.value();
}

}  // namespace detail

/// Eigenvalues lambda_1 < ... < lambda_N of A and the weights
/// w_j = |<phi_j, mu>|^2 of the cyclic vector in the eigenbasis.
class SpectralModel {
public:
    SpectralModel(std::vector<double> eigenvalues, std::vector<double> weights)
        : eigenvalues_(std::move(eigenvalues)), weights_(std::move(weights)) {
        if (eigenvalues_.size() != weights_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "eigenvalues and weights differ in length");
        }
        if (eigenvalues_.size() < 2) {
            throw Error(ErrorCode::DimensionMismatch, "a model needs at least two levels");
        }
        detail::require_strictly_increasing(eigenvalues_, "eigenvalues");
        detail::require_positive_weights(weights_, "weights");
        mu_norm_sq_ = detail::compensated_total(weights_);
    }

    std::size_t dimension() const { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    std::span<const double> weights() const { return weights_; }
    double mu_norm_sq() const { return mu_norm_sq_; }

    double spread() const { return eigenvalues_.back() - eigenvalues_.front(); }
    double exclusion_radius() const { return detail::exclusion_radius_for(eigenvalues_); }

    /// Coordinates sqrt(w_j) of mu in the eigenbasis.
    std::vector<double> mu_coordinates() const {
        std::vector<double> out(weights_.size());
        std::transform(weights_.begin(), weights_.end(), out.begin(), [](double w) { return std::sqrt(w); });
        return out;
    }

    friend bool operator==(const SpectralModel&, const SpectralModel&) = default;

private:
    std::vector<double> eigenvalues_;
    std::vector<double> weights_;
    double mu_norm_sq_ = 0.0;
};

inline SpectralModel new_model(std::vector<double> eigenvalues, std::vector<double> weights) {
    return SpectralModel(std::move(eigenvalues), std::move(weights));
}

/// Rescales the weights so that ||mu|| = 1. Models already normalized to
/// within rounding are returned unchanged, which makes the map idempotent.
inline SpectralModel normalize(const SpectralModel& model) {
    const double total = model.mu_norm_sq();
    const double slack = 4.0 * static_cast<double>(model.dimension()) * std::numeric_limits<double>::epsilon();
    if (std::abs(total - 1.0) <= slack) return model;
    std::vector<double> ws(model.weights().begin(), model.weights().end());
    for (double& w : ws) w /= total;
    return SpectralModel({model.eigenvalues().begin(), model.eigenvalues().end()}, std::move(ws));
}

/// A real coupling constant h, or the symbolic infinite coupling.
class Coupling {
public:
    static Coupling finite(double h) {
        if (!std::isfinite(h)) throw Error(ErrorCode::NonFiniteValue, "finite coupling must be a finite number");
        return Coupling(h, false);
    }
    static Coupling infinite() { return Coupling(0.0, true); }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    double value() const {
        if (infinite_) throw Error(ErrorCode::InfiniteCoupling, "coupling is infinite");
        return h_;
    }

    friend bool operator==(const Coupling&, const Coupling&) = default;

private:
    Coupling(double h, bool infinite) : h_(h), infinite_(infinite) {}

    double h_;
    bool infinite_;
};

/// Coordinates of a vector in the eigenbasis of A.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> coords) : coords_(std::move(coords)) {
        for (const Complex& c : coords_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw Error(ErrorCode::NonFiniteValue, "state vector contains a non-finite entry");
            }
        }
    }

    static StateVector from_real(std::span<const double> xs) { return StateVector({xs.begin(), xs.end()}); }

    std::size_t size() const { return coords_.size(); }
    std::span<const Complex> coords() const { return coords_; }
    const Complex& operator[](std::size_t i) const { return coords_[i]; }

    double norm_sq() const {
        detail::CompensatedSum s;
        for (const Complex& c : coords_) s.add(std::norm(c));
        return s.value();
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::vector<Complex> coords_;
};

inline void require_dimension(const SpectralModel& model, const StateVector& phi) {
    if (phi.size() != model.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "state has " + std::to_string(phi.size()) +
                                                      " coordinates, model has " +
                                                      std::to_string(model.dimension()));
    }
}

/// <phi, psi>, antilinear in the first argument.
inline Complex inner(const StateVector& phi, const StateVector& psi) {
    if (phi.size() != psi.size()) throw Error(ErrorCode::DimensionMismatch, "inner product of unequal lengths");
    detail::CompensatedComplexSum s;
    for (std::size_t j = 0; j < phi.size(); ++j) s.add(std::conj(phi[j]) * psi[j]);
    return s.value();
}

/// <mu, phi> = sum_j sqrt(w_j) phi_j (mu has real coordinates).
inline Complex mu_overlap(const SpectralModel& model, const StateVector& phi) {
    require_dimension(model, phi);
    detail::CompensatedComplexSum s;
    for (std::size_t j = 0; j < phi.size(); ++j) s.add(std::sqrt(model.weights()[j]) * phi[j]);
    return s.value();
}

inline StateVector mu_state(const SpectralModel& model) {
    const auto mu = model.mu_coordinates();
    return StateVector::from_real(mu);
}

/// Samples of f on Sp(A_h) for a finite coupling: nodes x_j, masses
/// m_h({x_j}) and values f(x_j).
class SampleSet {
public:
    SampleSet(double h, std::vector<double> nodes, std::vector<double> node_weights, std::vector<Complex> values)
        : h_(h), nodes_(std::move(nodes)), node_weights_(std::move(node_weights)), values_(std::move(values)) {
        if (!std::isfinite(h_)) throw Error(ErrorCode::InfiniteCoupling, "samples require a finite coupling");
        if (nodes_.size() != node_weights_.size() || nodes_.size() != values_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "nodes, weights and values differ in length");
        }
        if (nodes_.empty()) throw Error(ErrorCode::DimensionMismatch, "sample set is empty");
        detail::require_strictly_increasing(nodes_, "nodes");
        detail::require_positive_weights(node_weights_, "node weights");
        for (const Complex& v : values_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw Error(ErrorCode::NonFiniteValue, "sample values contain a non-finite entry");
            }
        }
    }

    double h() const { return h_; }
    Coupling coupling() const { return Coupling::finite(h_); }
    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> node_weights() const { return node_weights_; }
    std::span<const Complex> values() const { return values_; }

    double total_weight() const { return detail::compensated_total(node_weights_); }
    double exclusion_radius() const { return detail::exclusion_radius_for(nodes_); }

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
    double h_;
    std::vector<double> nodes_;
    std::vector<double> node_weights_;
    std::vector<Complex> values_;
};

/// f(z) = c + sum_n c_n / (z - x_n), poles at Sp(A_infinity).
class MeromorphicRep {
public:
    MeromorphicRep(Complex constant, std::vector<double> poles, std::vector<Complex> coefficients)
        : constant_(constant), poles_(std::move(poles)), coefficients_(std::move(coefficients)) {
        if (poles_.size() != coefficients_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "poles and coefficients differ in length");
        }
        detail::require_strictly_increasing(poles_, "poles");
    }

    Complex constant() const { return constant_; }
    std::span<const double> poles() const { return poles_; }
    std::span<const Complex> coefficients() const { return coefficients_; }

    friend bool operator==(const MeromorphicRep&, const MeromorphicRep&) = default;

private:
    Complex constant_;
    std::vector<double> poles_;
    std::vector<Complex> coefficients_;
};

}  // namespace rankone
