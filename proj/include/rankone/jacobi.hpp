#pragma once

// Semi-infinite Jacobi matrices with cyclic vector delta_1: first- and
// second-kind orthogonal polynomials, finite truncations as spectral models,
// rational approximants of the Weyl function and the polynomial form of the
// sampling formula.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rankone/detail/compensated.hpp"
#include "rankone/errors.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone {

/// Diagonal q_1, q_2, ... and off-diagonal b_1, b_2, ... > 0, stored 0-based.
class JacobiParams {
public:
    JacobiParams(std::vector<double> q, std::vector<double> b) : q_(std::move(q)), b_(std::move(b)) {
        for (double x : q_) {
            if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "diagonal contains a non-finite entry");
        }
        for (std::size_t i = 0; i < b_.size(); ++i) {
            if (!std::isfinite(b_[i])) {
                throw Error(ErrorCode::NonFiniteValue, "off-diagonal contains a non-finite entry");
            }
            if (!(b_[i] > 0.0)) {
                throw Error(ErrorCode::NonPositiveOffDiagonal, "b_" + std::to_string(i + 1) + " must be positive");
            }
        }
    }

    std::span<const double> q() const { return q_; }
    std::span<const double> b() const { return b_; }

    /// q_k and b_k with 1-based indices.
    double q_at(std::size_t k) const { return q_[k - 1]; }
    double b_at(std::size_t k) const { return b_[k - 1]; }

    /// b_k, with the final coefficient of a degree-n recurrence defaulting to
    /// 1 when absent. It cancels in every ratio of P_n and Q_n.
    double b_or_unit(std::size_t k) const { return k <= b_.size() ? b_[k - 1] : 1.0; }

    /// The matrix with its first row and column removed.
    JacobiParams shifted() const {
        if (q_.empty()) throw Error(ErrorCode::InsufficientCoefficients, "nothing left to shift");
        return JacobiParams({q_.begin() + 1, q_.end()},
                            b_.empty() ? std::vector<double>{} : std::vector<double>(b_.begin() + 1, b_.end()));
    }

    void require_degree(std::size_t n) const {
        if (n < 1) throw Error(ErrorCode::InsufficientCoefficients, "degree must be at least 1");
        if (q_.size() < n || b_.size() + 1 < n) {
            throw Error(ErrorCode::InsufficientCoefficients,
                        "degree " + std::to_string(n) + " needs q_1..q_n and b_1..b_{n-1}");
        }
    }

private:
    std::vector<double> q_;
    std::vector<double> b_;
};

/// P_0..P_n, Q_0..Q_n and their z-derivatives at one point.
struct PolynomialEval {
    std::vector<Complex> P;
    std::vector<Complex> Q;
    std::vector<Complex> P_prime;
    std::vector<Complex> Q_prime;
};

/// Runs the three-term recurrence
///   b_k f_k = (z - q_k) f_{k-1} - b_{k-1} f_{k-2}
/// from P_0 = 1, P_1 = (z - q_1)/b_1 and Q_0 = 0, Q_1 = 1/b_1, together with
/// its derivative in z.
inline PolynomialEval polys(const JacobiParams& params, Complex z, std::size_t n) {
    params.require_degree(n);
    PolynomialEval out;
    out.P.resize(n + 1);
    out.Q.resize(n + 1);
    out.P_prime.resize(n + 1);
    out.Q_prime.resize(n + 1);

    const double b1 = params.b_or_unit(1);
    out.P[0] = 1.0;
    out.Q[0] = 0.0;
    out.P_prime[0] = 0.0;
    out.Q_prime[0] = 0.0;
    out.P[1] = (z - params.q_at(1)) / b1;
    out.Q[1] = 1.0 / b1;
    out.P_prime[1] = 1.0 / b1;
    out.Q_prime[1] = 0.0;
    for (std::size_t k = 2; k <= n; ++k) {
        const Complex shift = z - params.q_at(k);
        const double prev = params.b_at(k - 1);
        const double bk = params.b_or_unit(k);
        out.P[k] = (shift * out.P[k - 1] - prev * out.P[k - 2]) / bk;
        out.Q[k] = (shift * out.Q[k - 1] - prev * out.Q[k - 2]) / bk;
        out.P_prime[k] = (out.P[k - 1] + shift * out.P_prime[k - 1] - prev * out.P_prime[k - 2]) / bk;
        out.Q_prime[k] = (out.Q[k - 1] + shift * out.Q_prime[k - 1] - prev * out.Q_prime[k - 2]) / bk;
    }
    return out;
}

namespace detail {

// Real-valued P_0..P_{n} at x; cheaper than polys() inside the eigensolver.
inline std::vector<double> first_kind_real(const JacobiParams& params, double x, std::size_t n) {
    std::vector<double> p(n + 1);
    p[0] = 1.0;
    p[1] = (x - params.q_at(1)) / params.b_or_unit(1);
    for (std::size_t k = 2; k <= n; ++k) {
        p[k] = ((x - params.q_at(k)) * p[k - 1] - params.b_at(k - 1) * p[k - 2]) / params.b_or_unit(k);
    }
    return p;
}

inline std::pair<double, double> gershgorin_bounds(const JacobiParams& params, std::size_t n) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = 1; k <= n; ++k) {
        double radius = 0.0;
        if (k > 1) radius += params.b_at(k - 1);
        if (k < n) radius += params.b_at(k);
        lo = std::min(lo, params.q_at(k) - radius);
        hi = std::max(hi, params.q_at(k) + radius);
    }
    return {lo, hi};
}

}  // namespace detail

/// Number of eigenvalues of the leading n x n block strictly below t, from the
/// signs of the pivots d_k = q_k - t - b_{k-1}^2 / d_{k-1}.
inline std::size_t sturm_count(const JacobiParams& params, std::size_t n, double t) {
    params.require_degree(n);
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double coupling = k > 1 ? params.b_at(k - 1) : 0.0;
        d = params.q_at(k) - t - (k > 1 ? coupling * coupling / d : 0.0);
        // Keep an exactly singular pivot from poisoning the next step.
        if (std::abs(d) < tiny) d = -tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

/// Eigenvalues of the leading n x n block in increasing order, by Sturm
/// bisection polished with Newton on P_n.
inline std::vector<double> truncation_eigenvalues(const JacobiParams& params, std::size_t n) {
    params.require_degree(n);
    auto [lo_all, hi_all] = detail::gershgorin_bounds(params, n);
    const double pad = 1e-12 * std::max({1.0, std::abs(lo_all), std::abs(hi_all)});
    lo_all -= pad;
    hi_all += pad;

    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k-th eigenvalue: smallest t with more than k eigenvalues below it.
        double lo = k == 0 ? lo_all : std::max(lo_all, out[k - 1]);
        double hi = hi_all;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (sturm_count(params, n, mid) > k ? hi : lo) = mid;
        }
        double x = 0.5 * (lo + hi);
        // Newton on P_n; kept only if it stays inside the Sturm bracket.
        for (int step = 0; step < 3; ++step) {
            const PolynomialEval ev = polys(params, x, n);
            const double p = ev.P[n].real();
            const double dp = ev.P_prime[n].real();
            if (p == 0.0 || dp == 0.0) break;
            const double next = x - p / dp;
            if (!(next >= lo && next <= hi) || next == x) break;
            x = next;
        }
        out[k] = x;
    }
    return out;
}

/// N x N leading block as a spectral model with cyclic vector delta_1. The
/// weight of eigenvalue lambda is the squared first component of its
/// normalized eigenvector, 1 / sum_{k<N} P_k(lambda)^2.
inline SpectralModel truncate(const JacobiParams& params, std::size_t n) {
    if (n < 2) throw Error(ErrorCode::DimensionMismatch, "truncation size must be at least 2");
    params.require_degree(n);
    auto eigenvalues = truncation_eigenvalues(params, n);
    std::vector<double> weights;
    weights.reserve(n);
    for (double lambda : eigenvalues) {
        const auto p = detail::first_kind_real(params, lambda, n - 1);
        detail::CompensatedSum s;
        for (double v : p) s.add(v * v);
        weights.push_back(1.0 / s.value());
    }
    return SpectralModel(std::move(eigenvalues), std::move(weights));
}

/// Coordinates, in the eigenbasis of the n x n truncation, of the vector
/// sum_k c_k delta_k. The normalized eigenvector for lambda_j has components
/// sqrt(w_j) P_{k-1}(lambda_j).
inline StateVector state_from_jacobi_basis(const JacobiParams& params, const SpectralModel& truncation,
                                           std::span<const Complex> c) {
    const std::size_t n = truncation.dimension();
    params.require_degree(n);
    if (c.size() > n) throw Error(ErrorCode::DimensionMismatch, "more coefficients than the truncation size");
    std::vector<Complex> coords(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = truncation.eigenvalues()[j];
        const auto p = detail::first_kind_real(params, lambda, n - 1);
        detail::CompensatedComplexSum s;
        for (std::size_t k = 0; k < c.size(); ++k) s.add(c[k] * p[k]);
        coords[j] = std::sqrt(truncation.weights()[j]) * s.value();
    }
    return StateVector(std::move(coords));
}

/// -Q_n(z) / P_n(z), the Weyl function of the n x n truncation.
inline Complex weyl_approx(const JacobiParams& params, Complex z, std::size_t n) {
    const PolynomialEval ev = polys(params, z, n);
    const auto [lo, hi] = detail::gershgorin_bounds(params, n);
    const double radius = kExclusionFactor * std::max(1.0, hi - lo);
    if (std::abs(ev.P[n]) <= radius * std::abs(ev.P_prime[n])) {
        throw Error(ErrorCode::PoleProximity,
                    "P_" + std::to_string(n) + " vanishes at " + std::to_string(z.real()) + "+" +
                        std::to_string(z.imag()) + "i");
    }
    return -ev.Q[n] / ev.P[n];
}

/// Polynomial form of the sampling formula with G_h approximated by
/// h - w_n(z), w_n = P_n / Q_n:
///   f(z) ~ sum_j (h - w_n(z)) f(x_j) / ((x_j - z) w_n'(x_j)).
/// Exact when n equals the size of the truncation that produced the samples.
inline Complex jm_reconstruct(const JacobiParams& params, std::size_t n, const SampleSet& samples, Complex z) {
    const auto nodes = samples.nodes();
    const double radius = samples.exclusion_radius();
    for (double x : nodes) {
        if (std::abs(z - x) <= radius) {
            throw Error(ErrorCode::PoleProximity, "evaluation point coincides with node " + std::to_string(x));
        }
    }
    const PolynomialEval at_z = polys(params, z, n);
    if (std::abs(at_z.Q[n]) <= radius * std::abs(at_z.Q_prime[n])) {
        throw Error(ErrorCode::QZero, "Q_" + std::to_string(n) + " vanishes at the evaluation point");
    }
    const Complex w_z = at_z.P[n] / at_z.Q[n];
    const double h = samples.h();

    detail::CompensatedComplexSum s;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const PolynomialEval ev = polys(params, nodes[j], n);
        const Complex q = ev.Q[n];
        // A small Q_n(x_j) only makes w_n'(x_j) large and the term small; only
        // an exact zero is fatal.
        const Complex w_prime = (ev.P_prime[n] * q - ev.P[n] * ev.Q_prime[n]) / (q * q);
        if (q == Complex{} || !std::isfinite(std::abs(w_prime))) {
            throw Error(ErrorCode::QZero, "Q_" + std::to_string(n) + " vanishes at node " + std::to_string(nodes[j]));
        }
        s.add((h - w_z) * samples.values()[j] / ((nodes[j] - z) * w_prime));
    }
    return s.value();
}

}  // namespace rankone
