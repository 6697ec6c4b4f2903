#pragma once

// Random models and dense-linear-algebra oracles shared by the tests. The
// oracle works in a randomly rotated basis so that nothing it computes can
// lean on the diagonal structure the library exploits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rankone/jacobi.hpp"
#include "rankone/spectral_model.hpp"
#include "rankone/verify.hpp"

namespace testing_support {

using rankone::Complex;
using rankone::SpectralModel;
using rankone::StateVector;

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// N in [2, max_n], spread in [1, max_spread], gaps not smaller than 2% of
/// the mean gap, weights log-uniform over two decades.
inline SpectralModel random_model(rankone::Draws& draws, std::size_t max_n = 12, double max_spread = 100.0) {
    const std::size_t n = draws.index(2, max_n);
    const double spread = draws.uniform(1.0, max_spread);
    std::vector<double> gaps(n - 1);
    double total = 0.0;
    for (double& g : gaps) {
        g = draws.uniform(0.05, 1.0);
        total += g;
    }
    std::vector<double> lambda(n);
    lambda[0] = draws.uniform(-0.5 * max_spread, 0.5 * max_spread - spread);
    for (std::size_t j = 1; j < n; ++j) lambda[j] = lambda[j - 1] + gaps[j - 1] * spread / total;
    std::vector<double> w(n);
    for (double& x : w) x = std::pow(10.0, draws.uniform(-2.0, 0.0));
    return SpectralModel(std::move(lambda), std::move(w));
}

inline rankone::JacobiParams random_jacobi(rankone::Draws& draws, std::size_t size) {
    std::vector<double> q(size);
    std::vector<double> b(size);
    for (double& x : q) x = draws.uniform(-3.0, 3.0);
    for (double& x : b) x = draws.uniform(0.2, 2.0);
    return rankone::JacobiParams(std::move(q), std::move(b));
}

inline ComplexVector to_eigen(const StateVector& phi) {
    ComplexVector v(static_cast<Eigen::Index>(phi.size()));
    for (std::size_t j = 0; j < phi.size(); ++j) v(static_cast<Eigen::Index>(j)) = phi[j];
    return v;
}

/// A = U diag(lambda) U^T and m = U sqrt(w) for a random orthogonal U.
class DenseOracle {
public:
    DenseOracle(const SpectralModel& model, std::uint64_t seed) {
        const auto n = static_cast<Eigen::Index>(model.dimension());
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss;
        RealMatrix g(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
        }
        u_ = Eigen::HouseholderQR<RealMatrix>(g).householderQ();
        RealVector lambda(n);
        RealVector root_w(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            lambda(j) = model.eigenvalues()[static_cast<std::size_t>(j)];
            root_w(j) = std::sqrt(model.weights()[static_cast<std::size_t>(j)]);
        }
        a_ = u_ * lambda.asDiagonal() * u_.transpose();
        a_ = 0.5 * (a_ + a_.transpose());
        mu_ = u_ * root_w;
    }

    Eigen::Index dim() const { return a_.rows(); }

    ComplexVector rotate(const StateVector& phi) const { return u_.cast<Complex>() * to_eigen(phi); }
    StateVector unrotate(const ComplexVector& x) const {
        const ComplexVector c = u_.transpose().cast<Complex>() * x;
        return StateVector(std::vector<Complex>(c.data(), c.data() + c.size()));
    }

    ComplexVector resolvent_mu(Complex z) const {
        const ComplexMatrix shifted = a_.cast<Complex>() - z * ComplexMatrix::Identity(dim(), dim());
        return shifted.partialPivLu().solve(mu_.cast<Complex>());
    }

    Complex weyl(Complex z) const { return mu_.cast<Complex>().dot(resolvent_mu(z)); }

    /// <xi(z), phi> with xi(z) = (A - conj z)^{-1} mu / F(conj z).
    Complex transform(const StateVector& phi, Complex z) const {
        const Complex zb = std::conj(z);
        const ComplexVector xi = resolvent_mu(zb) / weyl(zb);
        return xi.dot(rotate(phi));  // Eigen's dot conjugates the left factor
    }

    /// Eigenvalues and mu-weights of A + h mu mu^T.
    std::pair<std::vector<double>, std::vector<double>> perturbed(double h) const {
        const RealMatrix ah = a_ + h * mu_ * mu_.transpose();
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(ah);
        std::vector<double> x(static_cast<std::size_t>(dim()));
        std::vector<double> m(x.size());
        for (Eigen::Index k = 0; k < dim(); ++k) {
            x[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
            const double overlap = es.eigenvectors().col(k).dot(mu_);
            m[static_cast<std::size_t>(k)] = overlap * overlap;
        }
        return {x, m};
    }

    /// Spectrum of A compressed to mu's orthogonal complement.
    std::vector<double> compression() const {
        const RealMatrix q = Eigen::HouseholderQR<RealMatrix>(mu_).householderQ();
        const RealMatrix basis = q.rightCols(dim() - 1);
        const RealMatrix c = basis.transpose() * a_ * basis;
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (c + c.transpose()));
        return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
    }

    StateVector apply_perturbed(double h, const StateVector& phi) const {
        const ComplexVector x = rotate(phi);
        const ComplexVector y = a_.cast<Complex>() * x + h * mu_.cast<Complex>() * (mu_.cast<Complex>().dot(x));
        return unrotate(y);
    }

private:
    RealMatrix u_;
    RealMatrix a_;
    RealVector mu_;
};

/// Leading n x n block of the Jacobi matrix.
inline RealMatrix jacobi_matrix(const rankone::JacobiParams& p, std::size_t n) {
    const auto size = static_cast<Eigen::Index>(n);
    RealMatrix j = RealMatrix::Zero(size, size);
    for (Eigen::Index k = 0; k < size; ++k) {
        j(k, k) = p.q()[static_cast<std::size_t>(k)];
        if (k + 1 < size) j(k, k + 1) = j(k + 1, k) = p.b()[static_cast<std::size_t>(k)];
    }
    return j;
}

/// <delta_1, (J_n - z)^{-1} delta_1> by a dense solve.
inline Complex jacobi_resolvent_11(const rankone::JacobiParams& p, std::size_t n, Complex z) {
    const auto size = static_cast<Eigen::Index>(n);
    const ComplexMatrix shifted = jacobi_matrix(p, n).cast<Complex>() - z * ComplexMatrix::Identity(size, size);
    ComplexVector e1 = ComplexVector::Zero(size);
    e1(0) = 1.0;
    return shifted.partialPivLu().solve(e1)(0);
}

/// Sum of 1 / (k! (2k + 1 - z)) in long double until the terms vanish.
inline std::complex<long double> oscillator_series_oracle(std::complex<long double> z) {
    std::complex<long double> s = 0.0L;
    long double inv_fact = 1.0L;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) inv_fact /= k;
        s += inv_fact / (static_cast<long double>(2 * k + 1) - z);
    }
    return s;
}

/// int_0^1 e^{t^2} dt by composite Simpson in long double.
inline long double integral_exp_t_squared() {
    constexpr int panels = 20000;
    const long double hstep = 1.0L / panels;
    long double s = 1.0L + std::exp(1.0L);
    for (int i = 1; i < panels; ++i) {
        const long double t = i * hstep;
        s += (i % 2 ? 4.0L : 2.0L) * std::exp(t * t);
    }
    return s * hstep / 3.0L;
}

}  // namespace testing_support
