#pragma once

// Seeded invariant checks run against one model: the report behind the
// `verify` command.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rankone/errors.hpp"
#include "rankone/herglotz.hpp"
#include "rankone/jacobi.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/sampling.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone {

/// Deterministic source of random states, couplings and evaluation points.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    bool coin() { return std::bernoulli_distribution(0.5)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    /// Complex Gaussian vector scaled to unit norm.
    StateVector unit_state(std::size_t n) {
        std::vector<Complex> coords(n);
        double norm_sq = 0.0;
        for (Complex& c : coords) {
            c = {normal(), normal()};
            norm_sq += std::norm(c);
        }
        const double scale = 1.0 / std::sqrt(norm_sq);
        for (Complex& c : coords) c *= scale;
        return StateVector(std::move(coords));
    }

    /// Nonzero coupling with |h| log-uniform in [0.1, 10] and random sign.
    double coupling() {
        const double magnitude = std::pow(10.0, uniform(-1.0, 1.0));
        return coin() ? magnitude : -magnitude;
    }

    /// Point with |Im z| in [0.1, 2] over the spectral window widened by one on
    /// each side, hence at distance >= 0.1 from every real pole or node.
    Complex point(const SpectralModel& model) {
        const auto lambda = model.eigenvalues();
        const double re = uniform(lambda.front() - 1.0, lambda.back() + 1.0);
        const double im = uniform(0.1, 2.0);
        return {re, coin() ? im : -im};
    }

private:
    std::mt19937_64 rng_;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    double worst = 0.0;      // largest observed error
    double tolerance = 0.0;  // threshold the error is compared against
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

/// Tags of the merged sorted spectra alternate with no ties.
inline bool strictly_interlaced(std::span<const double> a, std::span<const double> b) {
    std::vector<std::pair<double, int>> merged;
    merged.reserve(a.size() + b.size());
    for (double x : a) merged.emplace_back(x, 0);
    for (double x : b) merged.emplace_back(x, 1);
    std::sort(merged.begin(), merged.end());
    for (std::size_t i = 1; i < merged.size(); ++i) {
        if (merged[i].second == merged[i - 1].second) return false;
        if (!(merged[i - 1].first < merged[i].first)) return false;
    }
    return true;
}

inline double relative_error(Complex value, Complex reference) {
    return std::abs(value - reference) / std::abs(reference);
}

namespace detail {

class Tracker {
public:
    Tracker(std::string name, double tolerance) {
        result_.name = std::move(name);
        result_.tolerance = tolerance;
    }

    void error(double e) {
        result_.worst = std::max(result_.worst, e);
        if (!(e <= result_.tolerance)) result_.passed = false;
    }
    void require(bool ok, const std::string& what) {
        if (!ok) {
            result_.passed = false;
            if (result_.detail.empty()) result_.detail = what;
        }
    }
    void fail(const std::string& what) { require(false, what); }

    CheckResult done() { return std::move(result_); }

private:
    CheckResult result_;
};

template <class Body>
CheckResult run_check(std::string name, double tolerance, Body&& body) {
    Tracker t(std::move(name), tolerance);
    try {
        body(t);
    } catch (const Error& e) {
        t.fail(e.what());
    }
    return t.done();
}

}  // namespace detail

struct VerifyOptions {
    std::size_t couplings = 5;
    std::size_t states = 3;
    std::size_t points = 10;
};

/// Runs every invariant group against `model`. Jacobi parameters, when given,
/// add the removed-row/column law to the Sp(A_infinity) check.
inline VerificationReport verify_model(const SpectralModel& model, std::uint64_t seed,
                                       const std::optional<JacobiParams>& jacobi = std::nullopt,
                                       std::size_t truncation = 0, VerifyOptions options = {}) {
    Draws draws(seed);
    const std::size_t n = model.dimension();
    std::vector<double> couplings;
    for (std::size_t i = 0; i < options.couplings; ++i) couplings.push_back(draws.coupling());

    VerificationReport report;

    report.checks.push_back(detail::run_check("interlacing", 0.0, [&](detail::Tracker& t) {
        const auto infinite = perturbed_spectrum(model, Coupling::infinite());
        for (std::size_t i = 0; i < couplings.size(); ++i) {
            const double h = couplings[i];
            const double other = couplings[(i + 1) % couplings.size()];
            const auto a = perturbed_spectrum(model, Coupling::finite(h));
            const auto b = perturbed_spectrum(model, Coupling::finite(other == h ? h + 1.0 : other));
            t.require(strictly_interlaced(a, b), "spectra for h = " + std::to_string(h) + " do not interlace");
            t.require(strictly_interlaced(a, infinite), "Sp(A_h) and Sp(A_inf) do not interlace");
        }
    }));

    report.checks.push_back(detail::run_check("secular residuals", kSecularTolerance, [&](detail::Tracker& t) {
        for (double h : couplings) {
            for (double x : perturbed_spectrum(model, Coupling::finite(h))) {
                t.error(secular_residual(model, Coupling::finite(h), x));
            }
        }
        for (double x : perturbed_spectrum(model, Coupling::infinite())) {
            const double r = secular_residual(model, Coupling::infinite(), x);
            t.require(r <= infinite_coupling_tolerance(model, x), "zero of F has residual " + std::to_string(r));
        }
    }));

    report.checks.push_back(detail::run_check("reconstruction", 1e-9, [&](detail::Tracker& t) {
        for (double h : couplings) {
            for (std::size_t s = 0; s < options.states; ++s) {
                const StateVector phi = draws.unit_state(n);
                const SampleSet samples = sample(model, phi, h);
                for (std::size_t p = 0; p < options.points; ++p) {
                    const Complex z = draws.point(model);
                    const Complex exact = transform(model, phi, z);
                    const Complex lagrange = reconstruct(samples, z);
                    t.error(relative_error(lagrange, exact));
                    t.error(relative_error(kramer_reconstruct(model, samples, z), lagrange));
                }
            }
        }
    }));

    report.checks.push_back(detail::run_check("parseval", 1e-10, [&](detail::Tracker& t) {
        for (double h : couplings) {
            const StateVector phi = draws.unit_state(n);
            const StateVector psi = draws.unit_state(n);
            t.error(std::abs(inner_h(model, h, phi, psi) - inner(phi, psi)));
            t.error(std::abs(inner_h(model, h, phi, phi) - 1.0));
        }
    }));

    report.checks.push_back(detail::run_check("partial fractions", 1e-10, [&](detail::Tracker& t) {
        const SpectralModel unit = normalize(model);
        for (std::size_t s = 0; s < options.states; ++s) {
            const StateVector phi = draws.unit_state(n);
            const MeromorphicRep rep = to_partial_fractions(unit, phi);
            const StateVector back = from_partial_fractions(unit, rep);
            for (std::size_t j = 0; j < n; ++j) t.error(std::abs(back[j] - phi[j]));
            double norm = std::norm(rep.constant());
            for (std::size_t k = 0; k < rep.poles().size(); ++k) {
                norm += std::norm(rep.coefficients()[k]) * detail::real_weyl(unit, rep.poles()[k]).slope;
            }
            t.error(std::abs(norm - phi.norm_sq()));
            for (std::size_t p = 0; p < options.points; ++p) {
                const Complex z = draws.point(unit);
                t.error(relative_error(evaluate_rep(rep, z), transform(unit, phi, z)));
            }
        }
        const StateVector mu = mu_state(unit);
        for (std::size_t p = 0; p < options.points; ++p) {
            const Complex z = draws.point(unit);
            t.error(std::abs(transform(unit, mu, z) - 1.0));
            for (double x : compression_spectrum(unit)) {
                const Complex expected = 1.0 / (z - x);
                t.error(relative_error(transform(unit, omega(unit, x), z), expected));
            }
        }
    }));

    report.checks.push_back(detail::run_check("quasi-multiplication", 1e-9, [&](detail::Tracker& t) {
        for (double h : couplings) {
            const StateVector phi = draws.unit_state(n);
            const StateVector moved = apply_perturbed(model, h, phi);
            for (std::size_t p = 0; p < options.points; ++p) {
                const Complex z = draws.point(model);
                const Complex lhs = transform(model, moved, z);
                const Complex first = mu_overlap(model, phi) / weyl_h(model, h, z).F_h;
                const Complex second = z * transform(model, phi, z);
                t.error(std::abs(lhs - (first + second)) / (std::abs(first) + std::abs(second)));
            }
        }
    }));

    report.checks.push_back(detail::run_check("compression/zeros agreement", 1e-9, [&](detail::Tracker& t) {
        const auto zeros = perturbed_spectrum(model, Coupling::infinite());
        const auto compressed = compression_spectrum(model);
        t.require(zeros.size() == compressed.size() && zeros.size() == n - 1, "Sp(A_inf) has the wrong size");
        for (std::size_t k = 0; k < std::min(zeros.size(), compressed.size()); ++k) {
            t.error(std::abs(zeros[k] - compressed[k]) / std::max(1.0, std::abs(zeros[k])));
        }
    }));

    if (jacobi && truncation >= 2) {
        report.checks.push_back(detail::run_check("jacobi removed row/column", 1e-8, [&](detail::Tracker& t) {
            const auto compressed = compression_spectrum(model);
            const auto removed = truncation_eigenvalues(jacobi->shifted(), truncation - 1);
            t.require(removed.size() == compressed.size(), "size mismatch");
            for (std::size_t k = 0; k < std::min(removed.size(), compressed.size()); ++k) {
                t.error(std::abs(removed[k] - compressed[k]) / std::max(1.0, std::abs(removed[k])));
            }
        }));
    }

    return report;
}

}  // namespace rankone
