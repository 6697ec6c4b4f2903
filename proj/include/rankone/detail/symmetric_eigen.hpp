#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rankone::detail {

// Dense symmetric matrix in row-major storage.
struct SymmetricMatrix {
    explicit SymmetricMatrix(std::size_t n) : size(n), data(n * n, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * size + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * size + j]; }

    std::size_t size;
    std::vector<double> data;
};

// Eigenvalues by cyclic Jacobi rotations, returned in increasing order.
// Intended for the small matrices (N <= a few hundred) used here.
inline std::vector<double> symmetric_eigenvalues(SymmetricMatrix a) {
    const std::size_t n = a.size;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= 1e-32 * diag || off == 0.0) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a(i, i);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rankone::detail
