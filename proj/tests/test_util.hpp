#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sketchls/linalg.hpp"
#include "sketchls/rng.hpp"

namespace sketchls::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out(rows, cols);
    for (double& v : out.data()) v = rng.normal();
    return out;
}

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Vector v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

inline Matrix naive_matmul(const Matrix& A, const Matrix& B) {
    Matrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) {
            long double s = 0;
            for (std::size_t k = 0; k < A.cols(); ++k) s += static_cast<long double>(A(i, k)) * B(k, j);
            C(i, j) = static_cast<double>(s);
        }
    return C;
}

inline Matrix naive_gram(const Matrix& X) { return naive_matmul(X.transpose(), X); }

inline Vector naive_matvec(const Matrix& A, const Vector& v) {
    Vector out(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        long double s = 0;
        for (std::size_t k = 0; k < A.cols(); ++k) s += static_cast<long double>(A(i, k)) * v[k];
        out[i] = static_cast<double>(s);
    }
    return out;
}

/// Orthonormal Walsh–Hadamard matrix from the bit-parity formula.
inline Matrix hadamard(std::size_t n) {
    Matrix H(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H(i, j) = (std::popcount(i & j) % 2 ? -s : s);
    return H;
}

/// Solves A·x = b by Gaussian elimination with partial pivoting.
inline Vector gauss_solve(Matrix A, Vector b) {
    const std::size_t n = A.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
        for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

/// Least squares through the normal equations solved by elimination.
inline Vector naive_ls(const Matrix& X, const Vector& y) {
    return gauss_solve(naive_gram(X), naive_matvec(X.transpose(), y));
}

/// Inverse by elimination, column by column.
inline Matrix naive_inverse(const Matrix& A) {
    const std::size_t n = A.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        const Vector col = gauss_solve(A, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rel_diff(std::span<const double> a, std::span<const double> b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

/// Random SPD matrix GᵀG + I.
inline Matrix random_spd(std::size_t d, std::uint64_t seed) {
    Matrix A = naive_gram(random_matrix(d + 3, d, seed));
    for (std::size_t i = 0; i < d; ++i) A(i, i) += 1.0;
    return A;
}

}  // namespace sketchls::testing
