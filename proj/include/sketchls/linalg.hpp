#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sketchls {

using Vector = std::vector<double>;

// =============================================================================
/// Row-major dense real matrix. Entries are checked for finiteness whenever a
/// matrix is built from caller-supplied data.
///
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transpose() const;
    double frobenius_norm() const;
    double trace() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// =============================================================================
/// Lower-triangular factor L with L·Lᵀ equal to the factored SPD matrix.
///
class CholeskyFactor {
public:
    explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}

    std::size_t dim() const noexcept { return lower_.rows(); }
    const Matrix& lower() const noexcept { return lower_; }

    /// Overwrites b with L⁻¹b.
    void solve_lower_inplace(std::span<double> b) const;
    /// Overwrites b with L⁻ᵀb.
    void solve_upper_inplace(std::span<double> b) const;

    Matrix reconstruct() const;

private:
    Matrix lower_;
};

// --- vector helpers ----------------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha·x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector subtract(std::span<const double> a, std::span<const double> b);

// --- matrix products -----------------------------------------------------------

/// X·v
Vector matvec(const Matrix& X, std::span<const double> v);
/// Xᵀ·v
Vector matvec_t(const Matrix& X, std::span<const double> v);
Matrix matmul(const Matrix& A, const Matrix& B);

/// XᵀX, accumulated as outer products over fixed row blocks.
Matrix gram(const Matrix& X);

Vector row_sq_norms(const Matrix& X);

// --- factorizations and spectra ----------------------------------------------

CholeskyFactor cholesky(const Matrix& A);
Vector solve_spd(const CholeskyFactor& fac, std::span<const double> b);

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
Vector sym_eigvals(const Matrix& A);

/// λ_max / λ_min of an SPD matrix.
double cond_spd(const Matrix& A);

/// Householder-QR thin Q factor, n×d with orthonormal columns spanning col(X).
Matrix orthonormal_colbasis(const Matrix& X);

/// max |λ| of a symmetric matrix.
double spectral_norm(const Matrix& A);

/// Eigenvalues (ascending) of L⁻¹·A·L⁻ᵀ where fac = L. For SPD A these are the
/// eigenvalues of the pencil (A, L·Lᵀ), computed without forming any inverse
/// square root.
Vector pencil_eigvals(const Matrix& A, const CholeskyFactor& fac);

/// L⁻¹·A·L⁻ᵀ, symmetrized.
Matrix congruence_inverse(const Matrix& A, const CholeskyFactor& fac);

}  // namespace sketchls
