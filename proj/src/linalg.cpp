#include "sketchls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sketchls/error.hpp"
#include "sketchls/kernels.hpp"

namespace sketchls {

namespace {

void check_finite(std::span<const double> data) {
    for (double v : data)
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "matrix entry is NaN or Inf");
}

void require_square(const Matrix& A, const char* op) {
    if (A.rows() != A.cols())
        throw Error(ErrorKind::DimensionMismatch, std::string(op) + " needs a square matrix");
}

void require_symmetric(const Matrix& A, const char* op) {
    require_square(A, op);
    double scale = 0.0;
    for (double v : A.data()) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * scale;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(A(i, j) - A(j, i)) > tol)
                throw Error(ErrorKind::InvalidArgument, std::string(op) + " needs a symmetric matrix");
}

}  // namespace

// --- Matrix --------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw Error(ErrorKind::DimensionMismatch,
                    "data length " + std::to_string(data_.size()) + " != " + std::to_string(rows_) +
                        "x" + std::to_string(cols_));
    check_finite(data_);
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    check_finite(diag);
    Matrix D(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) D(i, i) = diag[i];
    return D;
}

Matrix Matrix::transpose() const {
    Matrix T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    return T;
}

double Matrix::frobenius_norm() const { return norm2(data_); }

double Matrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

// --- CholeskyFactor --------------------------------------------------------------

void CholeskyFactor::solve_lower_inplace(std::span<double> b) const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        auto li = lower_.row(i);
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
        b[i] = s / li[i];
    }
}

void CholeskyFactor::solve_upper_inplace(std::span<double> b) const {
    const std::size_t n = dim();
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * b[k];
        b[ii] = s / lower_(ii, ii);
    }
}

Matrix CholeskyFactor::reconstruct() const { return matmul(lower_, lower_.transpose()); }

// --- vectors -----------------------------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot lengths differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    // Scaled accumulation, safe for huge or tiny entries.
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double v : a) {
        const double t = v / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "axpy lengths differ");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "subtract lengths differ");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

// --- products --------------------------------------------------------------------

Vector matvec(const Matrix& X, std::span<const double> v) {
    if (v.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "matvec: vector length != cols");
    Vector out(X.rows());
    kernels::omp::matvec(X, v, out);
    return out;
}

Vector matvec_t(const Matrix& X, std::span<const double> v) {
    if (v.size() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "matvec_t: vector length != rows");
    Vector out(X.cols());
    kernels::omp::matvec_t(X, v, out);
    return out;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
    if (A.cols() != B.rows()) throw Error(ErrorKind::DimensionMismatch, "matmul inner dimensions");
    Matrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto ci = C.row(i);
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            auto bk = B.row(k);
            for (std::size_t j = 0; j < B.cols(); ++j) ci[j] += a * bk[j];
        }
    }
    return C;
}

Matrix gram(const Matrix& X) {
    Matrix out;
    kernels::omp::gram(X, out);
    return out;
}

Vector row_sq_norms(const Matrix& X) {
    Vector out(X.rows());
    kernels::omp::row_sq_norms(X, out);
    return out;
}

// --- Cholesky ----------------------------------------------------------------------

CholeskyFactor cholesky(const Matrix& A) {
    require_symmetric(A, "cholesky");
    const std::size_t n = A.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(A(i, i)));
    const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

    Matrix L(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        auto lj = L.row(j);
        double pivot = A(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= lj[k] * lj[k];
        if (!(pivot > threshold))
            throw Error(ErrorKind::NotPositiveDefinite,
                        "pivot " + std::to_string(j) + " is " + std::to_string(pivot));
        const double ljj = std::sqrt(pivot);
        lj[j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            auto li = L.row(i);
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            li[j] = s / ljj;
        }
    }
    return CholeskyFactor(std::move(L));
}

Vector solve_spd(const CholeskyFactor& fac, std::span<const double> b) {
    if (fac.dim() != b.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "factor dim " + std::to_string(fac.dim()) + " != rhs length " + std::to_string(b.size()));
    Vector x(b.begin(), b.end());
    fac.solve_lower_inplace(x);
    fac.solve_upper_inplace(x);
    return x;
}

// --- Jacobi eigenvalues ------------------------------------------------------------------

Vector sym_eigvals(const Matrix& A) {
    require_symmetric(A, "sym_eigvals");
    const std::size_t n = A.rows();
    Matrix a = A;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i) = 0.5 * (A(i, j) + A(j, i));

    const double target = 1e-12 * a.frobenius_norm();
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
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
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }

    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double cond_spd(const Matrix& A) {
    const Vector eig = sym_eigvals(A);
    if (eig.empty()) throw Error(ErrorKind::EmptyInput, "cond_spd of an empty matrix");
    const double lo = eig.front();
    const double hi = eig.back();
    if (!(lo > 1e-14 * hi))
        throw Error(ErrorKind::SingularMatrix,
                    "lambda_min " + std::to_string(lo) + " vs lambda_max " + std::to_string(hi));
    return hi / lo;
}

double spectral_norm(const Matrix& A) {
    const Vector eig = sym_eigvals(A);
    if (eig.empty()) return 0.0;
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

// --- Householder QR ----------------------------------------------------------------

Matrix orthonormal_colbasis(const Matrix& X) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (n < d) throw Error(ErrorKind::RankDeficient, "more columns than rows");
    const double tol = 1e-12 * X.frobenius_norm();

    Matrix R = X;
    std::vector<Vector> reflectors(d);
    Vector w(d);
    for (std::size_t k = 0; k < d; ++k) {
        Vector v(n - k);
        for (std::size_t i = k; i < n; ++i) v[i - k] = R(i, k);
        const double xnorm = norm2(v);
        const double alpha = -std::copysign(xnorm, v[0]);
        if (!(std::abs(alpha) > tol))
            throw Error(ErrorKind::RankDeficient, "column " + std::to_string(k) + " is dependent");
        v[0] -= alpha;
        const double vnorm = norm2(v);
        for (double& vi : v) vi /= vnorm;

        // R ← (I − 2vvᵀ)R on rows k.., columns k..
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = k; i < n; ++i) {
            const double vi = v[i - k];
            auto ri = R.row(i);
            for (std::size_t j = k; j < d; ++j) w[j] += vi * ri[j];
        }
        for (std::size_t i = k; i < n; ++i) {
            const double vi = 2.0 * v[i - k];
            auto ri = R.row(i);
            for (std::size_t j = k; j < d; ++j) ri[j] -= vi * w[j];
        }
        reflectors[k] = std::move(v);
    }

    Matrix Q(n, d);
    for (std::size_t i = 0; i < d; ++i) Q(i, i) = 1.0;
    for (std::size_t k = d; k-- > 0;) {
        const Vector& v = reflectors[k];
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = k; i < n; ++i) {
            const double vi = v[i - k];
            auto qi = Q.row(i);
            for (std::size_t j = 0; j < d; ++j) w[j] += vi * qi[j];
        }
        for (std::size_t i = k; i < n; ++i) {
            const double vi = 2.0 * v[i - k];
            auto qi = Q.row(i);
            for (std::size_t j = 0; j < d; ++j) qi[j] -= vi * w[j];
        }
    }
    return Q;
}

// --- congruence ---------------------------------------------------------------------

Matrix congruence_inverse(const Matrix& A, const CholeskyFactor& fac) {
    require_square(A, "congruence_inverse");
    const std::size_t n = A.rows();
    if (fac.dim() != n) throw Error(ErrorKind::DimensionMismatch, "congruence_inverse dimensions");

    // T = L⁻¹A, one column at a time.
    Matrix T(n, n);
    Vector col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = A(i, j);
        fac.solve_lower_inplace(col);
        for (std::size_t i = 0; i < n; ++i) T(i, j) = col[i];
    }
    // B = L⁻¹Tᵀ = L⁻¹AᵀL⁻ᵀ.
    Matrix B(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = T(j, i);
        fac.solve_lower_inplace(col);
        for (std::size_t i = 0; i < n; ++i) B(i, j) = col[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) B(i, j) = B(j, i) = 0.5 * (B(i, j) + B(j, i));
    return B;
}

Vector pencil_eigvals(const Matrix& A, const CholeskyFactor& fac) {
    return sym_eigvals(congruence_inverse(A, fac));
}

}  // namespace sketchls
