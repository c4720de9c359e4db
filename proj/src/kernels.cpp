#include "sketchls/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

#include "sketchls/error.hpp"

namespace sketchls::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) { omp_set_num_threads(std::max(1, n)); }

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::DimensionMismatch, what);
}

void mirror_upper(Matrix& out) {
    const std::size_t d = out.rows();
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < j; ++k) out(j, k) = out(k, j);
}

std::size_t block_count(std::size_t n) { return (n + kRowBlock - 1) / kRowBlock; }

// Blocks whose partial sums are materialized at once; bounds scratch memory to
// kBlockGroup·d² doubles. Does not affect the result.
constexpr std::size_t kBlockGroup = 64;

}  // namespace

// --- serial reference ---------------------------------------------------------

namespace serial {

void gram(const Matrix& X, Matrix& out) {
    const std::size_t d = X.cols();
    out = Matrix(d, d);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto r = X.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double xj = r[j];
            for (std::size_t k = j; k < d; ++k) out(j, k) += xj * r[k];
        }
    }
    mirror_upper(out);
}

void matvec(const Matrix& X, std::span<const double> v, std::span<double> out) {
    require(v.size() == X.cols() && out.size() == X.rows(), "matvec dimensions");
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double s = 0.0;
        auto r = X.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * v[j];
        out[i] = s;
    }
}

void matvec_t(const Matrix& X, std::span<const double> v, std::span<double> out) {
    require(v.size() == X.rows() && out.size() == X.cols(), "matvec_t dimensions");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto r = X.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j] * v[i];
    }
}

void row_sq_norms(const Matrix& X, std::span<double> out) {
    require(out.size() == X.rows(), "row_sq_norms dimensions");
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double s = 0.0;
        for (double x : X.row(i)) s += x * x;
        out[i] = s;
    }
}

void fwht_rows(std::span<double> block, std::size_t rows, std::size_t width) {
    require(block.size() == rows * width, "fwht_rows dimensions");
    for (std::size_t h = 1; h < rows; h *= 2) {
        for (std::size_t i = 0; i < rows; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                double* a = block.data() + j * width;
                double* b = block.data() + (j + h) * width;
                for (std::size_t k = 0; k < width; ++k) {
                    const double x = a[k];
                    const double y = b[k];
                    a[k] = x + y;
                    b[k] = x - y;
                }
            }
        }
    }
}

}  // namespace serial

// --- OpenMP ---------------------------------------------------------------------

namespace omp {

void gram(const Matrix& X, Matrix& out) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    const std::size_t dd = d * d;
    out = Matrix(d, d);
    const std::size_t nblocks = block_count(n);
    std::vector<double> partial(std::min(nblocks, kBlockGroup) * dd);
    auto acc = out.data();

    for (std::size_t g0 = 0; g0 < nblocks; g0 += kBlockGroup) {
        const std::size_t g1 = std::min(nblocks, g0 + kBlockGroup);
        const auto count = static_cast<std::ptrdiff_t>(g1 - g0);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < count; ++b) {
            double* p = partial.data() + static_cast<std::size_t>(b) * dd;
            std::fill(p, p + dd, 0.0);
            const std::size_t lo = (g0 + static_cast<std::size_t>(b)) * kRowBlock;
            const std::size_t hi = std::min(n, lo + kRowBlock);
            for (std::size_t i = lo; i < hi; ++i) {
                auto r = X.row(i);
                for (std::size_t j = 0; j < d; ++j) {
                    const double xj = r[j];
                    double* pj = p + j * d;
                    for (std::size_t k = j; k < d; ++k) pj[k] += xj * r[k];
                }
            }
        }
        for (std::ptrdiff_t b = 0; b < count; ++b) {
            const double* p = partial.data() + static_cast<std::size_t>(b) * dd;
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = j; k < d; ++k) acc[j * d + k] += p[j * d + k];
        }
    }
    mirror_upper(out);
}

void matvec(const Matrix& X, std::span<const double> v, std::span<double> out) {
    require(v.size() == X.cols() && out.size() == X.rows(), "matvec dimensions");
    const auto n = static_cast<std::ptrdiff_t>(X.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        auto r = X.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * v[j];
        out[static_cast<std::size_t>(i)] = s;
    }
}

void matvec_t(const Matrix& X, std::span<const double> v, std::span<double> out) {
    require(v.size() == X.rows() && out.size() == X.cols(), "matvec_t dimensions");
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    const std::size_t nblocks = block_count(n);
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> partial(std::min(nblocks, kBlockGroup) * d);

    for (std::size_t g0 = 0; g0 < nblocks; g0 += kBlockGroup) {
        const std::size_t g1 = std::min(nblocks, g0 + kBlockGroup);
        const auto count = static_cast<std::ptrdiff_t>(g1 - g0);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < count; ++b) {
            double* p = partial.data() + static_cast<std::size_t>(b) * d;
            std::fill(p, p + d, 0.0);
            const std::size_t lo = (g0 + static_cast<std::size_t>(b)) * kRowBlock;
            const std::size_t hi = std::min(n, lo + kRowBlock);
            for (std::size_t i = lo; i < hi; ++i) {
                auto r = X.row(i);
                const double vi = v[i];
                for (std::size_t j = 0; j < d; ++j) p[j] += r[j] * vi;
            }
        }
        for (std::ptrdiff_t b = 0; b < count; ++b) {
            const double* p = partial.data() + static_cast<std::size_t>(b) * d;
            for (std::size_t j = 0; j < d; ++j) out[j] += p[j];
        }
    }
}

void row_sq_norms(const Matrix& X, std::span<double> out) {
    require(out.size() == X.rows(), "row_sq_norms dimensions");
    const auto n = static_cast<std::ptrdiff_t>(X.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double x : X.row(static_cast<std::size_t>(i))) s += x * x;
        out[static_cast<std::size_t>(i)] = s;
    }
}

void fwht_rows(std::span<double> block, std::size_t rows, std::size_t width) {
    require(block.size() == rows * width, "fwht_rows dimensions");
    const auto pairs = static_cast<std::ptrdiff_t>(rows / 2);
    double* base = block.data();
#pragma omp parallel
    for (std::size_t h = 1; h < rows; h *= 2) {
        // Implicit barrier at the end of each level.
#pragma omp for schedule(static)
        for (std::ptrdiff_t q = 0; q < pairs; ++q) {
            const auto uq = static_cast<std::size_t>(q);
            const std::size_t j = (uq / h) * 2 * h + uq % h;
            double* a = base + j * width;
            double* b = base + (j + h) * width;
            for (std::size_t k = 0; k < width; ++k) {
                const double x = a[k];
                const double y = b[k];
                a[k] = x + y;
                b[k] = x - y;
            }
        }
    }
}

}  // namespace omp

}  // namespace sketchls::kernels
