#pragma once

// Data-parallel inner loops. Each kernel exists twice: a plain serial loop kept
// as the reference for tests and benchmarks, and an OpenMP version used by the
// library. Reductions in the OpenMP versions run over fixed blocks of
// kRowBlock rows and are combined in block order, so their results do not
// depend on the number of threads.

#include <cstddef>
#include <span>

#include "sketchls/linalg.hpp"

namespace sketchls::kernels {

inline constexpr std::size_t kRowBlock = 256;

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

namespace serial {

void gram(const Matrix& X, Matrix& out);
void matvec(const Matrix& X, std::span<const double> v, std::span<double> out);
void matvec_t(const Matrix& X, std::span<const double> v, std::span<double> out);
void row_sq_norms(const Matrix& X, std::span<double> out);
/// Unnormalized Walsh–Hadamard butterflies applied across the rows of a
/// row-major block of `rows` × `width` values; rows must be a power of two.
void fwht_rows(std::span<double> block, std::size_t rows, std::size_t width);

}  // namespace serial

namespace omp {

void gram(const Matrix& X, Matrix& out);
void matvec(const Matrix& X, std::span<const double> v, std::span<double> out);
void matvec_t(const Matrix& X, std::span<const double> v, std::span<double> out);
void row_sq_norms(const Matrix& X, std::span<double> out);
void fwht_rows(std::span<double> block, std::size_t rows, std::size_t width);

}  // namespace omp

}  // namespace sketchls::kernels
