#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sketchls/error.hpp"
#include "sketchls/linalg.hpp"
#include "test_util.hpp"

namespace sketchls {
namespace {

using testing::naive_gram;
using testing::random_matrix;
using testing::random_spd;

void expect_kind(ErrorKind kind, auto&& fn) {
    try {
        fn();
        FAIL() << "expected " << to_string(kind);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

TEST(Matrix, RejectsWrongLength) {
    expect_kind(ErrorKind::DimensionMismatch, [] { Matrix(2, 2, {1.0, 2.0, 3.0}); });
}

TEST(Matrix, RejectsNonFinite) {
    expect_kind(ErrorKind::NonFinite, [] { Matrix(1, 2, {1.0, std::nan("")}); });
    expect_kind(ErrorKind::NonFinite, [] { Matrix(1, 1, {INFINITY}); });
}

TEST(Matrix, TransposeAndTrace) {
    const Matrix A = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    const Matrix T = A.transpose();
    EXPECT_EQ(T.rows(), 3u);
    EXPECT_EQ(T(2, 1), 6.0);
    EXPECT_EQ(Matrix::from_rows({{1, 2}, {3, 4}}).trace(), 5.0);
}

TEST(Gram, Examples) {
    EXPECT_EQ(gram(Matrix::identity(2)), Matrix::identity(2));
    EXPECT_EQ(gram(Matrix::from_rows({{1, 2}, {3, 4}})), Matrix::from_rows({{10, 14}, {14, 20}}));
    EXPECT_EQ(gram(Matrix::from_rows({{1}, {1}, {1}})), Matrix::from_rows({{3}}));
}

TEST(Gram, MatchesNaiveProductAcrossBlocks) {
    const Matrix X = random_matrix(1000, 7, 3);
    const Matrix G = gram(X);
    const Matrix ref = naive_gram(X);
    EXPECT_LE(testing::max_abs_diff(G.data(), ref.data()), 1e-10);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(G(i, j), G(j, i));
}

TEST(Products, MatvecAndTransposeMatchNaive) {
    const Matrix X = random_matrix(700, 5, 9);
    const Vector v = testing::random_vector(5, 10);
    const Vector w = testing::random_vector(700, 11);
    EXPECT_LE(testing::max_abs_diff(matvec(X, v), testing::naive_matvec(X, v)), 1e-12);
    EXPECT_LE(testing::max_abs_diff(matvec_t(X, w), testing::naive_matvec(X.transpose(), w)), 1e-11);
    const Matrix B = random_matrix(5, 3, 12);
    EXPECT_LE(testing::max_abs_diff(matmul(X, B).data(), testing::naive_matmul(X, B).data()), 1e-12);
}

TEST(Cholesky, Examples) {
    EXPECT_EQ(cholesky(Matrix::identity(2)).lower(), Matrix::identity(2));
    const CholeskyFactor f = cholesky(Matrix::from_rows({{4, 2}, {2, 5}}));
    EXPECT_NEAR(f.lower()(0, 0), 2.0, 1e-15);
    EXPECT_NEAR(f.lower()(1, 0), 1.0, 1e-15);
    EXPECT_NEAR(f.lower()(1, 1), 2.0, 1e-15);
    EXPECT_EQ(f.lower()(0, 1), 0.0);
    expect_kind(ErrorKind::NotPositiveDefinite, [] { cholesky(Matrix::from_rows({{1, 2}, {2, 1}})); });
}

TEST(Cholesky, RejectsAsymmetric) {
    expect_kind(ErrorKind::InvalidArgument, [] { cholesky(Matrix::from_rows({{2, 1}, {0, 2}})); });
}

TEST(Cholesky, ReconstructsRandomSpd) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix A = random_spd(1 + seed % 12, seed);
        const CholeskyFactor f = cholesky(A);
        for (std::size_t i = 0; i < f.dim(); ++i) EXPECT_GT(f.lower()(i, i), 0.0);
        const Matrix R = f.reconstruct();
        EXPECT_LE(testing::max_abs_diff(R.data(), A.data()) / A.frobenius_norm(), 1e-10);
    }
}

TEST(SolveSpd, Examples) {
    const Vector x = solve_spd(cholesky(Matrix::identity(3)), Vector{1, 2, 3});
    EXPECT_EQ(x, (Vector{1, 2, 3}));
    const Vector y = solve_spd(cholesky(Matrix::from_rows({{4, 2}, {2, 5}})), Vector{8, 9});
    EXPECT_NEAR(y[0], 1.375, 1e-14);
    EXPECT_NEAR(y[1], 1.25, 1e-14);
    expect_kind(ErrorKind::DimensionMismatch,
                [] { solve_spd(cholesky(Matrix::identity(2)), Vector{1, 2, 3}); });
}

TEST(SolveSpd, RecoversSolutionOnRandomSystems) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t d = 1 + seed % 50;
        const Matrix A = random_spd(d, 1000 + seed);
        const Vector x = testing::random_vector(d, 2000 + seed);
        const Vector got = solve_spd(cholesky(A), testing::naive_matvec(A, x));
        EXPECT_LE(testing::rel_diff(got, x), 1e-9) << "seed " << seed;
    }
}

TEST(SymEigvals, Examples) {
    const Vector a = sym_eigvals(Matrix::diagonal(Vector{3, 1, 2}));
    EXPECT_EQ(a, (Vector{1, 2, 3}));
    const Vector b = sym_eigvals(Matrix::from_rows({{2, 1}, {1, 2}}));
    EXPECT_NEAR(b[0], 1.0, 1e-14);
    EXPECT_NEAR(b[1], 3.0, 1e-14);
    EXPECT_EQ(sym_eigvals(Matrix(2, 2)), (Vector{0, 0}));
}

TEST(SymEigvals, TraceIdentityAndPermutationInvariance) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t d = 2 + seed % 20;
        Matrix A = random_matrix(d, d, seed);
        A = Matrix(d, d, [&] {
            Vector s(d * d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) s[i * d + j] = A(i, j) + A(j, i);
            return s;
        }());
        const Vector ev = sym_eigvals(A);
        EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
        const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
        EXPECT_NEAR(sum, A.trace(), 1e-9 * std::max(1.0, std::abs(A.trace()) + A.frobenius_norm()));

        // Reverse permutation PᵀAP.
        Matrix P(d, d);
        for (std::size_t i = 0; i < d; ++i) P(i, d - 1 - i) = 1.0;
        const Matrix B = testing::naive_matmul(testing::naive_matmul(P.transpose(), A), P);
        const Vector ev2 = sym_eigvals(B);
        EXPECT_LE(testing::max_abs_diff(ev, ev2), 1e-9 * std::max(1.0, spectral_norm(A)));
    }
}

TEST(SymEigvals, MatchesCharacteristicPolynomialOn2x2) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Vector r = testing::random_vector(3, seed);
        const Matrix A = Matrix::from_rows({{r[0], r[1]}, {r[1], r[2]}});
        const double mid = 0.5 * (r[0] + r[2]);
        const double rad = std::hypot(0.5 * (r[0] - r[2]), r[1]);
        const Vector ev = sym_eigvals(A);
        EXPECT_NEAR(ev[0], mid - rad, 1e-12);
        EXPECT_NEAR(ev[1], mid + rad, 1e-12);
    }
}

TEST(CondSpd, Examples) {
    EXPECT_NEAR(cond_spd(Matrix::identity(4)), 1.0, 1e-15);
    EXPECT_NEAR(cond_spd(Matrix::diagonal(Vector{100, 1})), 100.0, 1e-12);
    expect_kind(ErrorKind::SingularMatrix, [] { cond_spd(Matrix::diagonal(Vector{1, 0})); });
}

TEST(CondSpd, ScaleInvariant) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Matrix A = random_spd(6, seed);
        const double k = cond_spd(A);
        for (double& v : A.data()) v *= 37.5;
        EXPECT_NEAR(cond_spd(A), k, 1e-9 * k);
    }
}

TEST(OrthonormalColbasis, Examples) {
    Matrix X(4, 2);
    X(0, 0) = 1.0;
    X(3, 1) = 1.0;
    const Matrix U = orthonormal_colbasis(X);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(U(i, j)), std::abs(X(i, j)), 1e-14);

    const Matrix u = orthonormal_colbasis(Matrix::from_rows({{3}, {4}}));
    EXPECT_NEAR(std::abs(u(0, 0)), 0.6, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 0)), 0.8, 1e-15);
    EXPECT_EQ(u(0, 0) > 0, u(1, 0) > 0);

    expect_kind(ErrorKind::RankDeficient, [] { orthonormal_colbasis(Matrix::from_rows({{1, 2}, {2, 4}})); });
}

TEST(OrthonormalColbasis, OrthonormalAndSpansColumns) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix X = random_matrix(40 + seed, 1 + seed % 8, seed);
        const Matrix U = orthonormal_colbasis(X);
        const Matrix G = gram(U);
        EXPECT_LE(testing::max_abs_diff(G.data(), Matrix::identity(X.cols()).data()), 1e-10);
        // Projection of X onto span(U) reproduces X.
        const Matrix P = testing::naive_matmul(U, testing::naive_matmul(U.transpose(), X));
        EXPECT_LE(testing::max_abs_diff(P.data(), X.data()), 1e-10 * X.frobenius_norm());
    }
}

TEST(RowSqNorms, Examples) {
    EXPECT_EQ(row_sq_norms(Matrix::identity(3)), (Vector{1, 1, 1}));
    EXPECT_EQ(row_sq_norms(Matrix::from_rows({{3, 4}, {0, 0}})), (Vector{25, 0}));
    EXPECT_EQ(row_sq_norms(Matrix::from_rows({{-2}})), (Vector{4}));
}

TEST(SpectralNorm, Examples) {
    EXPECT_NEAR(spectral_norm(Matrix::diagonal(Vector{-3, 2})), 3.0, 1e-15);
    EXPECT_EQ(spectral_norm(Matrix(3, 3)), 0.0);
    EXPECT_NEAR(spectral_norm(Matrix::from_rows({{2, 1}, {1, 2}})), 3.0, 1e-14);
}

TEST(PencilEigvals, MatchInverseProductSpectrum) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix A = random_spd(4, seed);
        const Matrix B = random_spd(4, 100 + seed);
        const Vector ev = pencil_eigvals(A, cholesky(B));
        // Eigenvalues of B⁻¹A are the roots of det(A − λB); check det ≈ 0 via the
        // smallest eigenvalue of the shifted symmetric form L⁻¹(A − λB)L⁻ᵀ.
        const Matrix Binv_A = testing::naive_matmul(testing::naive_inverse(B), A);
        double tr = 0.0;
        for (std::size_t i = 0; i < 4; ++i) tr += Binv_A(i, i);
        EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), tr, 1e-9 * std::abs(tr));
        for (double lam : ev) {
            Matrix S(4, 4);
            for (std::size_t i = 0; i < 16; ++i) S.data()[i] = A.data()[i] - lam * B.data()[i];
            const Vector sev = pencil_eigvals(S, cholesky(B));
            double closest = INFINITY;
            for (double s : sev) closest = std::min(closest, std::abs(s));
            EXPECT_LE(closest, 1e-9 * ev.back());
        }
    }
}

TEST(VectorHelpers, Basics) {
    EXPECT_EQ(dot(Vector{1, 2, 3}, Vector{4, 5, 6}), 32.0);
    EXPECT_NEAR(norm2(Vector{3, 4}), 5.0, 1e-15);
    EXPECT_DOUBLE_EQ(norm2(Vector{1e200, 1e200}), std::sqrt(2.0) * 1e200);
    Vector y{1, 1};
    axpy(2.0, Vector{1, 2}, y);
    EXPECT_EQ(y, (Vector{3, 5}));
    EXPECT_EQ(subtract(Vector{3, 5}, Vector{1, 1}), (Vector{2, 4}));
}

}  // namespace
}  // namespace sketchls
