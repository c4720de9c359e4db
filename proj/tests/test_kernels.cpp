#include <gtest/gtest.h>

#include "sketchls/kernels.hpp"
#include "test_util.hpp"

namespace sketchls {
namespace {

using testing::random_matrix;

class KernelThreads : public ::testing::TestWithParam<std::size_t> {
protected:
    void TearDown() override { kernels::set_threads(saved_); }
    int saved_ = kernels::max_threads();
};

TEST_P(KernelThreads, GramAgreesWithSerialAndIsThreadCountInvariant) {
    const Matrix X = random_matrix(GetParam(), 6, GetParam());
    Matrix serial(6, 6);
    kernels::serial::gram(X, serial);
    kernels::set_threads(1);
    Matrix one(6, 6);
    kernels::omp::gram(X, one);
    EXPECT_LE(testing::max_abs_diff(one.data(), serial.data()), 1e-10 * (1.0 + serial.frobenius_norm()));
    for (int t : {2, 3, 8}) {
        kernels::set_threads(t);
        Matrix many(6, 6);
        kernels::omp::gram(X, many);
        EXPECT_EQ(many, one) << t << " threads";
    }
}

TEST_P(KernelThreads, MatvecTransposeThreadCountInvariant) {
    const std::size_t n = GetParam();
    const Matrix X = random_matrix(n, 5, n + 1);
    const Vector w = testing::random_vector(n, n + 2);
    Vector serial(5);
    kernels::serial::matvec_t(X, w, serial);
    kernels::set_threads(1);
    Vector one(5);
    kernels::omp::matvec_t(X, w, one);
    EXPECT_LE(testing::max_abs_diff(one, serial), 1e-10 * (1.0 + testing::max_abs_diff(serial, Vector(5, 0.0))));
    for (int t : {2, 4, 7}) {
        kernels::set_threads(t);
        Vector many(5);
        kernels::omp::matvec_t(X, w, many);
        EXPECT_EQ(many, one);
    }
}

TEST_P(KernelThreads, RowwiseKernelsMatchSerialExactly) {
    const std::size_t n = GetParam();
    const Matrix X = random_matrix(n, 9, n + 3);
    const Vector v = testing::random_vector(9, n + 4);
    Vector a(n), b(n), c(n), e(n);
    kernels::serial::matvec(X, v, a);
    kernels::serial::row_sq_norms(X, c);
    kernels::set_threads(4);
    kernels::omp::matvec(X, v, b);
    kernels::omp::row_sq_norms(X, e);
    EXPECT_EQ(a, b);
    EXPECT_EQ(c, e);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelThreads, ::testing::Values(1, 255, 256, 257, 5000, 70000));

TEST(FwhtRows, OmpMatchesSerialBitwise) {
    for (std::size_t rows : {1u, 2u, 64u, 4096u}) {
        for (std::size_t width : {1u, 3u, 51u}) {
            Matrix block = random_matrix(rows, width, rows * 100 + width);
            Matrix copy = block;
            kernels::serial::fwht_rows(block.data(), rows, width);
            for (int t : {1, 3, 8}) {
                kernels::set_threads(t);
                Matrix b2 = copy;
                kernels::omp::fwht_rows(b2.data(), rows, width);
                EXPECT_EQ(b2, block) << rows << "x" << width << " threads " << t;
            }
        }
    }
}

TEST(FwhtRows, MatchesExplicitHadamard) {
    const std::size_t n = 16;
    const Matrix X = random_matrix(n, 3, 5);
    Matrix got = X;
    kernels::omp::fwht_rows(got.data(), n, 3);
    Matrix ref = testing::naive_matmul(testing::hadamard(n), X);
    for (double& r : ref.data()) r *= 4.0;
    EXPECT_LE(testing::max_abs_diff(got.data(), ref.data()), 1e-12);
}

}  // namespace
}  // namespace sketchls
