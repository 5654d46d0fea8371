#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wrhss/gmres.hpp"

using namespace wrhss;

namespace {
auto dense_op(const DenseCMatrix& m) {
    return [&m](std::span<const Complex> in, std::span<Complex> out) { m.matvec(in, out); };
}
}  // namespace

TEST(Gmres, IdentityImmediate) {
    auto g = test::rng(301);
    DenseCMatrix id = DenseCMatrix::identity(6);
    CVector b = test::random_cvector(6, g);
    GmresOptions opt;
    opt.restart = 4;
    opt.eta = 1e-10;
    GmresResult r = gmres_householder(dense_op(id), b, opt);
    ASSERT_TRUE(r.converged);
    EXPECT_EQ(r.inner_steps, 1);
    EXPECT_LE(max_abs_diff(r.x, b), 1e-12);
}

TEST(Gmres, TwoDistinctEigenvalues) {
    DenseCMatrix m(2);
    m.at(0, 0) = {1, 0};
    m.at(1, 1) = {2, 0};
    CVector b = {{1, 0}, {1, 0}};
    GmresOptions opt;
    opt.restart = 2;
    opt.eta = 1e-12;
    GmresResult r = gmres_householder(dense_op(m), b, opt);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.inner_steps, 2);
    EXPECT_NEAR(std::abs(r.x[0] - Complex(1, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.x[1] - Complex(0.5, 0)), 0.0, 1e-12);
}

TEST(Gmres, RandomDiagDominantVsDenseLU) {
    auto g = test::rng(302);
    const long n = 20;
    DenseCMatrix m(n);
    for (long i = 0; i < n; ++i) {
        double off = 0;
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            m.at(i, j) = 0.3 * test::random_complex(g);
            off += std::abs(m.at(i, j));
        }
        m.at(i, i) = Complex(off + 1.0, 0.3);
    }
    CVector b = test::random_cvector(n, g);
    GmresOptions opt;
    opt.restart = 5;
    opt.eta = 1e-12;
    opt.max_matvecs = 10000;
    GmresResult r = gmres_householder(dense_op(m), b, opt);
    ASSERT_TRUE(r.converged);
    CVector want = dense_solve(m, b);
    EXPECT_LE(max_abs_diff(r.x, want), 1e-10);
}

TEST(Gmres, HouseholderBasisOrthogonality) {
    auto g = test::rng(303);
    const long n = 30;
    DenseCMatrix m = test::random_dense(n, g);
    for (long i = 0; i < n; ++i) m.at(i, i) += Complex(6, 0);
    CVector b = test::random_cvector(n, g);
    GmresOptions opt;
    opt.restart = 8;
    opt.eta = 1e-13;
    opt.max_matvecs = 8;  // force exactly one full cycle
    std::vector<CVector> basis;
    gmres_householder(dense_op(m), b, opt, nullptr, &basis);
    ASSERT_GE(basis.size(), 2u);
    const long k = static_cast<long>(basis.size());
    double worst = 0.0;
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) {
            const Complex vij = dot(basis[i], basis[j]);
            const Complex want = (i == j) ? Complex(1, 0) : Complex(0, 0);
            worst = std::max(worst, std::abs(vij - want));
        }
    EXPECT_LE(worst, 1e-12);
}

TEST(Gmres, MaxitFlagged) {
    auto g = test::rng(304);
    const long n = 40;
    DenseCMatrix m = test::random_dense(n, g);
    for (long i = 0; i < n; ++i) m.at(i, i) += Complex(0.1, 0);  // hard, nearly singular
    CVector b = test::random_cvector(n, g);
    GmresOptions opt;
    opt.restart = 3;
    opt.eta = 1e-14;
    opt.max_matvecs = 9;
    GmresResult r = gmres_householder(dense_op(m), b, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(static_cast<long>(r.x.size()), n);
    EXPECT_TRUE(all_finite(r.x));
}

TEST(Gmres, WarmStartWithAbsoluteDenominator) {
    auto g = test::rng(305);
    DenseCMatrix m = DenseCMatrix::identity(8);
    for (long i = 0; i < 8; ++i) m.at(i, i) = Complex(2 + i, 0);
    CVector b = test::random_cvector(8, g);
    CVector exact = dense_solve(m, b);
    GmresOptions opt;
    opt.restart = 4;
    opt.eta = 1e-11;
    opt.denom_override = norm2(b);
    GmresResult r = gmres_householder(dense_op(m), b, opt, &exact);
    ASSERT_TRUE(r.converged);
    EXPECT_EQ(r.inner_steps, 0);  // already within tolerance of the target
    EXPECT_LE(max_abs_diff(r.x, exact), 1e-13);
}
