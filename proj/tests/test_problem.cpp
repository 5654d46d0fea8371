#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wrhss/eig.hpp"
#include "wrhss/problem.hpp"

using namespace wrhss;

namespace {
ProblemSpec spec1d(long n, double q) {
    ProblemSpec s;
    s.d = 1;
    s.n = n;
    s.q = q;
    s.dt = 1e-2;
    return s;
}
}  // namespace

TEST(Problem, DirectSubstitution1D) {
    DiscreteProblem p = build_problem(spec1d(3, 8.0));
    EXPECT_DOUBLE_EQ(p.h, 0.25);
    EXPECT_DOUBLE_EQ(p.re, 1.0);
    EXPECT_EQ(p.a_op.axis.sub[0], Complex(-2, 0));
    EXPECT_EQ(p.a_op.axis.diag[0], Complex(2, 0));
    EXPECT_EQ(p.a_op.axis.super[0], Complex(0, 0));
}

TEST(Problem, MeshReynoldsN64) {
    DiscreteProblem p = build_problem(spec1d(64, 1.0));
    EXPECT_NEAR(p.re, 1.0 / 130.0, 1e-18);
    EXPECT_NEAR(p.alpha_default(), 1.0 / 130.0, 1e-18);
}

TEST(Problem, SplitSumsToA2D) {
    ProblemSpec s;
    s.d = 2;
    s.n = 2;
    s.q = 3.7;
    s.dt = 1e-3;
    DiscreteProblem p = build_problem(s);
    DenseCMatrix a = test::dense_grid_operator(p.a_op);
    DenseCMatrix hs = test::dense_grid_operator(p.h_op) + test::dense_grid_operator(p.s_op);
    EXPECT_EQ(a.a, hs.a);
}

TEST(Problem, ManufacturedForcing) {
    DiscreteProblem p = build_problem(spec1d(8, 16.0));  // h=1/9... use exact checks loosely
    CVector f = manufactured_forcing(p, 0.0);
    // interior rows: row sum of A is 0, so f = -h^2 there
    for (long i = 1; i + 1 < p.n; ++i) EXPECT_NEAR(f[i].real(), -p.bscale, 1e-15);
    EXPECT_NEAR(f[0].real(), -p.bscale + 1.0 + p.re, 1e-14);
    EXPECT_NEAR(f[p.n - 1].real(), -p.bscale + 1.0 - p.re, 1e-14);
    // separable time factor
    CVector f2 = manufactured_forcing(p, 1.5);
    for (long i = 0; i < p.n; ++i)
        EXPECT_NEAR(std::abs(f2[i] - std::exp(-1.5) * f[i]), 0.0, 1e-16);
}

TEST(Problem, HsSplitDefinition) {
    DiscreteProblem p = build_problem(spec1d(3, 8.0));  // Re = 1
    auto [h, s] = hs_split(p);
    EXPECT_EQ(h.axis.sub[0], Complex(-1, 0));
    EXPECT_EQ(h.axis.diag[0], Complex(2, 0));
    EXPECT_EQ(h.axis.super[0], Complex(-1, 0));
    EXPECT_EQ(s.axis.sub[0], Complex(-1, 0));
    EXPECT_EQ(s.axis.diag[0], Complex(0, 0));
    EXPECT_EQ(s.axis.super[0], Complex(1, 0));

    DiscreteProblem p0 = build_problem(spec1d(3, 0.0));
    auto [h0, s0] = hs_split(p0);
    for (const Complex& v : s0.axis.sub) EXPECT_EQ(v, Complex(0, 0));
    for (const Complex& v : s0.axis.super) EXPECT_EQ(v, Complex(0, 0));
}

TEST(Problem, HsSplitMatchesDenseTransposeOracle) {
    ProblemSpec s;
    s.d = 2;
    s.n = 3;
    s.q = 4.0;  // h=0.25: Re=0.5 exactly representable, transpose halves are exact
    s.dt = 1.0;
    DiscreteProblem p = build_problem(s);
    DenseCMatrix a = test::dense_grid_operator(p.a_op);
    DenseCMatrix at = a.conj_transpose();
    DenseCMatrix hw = Complex(0.5, 0) * (a + at);
    DenseCMatrix sw = Complex(0.5, 0) * (a - at);
    EXPECT_EQ(test::dense_grid_operator(p.h_op).a, hw.a);
    EXPECT_EQ(test::dense_grid_operator(p.s_op).a, sw.a);

    // arbitrary q agrees to roundoff
    s.q = 3.1415;
    DiscreteProblem p2 = build_problem(s);
    DenseCMatrix a2 = test::dense_grid_operator(p2.a_op);
    DenseCMatrix hw2 = Complex(0.5, 0) * (a2 + a2.conj_transpose());
    DenseCMatrix diff = test::dense_grid_operator(p2.h_op) - hw2;
    EXPECT_LE(diff.frobenius(), 1e-15);
}

TEST(Problem, ClosedFormEigenvaluesMatchEigModule) {
    for (int d : {1, 2}) {
        ProblemSpec s;
        s.d = d;
        s.n = (d == 1) ? 16 : 4;
        s.q = 5.0;
        s.dt = 1.0;
        DiscreteProblem p = build_problem(s);
        DenseCMatrix hd = test::dense_grid_operator(p.h_op);
        EigenResult r = complex_eigenvalues(hd);
        ASSERT_TRUE(r.converged);
        std::vector<double> got;
        for (const Complex& l : r.eigenvalues) got.push_back(l.real());
        std::sort(got.begin(), got.end());
        std::vector<double> want = p.h_eigenvalues();
        std::sort(want.begin(), want.end());
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
        EXPECT_NEAR(want.front(), p.lambda_min_H(), 1e-14);
        EXPECT_NEAR(want.back(), p.lambda_max_H(), 1e-14);
        EXPECT_GT(p.lambda_min_H(), 0.0);
    }
}

TEST(Problem, ConstantModeInteriorRows) {
    for (int d : {1, 2}) {
        ProblemSpec s;
        s.d = d;
        s.n = 7;
        s.q = 11.0;
        s.dt = 1.0;
        DiscreteProblem p = build_problem(s);
        CVector y(p.r);
        p.apply_A(ones(p.r), y);
        if (d == 1) {
            for (long i = 1; i + 1 < p.n; ++i) EXPECT_NEAR(std::abs(y[i]), 0.0, 1e-15);
        } else {
            for (long iy = 1; iy + 1 < p.n; ++iy)
                for (long ix = 1; ix + 1 < p.n; ++ix)
                    EXPECT_NEAR(std::abs(y[iy * p.n + ix]), 0.0, 1e-15);
        }
    }
}

TEST(Problem, SkewPartLinearInQ) {
    ProblemSpec s = spec1d(9, 3.3);
    DiscreteProblem p1 = build_problem(s);
    s.q = 6.6;
    DiscreteProblem p2 = build_problem(s);
    for (long i = 0; i < p1.n - 1; ++i) {
        EXPECT_EQ(p2.s_op.axis.super[i], 2.0 * p1.s_op.axis.super[i]);
        EXPECT_EQ(p2.s_op.axis.sub[i], 2.0 * p1.s_op.axis.sub[i]);
    }
    // H independent of q
    EXPECT_EQ(p1.h_op.axis.diag, p2.h_op.axis.diag);
    EXPECT_EQ(p1.h_op.axis.sub, p2.h_op.axis.sub);
}

TEST(Problem, SpecValidation) {
    ProblemSpec s = spec1d(4, 1.0);
    s.dt = 0.0;
    EXPECT_THROW(build_problem(s), std::invalid_argument);
    s = spec1d(4, 1.0);
    s.d = 3;
    EXPECT_THROW(build_problem(s), std::invalid_argument);
    s = spec1d(4, 1.0);
    s.epsilon = 1.5;
    EXPECT_THROW(build_problem(s), std::invalid_argument);
}
