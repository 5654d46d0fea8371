#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wrhss/drivers.hpp"
#include "wrhss/eig.hpp"

using namespace wrhss;

namespace {

ProblemSpec spec(int d, long n, double q, double dt) {
    ProblemSpec s;
    s.d = d;
    s.n = n;
    s.q = q;
    s.dt = dt;
    return s;
}

DenseCMatrix assemble(const ApplyFn& fn, long r) {
    return DenseCMatrix::from_operator(
        r, [&fn](std::span<const Complex> in, std::span<Complex> out) { fn(in, out); });
}

void check_split_identity(const OneStepSplitting& s, const DiscreteProblem& p, double tol) {
    DenseCMatrix mb = assemble(s.mb, p.r), nb = assemble(s.nb, p.r);
    DenseCMatrix ma = assemble(s.ma, p.r), na = assemble(s.na, p.r);
    DenseCMatrix bref(p.r);
    for (long i = 0; i < p.r; ++i) bref.at(i, i) = Complex(p.bscale, 0);
    DenseCMatrix aref = wrhss::test::dense_grid_operator(p.a_op);
    EXPECT_LE((mb - nb - bref).frobenius(), tol) << s.name << ": B split";
    EXPECT_LE((ma - na - aref).frobenius(), tol) << s.name << ": A split";
}

// dense application of one one-step half-sweep on the stacked levels,
// independent of the sweep implementation
Waveform dense_sweep_oracle(const OneStepSplitting& s, const DiscreteProblem& p,
                            const Waveform& x_old, const ForcingSamples& f) {
    const long r = p.r, ell = x_old.ell();
    DenseCMatrix mb = assemble(s.mb, r), nb = assemble(s.nb, r);
    DenseCMatrix ma = assemble(s.ma, r), na = assemble(s.na, r);
    const double invdt = 1.0 / p.dt;
    DenseCMatrix m0 = Complex(invdt, 0) * mb + ma;   // level matrix
    DenseCMatrix n0 = Complex(invdt, 0) * nb + na;
    DenseLU lu(m0);
    Waveform out(ell, r, p.dt);
    out.levels[0] = x_old.levels[0];
    CVector rhs(r), t(r);
    for (long j = 0; j < ell; ++j) {
        n0.matvec(x_old.levels[j + 1], rhs);
        nb.matvec(x_old.levels[j], t);
        for (long i = 0; i < r; ++i) rhs[i] -= invdt * t[i];
        mb.matvec(out.levels[j], t);
        for (long i = 0; i < r; ++i) rhs[i] += invdt * t[i] + f[j + 1][i];
        out.levels[j + 1] = lu.solve(rhs);
    }
    return out;
}

}  // namespace

TEST(Splittings, ConsistencyOnAssembledInstances) {
    for (int d : {1, 2}) {
        // q chosen so Re is dyadic: n=3 gives h=1/4, q=4 gives Re=1/2
        DiscreteProblem p = build_problem(spec(d, 3, 4.0, 0.125));
        const double alpha = 0.5;
        for (auto v : {WrHssVariant::standard, WrHssVariant::reversed, WrHssVariant::bad}) {
            TwoStepSplitting two = make_wr_hss_splitting(p, alpha, v);
            check_split_identity(two.half1, p, 0.0);
            check_split_identity(two.half2, p, 0.0);
        }
        OneStepSplitting sor = make_wr_sor_splitting(p, 0.25);
        check_split_identity(sor, p, 0.0);
        LevelDirectSolver direct(p);
        OneStepSplitting triv = make_trivial_splitting(
            p, [&direct](std::span<const Complex> rhs, std::span<Complex> out) {
                CVector b(rhs.begin(), rhs.end()), x;
                direct.solve(b, x);
                std::copy(x.begin(), x.end(), out.begin());
            });
        check_split_identity(triv, p, 0.0);
    }
}

TEST(Splittings, TrivialSplittingIsExactInOneSweep) {
    DiscreteProblem p = build_problem(spec(1, 5, 6.0, 0.02));
    LevelDirectSolver direct(p);
    OneStepSplitting triv = make_trivial_splitting(
        p, [&direct](std::span<const Complex> rhs, std::span<Complex> out) {
            CVector b(rhs.begin(), rhs.end()), x;
            direct.solve(b, x);
            std::copy(x.begin(), x.end(), out.begin());
        });
    const long ell = 4;
    ForcingSamples f = sample_forcing(p, 0, ell);
    Waveform start = Waveform::constant(p.x0, ell, p.dt);
    // scramble the interior levels; N = 0 must still reproduce the reference
    auto g = test::rng(401);
    for (long j = 1; j <= ell; ++j) start.levels[j] = test::random_cvector(p.r, g);
    Waveform swept = one_step_wr_sweep(triv, p.dt, start, f);
    Waveform ref = reference_solve(p, ell);
    for (long j = 0; j <= ell; ++j) EXPECT_LE(max_abs_diff(swept.levels[j], ref.levels[j]), 1e-12);
}

TEST(Splittings, FixedPointInvariance) {
    for (int d : {1, 2}) {
        DiscreteProblem p = build_problem(spec(d, 6, 8.0, 0.01));
        const long ell = 3;
        Waveform exact = reference_solve(p, ell);
        ForcingSamples f = sample_forcing(p, 0, ell);
        const double alpha = p.alpha_default();

        for (auto v : {WrHssVariant::standard, WrHssVariant::reversed, WrHssVariant::bad}) {
            TwoStepSplitting two = make_wr_hss_splitting(p, alpha, v);
            Waveform swept = two_step_wr_sweep(two, p.dt, exact, f);
            double worst = 0;
            for (long j = 1; j <= ell; ++j)
                worst = std::max(worst, max_abs_diff(swept.levels[j], exact.levels[j]));
            EXPECT_LE(worst, 1e-11) << to_string(v) << " d=" << d;
        }
        OneStepSplitting sor = make_wr_sor_splitting(p, 0.3);
        Waveform swept = one_step_wr_sweep(sor, p.dt, exact, f);
        double worst = 0;
        for (long j = 1; j <= ell; ++j)
            worst = std::max(worst, max_abs_diff(swept.levels[j], exact.levels[j]));
        EXPECT_LE(worst, 1e-11) << "wr-sor d=" << d;
    }
}

TEST(Splittings, TwoStepSweepMatchesDenseBlockOracle) {
    DiscreteProblem p = build_problem(spec(1, 4, 12.0, 0.05));
    const long ell = 3;
    auto g = test::rng(402);
    Waveform x(ell, p.r, p.dt);
    x.levels[0] = p.x0;
    for (long j = 1; j <= ell; ++j) x.levels[j] = test::random_cvector(p.r, g);
    ForcingSamples f = sample_forcing(p, 0, ell);
    const double alpha = 0.7;
    TwoStepSplitting two = make_wr_hss_splitting(p, alpha, WrHssVariant::standard);

    Waveform got = two_step_wr_sweep(two, p.dt, x, f);
    Waveform half = dense_sweep_oracle(two.half1, p, x, f);
    Waveform want = dense_sweep_oracle(two.half2, p, half, f);
    for (long j = 1; j <= ell; ++j)
        EXPECT_LE(max_abs_diff(got.levels[j], want.levels[j]), 1e-10) << "level " << j;
}

TEST(WrSor, LowerTriangularSolveIsExact) {
    for (int d : {1, 2}) {
        DiscreteProblem p = build_problem(spec(d, 5, 7.0, 0.01));
        OneStepSplitting sor = make_wr_sor_splitting(p, 0.4);
        auto g = test::rng(403);
        CVector rhs = test::random_cvector(p.r, g), x(p.r), back(p.r), t(p.r);
        sor.level_solve(rhs, x);
        // residual against (1/dt) M_B + M_A applied by the splitting parts
        sor.ma(x, back);
        sor.mb(x, t);
        for (long i = 0; i < p.r; ++i) back[i] += t[i] / p.dt;
        double num = 0, den = 0;
        for (long i = 0; i < p.r; ++i) {
            num += std::norm(back[i] - rhs[i]);
            den += std::norm(rhs[i]);
        }
        EXPECT_LE(std::sqrt(num / den), 1e-12);
    }
}

TEST(WrSor, ConvergesInsideFeasibleRegion) {
    ProblemSpec s = spec(2, 6, 10.0, 0.01);
    s.epsilon = 1e-6;
    DiscreteProblem p = build_problem(s);
    RunSettings rs;
    rs.levels_per_window = 4;
    rs.windows = 1;
    rs.eps = 1e-6;
    rs.cap = 5000;
    SolveReport rep = wr_sor_solve(p, 0.8, 1e-6, 5000, rs);
    EXPECT_FALSE(rep.capped);
    EXPECT_FALSE(rep.diverged);
    EXPECT_LT(rep.res, 1e-6);
    EXPECT_LT(rep.err, 1e-5);
}

TEST(Dgmres, OneLevelScalarMatchesReference) {
    DiscreteProblem p = build_problem(spec(1, 1, 0.0, 0.25));
    RunSettings rs;
    rs.levels_per_window = 1;
    rs.windows = 1;
    SolveReport rep = dgmres_solve(p, 1e-12, 5, rs);
    EXPECT_LE(rep.err, 1e-10);
}

TEST(Dgmres, WarmStartFromExactSolutionStaysPut) {
    // the per-level GMRES started at the exact solution must not move away
    DiscreteProblem p = build_problem(spec(1, 6, 4.0, 0.02));
    const long ell = 3;
    Waveform exact = reference_solve(p, ell);
    ForcingSamples f = sample_forcing(p, 0, ell);
    ConvolutionKernel k(p);
    const double c = p.bscale / p.dt;
    for (long j = 0; j < ell; ++j) {
        CVector rhs(p.r);
        for (long i = 0; i < p.r; ++i) rhs[i] = c * exact.levels[j][i] + f[j + 1][i];
        GmresOptions opt;
        opt.restart = 5;
        opt.eta = 1e-8;
        auto op = [&](std::span<const Complex> in, std::span<Complex> y) { k.apply_L0(in, y); };
        GmresResult res = gmres_householder(op, rhs, opt, &exact.levels[j + 1]);
        EXPECT_LE(max_abs_diff(res.x, exact.levels[j + 1]), 1e-11);
    }
}

TEST(WrHss, StagnatesAsAlphaGrows) {
    // dense assembly of the sweep map on stacked levels: rho -> 1 for huge alpha
    DiscreteProblem p = build_problem(spec(1, 4, 8.0, 0.1));
    const long ell = 2;
    ForcingSamples zero_f(ell + 1, CVector(p.r, Complex(0, 0)));
    auto sweep_map = [&](double alpha) {
        TwoStepSplitting two = make_wr_hss_splitting(p, alpha, WrHssVariant::standard);
        const long dim = ell * p.r;
        DenseCMatrix k(dim);
        Waveform unit(ell, p.r, p.dt);
        for (long col = 0; col < dim; ++col) {
            for (long j = 1; j <= ell; ++j)
                std::fill(unit.levels[j].begin(), unit.levels[j].end(), Complex(0, 0));
            std::fill(unit.levels[0].begin(), unit.levels[0].end(), Complex(0, 0));
            unit.levels[1 + col / p.r][col % p.r] = Complex(1, 0);
            Waveform out = two_step_wr_sweep(two, p.dt, unit, zero_f);
            for (long j = 1; j <= ell; ++j)
                for (long i = 0; i < p.r; ++i) k.at((j - 1) * p.r + i, col) = out.levels[j][i];
        }
        return spectral_radius(k);
    };
    const double rho_default = sweep_map(p.alpha_default());
    const double rho_huge = sweep_map(1e8);
    EXPECT_LT(rho_default, 0.9);
    EXPECT_GT(rho_huge, 0.999);
    EXPECT_LT(rho_huge, 1.0 + 1e-9);
}

TEST(WrHss, ConvergesOnSmallConvectionDominatedInstance) {
    ProblemSpec s = spec(1, 16, 100.0, 1e-3);
    DiscreteProblem p = build_problem(s);
    RunSettings rs;
    rs.levels_per_window = 5;
    rs.windows = 2;
    SolveReport rep = wr_hss_solve(p, p.alpha_default(), 1e-6, 7000, WrHssVariant::standard, rs);
    EXPECT_FALSE(rep.capped);
    EXPECT_LT(rep.res, 1e-6);
    EXPECT_LT(rep.err, 1e-5);
    EXPECT_EQ(rep.per_window.size(), 2u);
}
