#include "wcs/geometry/walls.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace wcs;

namespace {

bool containsRoot(const std::vector<cplx>& roots, cplx r) {
    for (auto x : roots)
        if (std::abs(x - r) < 1e-12) return true;
    return false;
}

IMatrix inverseOf(const IMatrix& M) { return M.cast<double>().inverse().array().round().cast<long>(); }

// j-invariant from the Eisenstein q-series.
cplx jInvariant(cplx tau) {
    cplx q = std::exp(cplx(0, 2 * M_PI) * tau);
    cplx e4 = 1, e6 = 1, qn = 1;
    for (int n = 1; n < 200; ++n) {
        qn *= q;
        double s3 = 0, s5 = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) {
                s3 += std::pow(d, 3);
                s5 += std::pow(d, 5);
            }
        e4 += 240.0 * s3 * qn;
        e6 -= 504.0 * s5 * qn;
    }
    cplx e43 = e4 * e4 * e4;
    return 1728.0 * e43 / (e43 - e6 * e6);
}

std::vector<cplx> gridPoints(const SWModel& m, double half, int n) {
    std::vector<cplx> pts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx u(-half + 2 * half * (i + 0.5) / n, -half + 2 * half * (j + 0.5) / n);
            u *= m.uScale();
            if (!m.nearDiscriminant(u)) pts.push_back(u);
        }
    return pts;
}

} // namespace

TEST(BranchPoints, QuarticAtOrigin) {
    auto r = branchPoints(SWModel::su2(), 0.0);
    ASSERT_EQ(r.size(), 4u);
    for (cplx e : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) EXPECT_TRUE(containsRoot(r, e));
}

TEST(BranchPoints, RealPointOutsideWall) {
    auto r = branchPoints(SWModel::su2(), 3.0);
    for (cplx e : {cplx(2, 0), cplx(-2, 0), cplx(std::sqrt(2.0), 0), cplx(-std::sqrt(2.0), 0)}) EXPECT_TRUE(containsRoot(r, e));
}

TEST(BranchPoints, DiscriminantRaisesCollidingRoots) {
    try {
        branchPoints(SWModel::su2(), 1.0);
        FAIL() << "expected colliding roots";
    } catch (const CollidingRoots& e) {
        EXPECT_LT(e.minGap, 1e-6);
        EXPECT_EQ(e.exitCode(), 3);
    }
}

TEST(BranchPoints, Su3SliceHasSixRoots) {
    auto m = SWModel::su3Slice();
    cplx u(1.5, -0.5);
    auto r = branchPoints(m, u);
    ASSERT_EQ(r.size(), 6u);
    for (auto x : r) EXPECT_LT(std::abs(m.P(u, x)), 1e-9);
}

TEST(Periods, LemniscaticPointIsSquareLattice) {
    // independent oracle: int_0^1 dx / sqrt(1 - x^4) by tanh-sinh quadrature
    boost::math::quadrature::tanh_sinh<double> ts;
    // xc is the distance to the nearer endpoint, which keeps 1 - x accurate near 1
    double L = ts.integrate(
        [](double x, double xc) {
            double oneMinus = xc > 0 ? xc : 1.0 - x;
            return 1.0 / std::sqrt(oneMinus * (1 + x) * (1 + x * x));
        },
        0.0, 1.0);
    auto f = periods(SWModel::su2(), 0.0);
    cplx tau = f.tau()(0, 0);
    EXPECT_GT(tau.imag(), 0);
    EXPECT_NEAR(std::abs(jInvariant(tau) - 1728.0), 0.0, 1e-6);
    // shortest nonzero period of dx/y is the side of the square lattice
    cplx A = f.A()(0, 0), B = f.B()(0, 0);
    double shortest = 1e300;
    for (int p = -3; p <= 3; ++p)
        for (int q = -3; q <= 3; ++q)
            if (p || q) shortest = std::min(shortest, std::abs(double(p) * A + double(q) * B));
    EXPECT_NEAR(shortest, 2 * std::sqrt(2.0) * L, 1e-10);
    // reduce tau to the fundamental domain: it must land on i
    for (int it = 0; it < 50; ++it) {
        tau -= std::round(tau.real());
        if (std::abs(tau) < 1 - 1e-12) tau = -1.0 / tau;
        else break;
    }
    EXPECT_NEAR(std::abs(tau - cplx(0, 1)), 0.0, 1e-10);
}

TEST(Periods, RiemannRelationsOnGridSu2) {
    auto m = SWModel::su2();
    for (cplx u : gridPoints(m, 3.0, 10)) {
        auto f = periods(m, u);
        EXPECT_LT(f.riemannFirst(), 1e-9) << u;
        EXPECT_GT(f.riemannSecond(), 0) << u;
        EXPECT_GT(f.tau()(0, 0).imag(), 0) << u;
    }
}

TEST(Periods, RiemannRelationsSu3SliceAndSymmetricTau) {
    auto m = SWModel::su3Slice();
    for (cplx u : {cplx(0, 0), cplx(2, 3), cplx(-5, 1), cplx(6, -6), cplx(11, 0.5)}) {
        auto f = periods(m, u);
        EXPECT_LT(f.riemannFirst(), 1e-9) << u;
        EXPECT_GT(f.riemannSecond(), 0) << u;
        Eigen::MatrixXcd t = f.tau();
        EXPECT_LT((t - t.transpose()).norm(), 1e-9) << u;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.kahlerMetric());
        EXPECT_GT(es.eigenvalues().minCoeff(), 0) << u;
    }
}

TEST(Periods, TauMatchesRatioOfPeriodDerivatives) {
    auto m = SWModel::su2();
    for (cplx u : {cplx(0.3, 0.4), cplx(2, -1), cplx(-1.5, 2.5)}) {
        auto f = periods(m, u);
        double h = 1e-5;
        auto fp = periods(f, u + h), fm = periods(f, u - h);
        cplx daD = (fp.aD()(0) - fm.aD()(0)) / (2 * h), da = (fp.a()(0) - fm.a()(0)) / (2 * h);
        EXPECT_NEAR(std::abs(daD / da - f.tau()(0, 0)), 0.0, 1e-6) << u;
    }
}

TEST(Periods, CentralChargeDerivativeMatchesFiniteDifference) {
    for (auto m : {SWModel::su2(), SWModel::su3Slice()}) {
        int r = 2 * m.genus();
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> c(-3, 3);
        for (cplx u : {cplx(0.7, 0.2), cplx(-2, 1.5)}) {
            auto f = periods(m, u);
            for (int t = 0; t < 3; ++t) {
                std::vector<Int> g(r);
                for (auto& x : g) x = c(rng);
                Charge ch(g);
                for (cplx dir : {cplx(1, 0), cplx(0, 1)}) {
                    double h = 1e-5;
                    cplx fd = (periods(f, u + h * dir).centralCharge(ch) - periods(f, u - h * dir).centralCharge(ch)) / (2 * h * dir);
                    EXPECT_NEAR(std::abs(fd - f.centralChargeDerivative(ch)), 0.0, 1e-6);
                }
            }
        }
    }
}

TEST(CentralCharge, Linearity) {
    auto f = periods(SWModel::su3Slice(), cplx(1, 1));
    Charge a{1, -2, 3, 0}, b{0, 1, -1, 2};
    EXPECT_EQ(f.centralCharge(Charge{0, 0, 0, 0}), cplx(0, 0));
    EXPECT_NEAR(std::abs(f.centralCharge(a + b) - f.centralCharge(a) - f.centralCharge(b)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(f.centralCharge(2 * a) - 2.0 * f.centralCharge(a)), 0.0, 1e-12);
    EXPECT_THROW(f.centralCharge(Charge{1, 0}), LatticeMismatch);
}

TEST(CentralCharge, VanishesAtMonopolePoint) {
    auto m = SWModel::su2();
    auto f = periods(m, cplx(1 - 1e-4, 0));
    EXPECT_LT(std::abs(f.centralCharge({0, 1})), 1e-3);
    EXPECT_GT(std::abs(f.centralCharge({1, 0})), 0.1);
}

TEST(Monodromy, ContractibleLoopIsIdentity) {
    auto m = SWModel::su2();
    std::vector<cplx> loop{cplx(0.2, 0.2), cplx(0.5, 0.2), cplx(0.5, 0.6), cplx(0.2, 0.6), cplx(0.2, 0.2)};
    EXPECT_EQ(monodromy(m, loop), IMatrix::Identity(2, 2));
}

TEST(Monodromy, PicardLefschetzSu2) {
    auto m = SWModel::su2();
    const auto& ref = reference(m);
    for (const auto& p : ref.points) {
        auto ccw = loopAround(m, 0.0, p.u, 0.3);
        auto cw = std::vector<cplx>(ccw.rbegin(), ccw.rend());
        IMatrix P = picardLefschetz(m.lattice(), p.vanishing);
        EXPECT_EQ(monodromy(m, cw), P) << p.label;
        EXPECT_EQ(monodromy(m, ccw), inverseOf(P)) << p.label;
    }
    EXPECT_EQ(ref.points[0].vanishing, (Charge{0, 1}));
    EXPECT_EQ(ref.points[1].vanishing, (Charge{-2, 1}));
}

TEST(Monodromy, Su3SliceVanishingCyclesAndSymplecticity) {
    auto m = SWModel::su3Slice();
    const auto& ref = reference(m);
    Eigen::MatrixXd W = detail::pairingMatrix(m.lattice());
    ASSERT_EQ(ref.points.size(), 6u);
    for (const auto& p : ref.points) {
        IMatrix M = monodromy(m, loopAround(m, 0.0, p.u, 0.3, p.side));
        EXPECT_EQ(M, picardLefschetz(m.lattice(), p.vanishing)) << p.label;
        Eigen::MatrixXd Md = M.cast<double>();
        EXPECT_LT((Md.transpose() * W * Md - W).norm(), 1e-12);
        EXPECT_EQ(detail::roundedDet(M), 1);
    }
    // each nu pair pairs to 2
    for (int k = 0; k < 3; ++k) {
        Charge plus, minus;
        for (const auto& p : ref.points) {
            if (p.label == "nu" + std::to_string(k + 1) + "+") plus = p.vanishing;
            if (p.label == "nu" + std::to_string(k + 1) + "-") minus = p.vanishing;
        }
        EXPECT_EQ(m.lattice().pairing(plus, minus), 2);
    }
}

TEST(KahlerMetric, PositiveOnGridAndSingleValued) {
    auto m = SWModel::su2();
    for (cplx u : gridPoints(m, 4.0, 20)) {
        if (std::abs(u) > 4) continue;
        auto g = periods(m, u).kahlerMetric();
        EXPECT_GT(g(0, 0), 0) << u;
    }
    auto f = periods(m, cplx(2, 2));
    auto back = continueAlong(f, {cplx(2.5, 2), cplx(2.5, 2.5), cplx(2, 2.5), cplx(2, 2)});
    EXPECT_NEAR(back.kahlerMetric()(0, 0), f.kahlerMetric()(0, 0), 1e-12);
}

TEST(Residues, LambdaAndHolomorphicFormsAreResidueFree) {
    auto su2 = SWModel::su2();
    for (cplx u : {cplx(3, 0), cplx(0, 0), cplx(0.5, 1), cplx(-2, -2), cplx(10, 5)}) EXPECT_LT(residueCheck(su2, u), 1e-9);
    auto su3 = SWModel::su3Slice();
    for (cplx u : {cplx(0, 0), cplx(1, 2), cplx(-3, 4), cplx(7, -1), cplx(12, 3)}) EXPECT_LT(residueCheck(su3, u), 1e-9);
}

TEST(Walls, Su2WallIsOneClosedCurveThroughDiscriminant) {
    auto m = SWModel::su2();
    auto tr = wallFirstKind(m, {0, 1}, {1, 0}, Window{});
    ASSERT_EQ(tr.lines.size(), 1u);
    const auto& l = tr.lines[0];
    EXPECT_TRUE(l.closed);
    EXPECT_TRUE(containsRoot(l.points, cplx(1, 0)));
    EXPECT_TRUE(containsRoot(l.points, cplx(-1, 0)));
    EXPECT_LT(tr.maxResidual, 1e-8);
}

TEST(Walls, Su3SliceWallAroundSecondPair) {
    auto m = SWModel::su3Slice();
    const auto& ref = reference(m);
    Charge plus, minus;
    std::vector<cplx> pts;
    for (const auto& p : ref.points) {
        if (p.label == "nu2+") plus = p.vanishing, pts.push_back(p.u);
        if (p.label == "nu2-") minus = p.vanishing, pts.push_back(p.u);
    }
    cplx c = 0.5 * (pts[0] + pts[1]);
    Window w{c.real() - 2.5, c.real() + 2.5, c.imag() - 2.5, c.imag() + 2.5, 30, 30};
    auto tr = wallFirstKind(m, plus, minus, w);
    ASSERT_GE(tr.lines.size(), 1u);
    const auto& l = tr.lines[0];
    EXPECT_TRUE(l.closed);
    EXPECT_TRUE(containsRoot(l.points, pts[0]));
    EXPECT_TRUE(containsRoot(l.points, pts[1]));
}

TEST(Walls, ParallelChargesRejected) {
    EXPECT_THROW(wallFirstKind(SWModel::su2(), {0, 1}, {0, 1}, Window{}), InvalidCharge);
    EXPECT_THROW(wallFirstKind(SWModel::su2(), {1, 1}, {2, 2}, Window{}), InvalidCharge);
}
