#include "wcs/algebra/kswcf.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wcs;

namespace {

LieSeries randomLie(const Cone& cone, std::mt19937& rng, int terms) {
    std::uniform_int_distribution<int> deg(1, cone.truncation());
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    LieSeries s(cone);
    for (int t = 0; t < terms; ++t) {
        int d = deg(rng);
        int m = std::uniform_int_distribution<int>(0, d)(rng);
        s.at({m, d - m}) += frac(num(rng), den(rng));
    }
    return s;
}

Series randomSeries(int N, std::mt19937& rng, int terms) {
    std::uniform_int_distribution<int> deg(0, N), num(-4, 4);
    Series s(N);
    for (int t = 0; t < terms; ++t) {
        int d = deg(rng);
        int m = std::uniform_int_distribution<int>(0, d)(rng);
        s.at(m, d - m) += Q(num(rng));
    }
    return s;
}

// exp(D_H) applied to the absolute monomials X, Y by summing D^n/n!, computed
// one degree higher so the shifted images survive truncation.
TorusAutomorphism expOracle(const LieSeries& H) {
    const Cone& c = H.cone();
    int N = c.truncation();
    Cone big(c.lattice(), c.gen1(), c.gen2(), N + 1);
    LieSeries Hb(big);
    for (const auto& [p, v] : H.terms()) Hb.at(p) = v;
    std::array<Series, 2> img;
    for (int i = 0; i < 2; ++i) {
        Series mono = Series::monomial(i == 0 ? 1 : 0, i == 0 ? 0 : 1, 1, N + 1);
        Series acc = mono, term = mono;
        for (int n = 1; n <= N + 1; ++n) {
            term = derivation(Hb, term) * Q(1, n);
            acc += term;
        }
        Series f(N);
        for (int d = 0; d <= N; ++d)
            for (int m = 0; m <= d; ++m) f.at(m, d - m) = acc.at(m + (i == 0), d - m + (i == 1));
        img[i] = f;
    }
    return TorusAutomorphism(c, img[0], img[1]);
}

Spectrum spectrumOf(const Cone& cone, std::initializer_list<std::pair<ConePoint, int>> l) {
    Spectrum s(cone);
    for (auto [p, w] : l) s.set(p, w);
    return s;
}

bool sameOmega(const Spectrum& a, const Spectrum& b) { return a.omega() == b.omega(); }

} // namespace

TEST(Lattice, PairingExamples) {
    Lattice L = Lattice::su2();
    EXPECT_EQ(L.pairing(Charge{0, 1}, Charge{2, -1}), -2);
    EXPECT_EQ(L.pairing(Charge{1, 0}, Charge{0, 1}), 1);
    EXPECT_EQ(L.pairing(Charge{3, 7}, Charge{3, 7}), 0);
    EXPECT_THROW(L.pairing(Charge{1, 0}, Charge{1, 0, 0}), LatticeMismatch);
    EXPECT_THROW(Lattice({{0, 1}, {1, 0}}), AlgebraError);
}

TEST(Lattice, PairingAntisymmetryRandom) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<Int> d(-9, 9);
    Lattice L = Lattice::su3();
    for (int t = 0; t < 200; ++t) {
        Charge a{d(rng), d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng), d(rng)};
        EXPECT_EQ(L.pairing(a, b), -L.pairing(b, a));
    }
}

TEST(Lattice, Primitivity) {
    EXPECT_TRUE((Charge{2, -1}).isPrimitive());
    EXPECT_FALSE((Charge{2, 0}).isPrimitive());
    EXPECT_EQ((Charge{4, -2}).primitive(), (Charge{2, -1}));
}

TEST(Cone, RejectsBadGenerators) {
    EXPECT_THROW(Cone(Lattice::su2(), Charge{2, 0}, Charge{0, 1}, 5), InvalidCharge);
    EXPECT_THROW(Cone(Lattice::su2(), Charge{1, 1}, Charge{-1, -1}, 5), AlgebraError);
    Cone c(Lattice::su2(), Charge{2, -1}, Charge{0, 1}, 6);
    EXPECT_EQ(c.k(), 2);
    EXPECT_EQ(c.point(Charge{2, 0}), (ConePoint{1, 1}));
    EXPECT_THROW(c.point(Charge{1, 0}), OutsideCone);
    EXPECT_THROW(c.point(Charge{-2, 1}), OutsideCone);
}

TEST(Bracket, Examples) {
    Cone c2 = Cone::standard(2, 6), c1 = Cone::standard(1, 6);
    auto b2 = bracket(LieSeries::basis(c2, {1, 0}), LieSeries::basis(c2, {0, 1}));
    EXPECT_EQ(b2.terms(), (std::map<ConePoint, Q>{{{1, 1}, 2}}));
    auto b1 = bracket(LieSeries::basis(c1, {1, 0}), LieSeries::basis(c1, {0, 1}));
    EXPECT_EQ(b1.terms(), (std::map<ConePoint, Q>{{{1, 1}, -1}}));
    EXPECT_TRUE(bracket(LieSeries::basis(c1, {2, 1}), LieSeries::basis(c1, {2, 1})).isZero());
    EXPECT_THROW(bracket(LieSeries(c1), LieSeries(c2)), ConeMismatch);
}

TEST(Bracket, JacobiRandom) {
    std::mt19937 rng(5);
    for (int k : {1, 2, 3}) {
        Cone c = Cone::standard(k, 8);
        for (int t = 0; t < 20; ++t) {
            auto a = randomLie(c, rng, 4), b = randomLie(c, rng, 4), d = randomLie(c, rng, 4);
            auto j = bracket(a, bracket(b, d)) + bracket(b, bracket(d, a)) + bracket(d, bracket(a, b));
            EXPECT_TRUE(j.isZero());
        }
    }
}

TEST(Representation, CommutatorMatchesBracket) {
    std::mt19937 rng(17);
    for (int k : {1, 2, 3, -1, -2}) {
        int N = 8;
        Cone c = Cone::standard(k, N);
        for (int t = 0; t < 30; ++t) {
            std::uniform_int_distribution<int> deg(1, N - 1);
            int d1 = deg(rng), d2 = deg(rng);
            ConePoint g{std::uniform_int_distribution<int>(0, d1)(rng), 0};
            g.n = d1 - g.m;
            ConePoint mu{std::uniform_int_distribution<int>(0, d2)(rng), 0};
            mu.n = d2 - mu.m;
            auto eg = LieSeries::basis(c, g), em = LieSeries::basis(c, mu);
            Series f = randomSeries(N, rng, 6);
            Series lhs = derivation(eg, derivation(em, f)) - derivation(em, derivation(eg, f));
            Series rhs = derivation(bracket(eg, em), f);
            EXPECT_EQ(lhs, rhs) << "k=" << k << " g=(" << g.m << "," << g.n << ") mu=(" << mu.m << "," << mu.n << ")";
        }
    }
}

TEST(KSTransform, Basics) {
    Cone c = Cone::standard(1, 10);
    auto K = ksTransform(c, ConePoint{1, 2}, 1), Ki = ksTransform(c, ConePoint{1, 2}, -1);
    EXPECT_TRUE(multiply(K, Ki).isIdentity());
    EXPECT_TRUE(multiply(Ki, K).isIdentity());
    EXPECT_TRUE(ksTransform(c, ConePoint{1, 2}, 0).isIdentity());
    EXPECT_THROW(ksTransform(c, ConePoint{0, 0}, 1), InvalidCharge);
    EXPECT_THROW(ksTransform(c, Charge{-1, 1}, 1), OutsideCone);
}

TEST(KSTransform, LogIsInverseSquareSeries) {
    for (int k : {1, 2, -3}) {
        Cone c = Cone::standard(k, 12);
        for (ConePoint g : {ConePoint{1, 0}, ConePoint{0, 1}, ConePoint{1, 1}, ConePoint{2, 1}}) {
            auto L = logSeries(ksTransform(c, g, 1));
            std::map<ConePoint, Q> want;
            for (int n = 1; n * g.degree() <= 12; ++n) want[{n * g.m, n * g.n}] = Q(1, n * n);
            EXPECT_EQ(L.terms(), want);
        }
    }
}

TEST(Group, IdentityAndAssociativity) {
    std::mt19937 rng(3);
    for (int k : {1, 2}) {
        Cone c = Cone::standard(k, 7);
        for (int t = 0; t < 8; ++t) {
            auto a = expSeries(randomLie(c, rng, 3)), b = expSeries(randomLie(c, rng, 3)),
                 d = expSeries(randomLie(c, rng, 3));
            EXPECT_EQ(multiply(a, TorusAutomorphism::identity(c)), a);
            EXPECT_EQ(multiply(TorusAutomorphism::identity(c), a), a);
            EXPECT_EQ(multiply(multiply(a, b), d), multiply(a, multiply(b, d)));
        }
    }
    Cone c = Cone::standard(1, 12);
    auto K1 = ksTransform(c, ConePoint{1, 0}, 1), K2 = ksTransform(c, ConePoint{0, 1}, 1),
         K12 = ksTransform(c, ConePoint{1, 1}, 1);
    EXPECT_EQ(multiply(multiply(K1, K2), K12), multiply(K1, multiply(K2, K12)));
    EXPECT_NE(multiply(K1, K2), multiply(K2, K1));
}

TEST(Group, LeftMultiplyMatchesProduct) {
    std::mt19937 rng(23);
    Cone c = Cone::standard(2, 8);
    for (int t = 0; t < 10; ++t) {
        auto h = expSeries(randomLie(c, rng, 3));
        ConePoint g{t % 3, 1 + t % 2};
        Q w = frac(t - 4, 3);
        EXPECT_EQ(leftMultiplyKS(g, w, h), multiply(ksTransform(c, g, w), h));
    }
}

TEST(Group, ExpMatchesDirectSeriesOracle) {
    std::mt19937 rng(29);
    for (int k : {1, 2, -1}) {
        Cone c = Cone::standard(k, 8);
        for (int t = 0; t < 10; ++t) {
            auto H = randomLie(c, rng, 3);
            EXPECT_EQ(expSeries(H), expOracle(H));
        }
    }
}

TEST(Group, ExpLogRoundTrip) {
    std::mt19937 rng(31);
    for (int k : {1, 2, 3}) {
        Cone c = Cone::standard(k, 8);
        for (int t = 0; t < 10; ++t) {
            auto H = randomLie(c, rng, 3);
            auto g = expOracle(H);
            EXPECT_EQ(logSeries(g), H);
            EXPECT_EQ(expSeries(logSeries(g)), g);
            EXPECT_TRUE(multiply(g, inverse(g)).isIdentity());
        }
    }
    EXPECT_TRUE(logSeries(TorusAutomorphism::identity(Cone::standard(1, 5))).isZero());
}

TEST(Group, MalformedInputs) {
    Cone c = Cone::standard(1, 4);
    Series bad = Series::one(4) * Q(2);
    EXPECT_THROW(TorusAutomorphism(c, bad, Series::one(4)), MalformedElement);
    // X -> X(1+X), Y -> Y does not preserve the log-canonical bracket
    Series f = Series::one(4) + Series::monomial(1, 0, 1, 4);
    EXPECT_THROW(logSeries(TorusAutomorphism(c, f, Series::one(4))), MalformedElement);
    EXPECT_THROW(factorize(TorusAutomorphism(c, f, Series::one(4)), Ordering::Increasing), MalformedElement);
}

TEST(Engine, EmptyWordAndIdentity) {
    Cone c = Cone::standard(1, 6);
    EXPECT_TRUE(evaluate(FactorWord(), c).isIdentity());
    auto f = factorize(TorusAutomorphism::identity(c), Ordering::Increasing);
    EXPECT_TRUE(f.word.empty());
    EXPECT_TRUE(f.spectrum.empty());
}

TEST(Engine, DegenerateConeRefuses) {
    Cone c = Cone::standard(0, 6);
    EXPECT_THROW(factorize(TorusAutomorphism::identity(c), Ordering::Increasing), DegeneratePairing);
    EXPECT_THROW(scatter({{Charge{1, 0, 0, 0}, 1}, {Charge{0, 1, 0, 0}, 1}}, Ordering::Increasing, 6, Lattice::su3()),
                 DegeneratePairing);
}

TEST(Engine, Pentagon) {
    Cone c = Cone::standard(1, 12);
    auto chk = verifyIdentity(identities::pentagonLhs(), identities::pentagonRhs(), c);
    EXPECT_TRUE(chk.equal);
    auto f = factorize(evaluate(identities::pentagonLhs(), c), Ordering::Increasing);
    EXPECT_TRUE(sameOmega(f.spectrum, spectrumOf(c, {{{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}})));
    EXPECT_EQ(f.word.size(), 3u);
    EXPECT_EQ(f.word.factors[0].charge, (Charge{0, 1}));
    EXPECT_EQ(f.word.factors[1].charge, (Charge{1, 1}));
    EXPECT_EQ(f.word.factors[2].charge, (Charge{1, 0}));
}

TEST(Engine, PentagonDefectLocated) {
    Cone c = Cone::standard(1, 12);
    auto rhs = identities::pentagonRhs();
    rhs.factors[1].exponent = 2;
    auto chk = verifyIdentity(identities::pentagonLhs(), rhs, c);
    EXPECT_FALSE(chk.equal);
    ASSERT_TRUE(chk.firstDiscrepancy.has_value());
    EXPECT_EQ(*chk.firstDiscrepancy, (ConePoint{1, 1}));
}

TEST(Engine, KroneckerMirrored) {
    // The Kronecker spectrum arises from the two-factor side whose slopes
    // decrease when the pairing is positive.
    int N = 12;
    Cone c = Cone::standard(2, N);
    auto two = FactorWord({{Charge{1, 0}, 1}, {Charge{0, 1}, 1}}, Ordering::Decreasing);
    auto f = factorize(evaluate(two, c), Ordering::Increasing);
    Spectrum want(c);
    for (int n = 1; 2 * n - 1 <= N; ++n) {
        want.set({n, n - 1}, 1);
        want.set({n - 1, n}, 1);
    }
    want.set({1, 1}, -2);
    EXPECT_TRUE(sameOmega(f.spectrum, want));
    EXPECT_TRUE(f.spectrum.allInteger());
    // equivalently, pairing -2 with the literal word order
    Cone cm = Cone::standard(-2, N);
    auto g = factorize(evaluate(identities::kroneckerLhs(), cm), Ordering::Decreasing);
    EXPECT_EQ(g.spectrum.omega(), want.omega());
}

TEST(Engine, SplitPointIdentity) {
    Cone c = Cone::standard(1, 10);
    EXPECT_TRUE(verifyIdentity(identities::splitPointLhs(), identities::splitPointRhs(10), c).equal);
}

TEST(Engine, ScatterExamples) {
    Lattice L = Lattice::su2();
    int N = 8;
    auto s = scatter({{Charge{2, -1}, 1}, {Charge{0, 1}, 1}}, Ordering::Increasing, N, L);
    EXPECT_EQ(s.at(Charge{2, 0}), -2);
    for (int n = 0; 2 * n + 1 <= N; ++n) EXPECT_EQ(s.at(Charge{2 * n, 1}), 1) << n;
    for (int n = 1; 2 * n - 1 <= N; ++n) EXPECT_EQ(s.at(Charge{2 * n, -1}), 1) << n;
    EXPECT_EQ(s.at(Charge{4, 0}), 0);
    EXPECT_TRUE(s.allInteger());
    // both tags describe the same physical scattering
    auto s2 = scatter({{Charge{2, -1}, 1}, {Charge{0, 1}, 1}}, Ordering::Decreasing, N, L);
    for (const auto& [p, w] : s.omega()) EXPECT_EQ(s2.at(s.cone().charge(p)), w);

    auto single = scatter({{Charge{3, 1}, 1}}, Ordering::Increasing, N, L);
    EXPECT_EQ(single.omega().size(), 1u);
    EXPECT_EQ(single.at(Charge{3, 1}), 1);

    auto pent = scatter({{Charge{1, 0}, 1}, {Charge{0, 1}, 1}}, Ordering::Increasing, N, L);
    EXPECT_EQ(pent.omega().size(), 3u);
    EXPECT_EQ(pent.at(Charge{1, 1}), 1);
}

TEST(Engine, PrimitiveJump) {
    Lattice L = Cone::standard(2, 1).lattice();
    EXPECT_EQ(primitiveJump(Lattice::su2(), Charge{1, 0}, 1, Charge{0, 1}, 1), 1);
    EXPECT_EQ(primitiveJump(Lattice::su2(), Charge{1, 0}, 1, Charge{2, 0}, 1), 0);
    EXPECT_EQ(primitiveJump(L, Charge{1, 0}, 1, Charge{0, 1}, 1), -2);
    auto s = scatter({{Charge{1, 0}, 1}, {Charge{0, 1}, 1}}, Ordering::Increasing, 6, L);
    EXPECT_EQ(s.at(Charge{1, 1}), primitiveJump(L, Charge{1, 0}, 1, Charge{0, 1}, 1));
}

TEST(Engine, RayInversion) {
    std::map<int, Q> om{{1, 1}, {2, -2}, {3, Q(1, 2)}};
    auto a = rayLogCoefficients(om, 6);
    EXPECT_EQ(a.at(1), 1);
    EXPECT_EQ(a.at(2), Q(-2) + Q(1, 4));
    EXPECT_EQ(rayInversion(a, 6), om);
}

TEST(Engine, FactorizeRoundTripRandomWords) {
    std::mt19937 rng(41);
    for (int k : {1, 2, -1, 3}) {
        int N = 8;
        Cone c = Cone::standard(k, N);
        for (int t = 0; t < 6; ++t) {
            FactorWord w;
            int len = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int i = 0; i < len; ++i) {
                int d = std::uniform_int_distribution<int>(1, 4)(rng);
                int m = std::uniform_int_distribution<int>(0, d)(rng);
                int e = std::uniform_int_distribution<int>(-2, 2)(rng);
                w.factors.push_back({Charge{m, d - m}, e});
            }
            auto g = evaluate(w, c);
            for (auto tag : {Ordering::Increasing, Ordering::Decreasing}) {
                auto f = factorize(g, tag);
                EXPECT_TRUE(isOrdered(c, f.word));
                EXPECT_EQ(evaluate(f.word, c), g);
                EXPECT_TRUE(f.spectrum.allInteger());
                EXPECT_EQ(factorize(evaluate(f.word, c), tag).word.size(), f.word.size());
            }
        }
    }
}

TEST(Engine, LoopTriviality) {
    std::mt19937 rng(43);
    for (int k : {1, 2}) {
        int N = 8;
        Cone c = Cone::standard(k, N);
        for (int t = 0; t < 5; ++t) {
            FactorWord w({}, Ordering::Increasing);
            for (ConePoint r : primitiveRays(3, Ordering::Increasing))
                if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) w.factors.push_back({c.charge(r), 1});
            auto g = evaluate(w, c);
            auto other = factorize(g, Ordering::Decreasing);
            EXPECT_TRUE(multiply(g, inverse(evaluate(other.word, c))).isIdentity());
            EXPECT_TRUE(other.spectrum.allInteger());
        }
    }
}
