#pragma once

#include "wcs/algebra/lie.hpp"

#include <array>

namespace wcs {

// Group element stored as an automorphism of the truncated torus algebra:
// X -> X * F1, Y -> Y * F2, with X = x^gen1 and Y = x^gen2.
class TorusAutomorphism {
public:
    TorusAutomorphism() = default;
    TorusAutomorphism(const Cone& cone, Series f1, Series f2) : cone_(cone), f_{std::move(f1), std::move(f2)} {
        for (const auto& f : f_) {
            if (f.truncation() != cone.truncation()) throw ConeMismatch();
            if (f.at(0, 0) != 1) throw MalformedElement("image series must have constant term 1");
        }
    }

    static TorusAutomorphism identity(const Cone& cone) {
        int N = cone.truncation();
        return TorusAutomorphism(cone, Series::one(N), Series::one(N));
    }

    const Cone& cone() const { return cone_; }
    const Series& image(int i) const { return f_[i]; }
    bool isIdentity() const { return *this == identity(cone_); }

    friend bool operator==(const TorusAutomorphism& a, const TorusAutomorphism& b) {
        return a.cone_ == b.cone_ && a.f_[0] == b.f_[0] && a.f_[1] == b.f_[1];
    }
    friend bool operator!=(const TorusAutomorphism& a, const TorusAutomorphism& b) { return !(a == b); }

private:
    Cone cone_;
    std::array<Series, 2> f_;
};

namespace detail {

inline ConePoint unit(int i) { return i == 0 ? ConePoint{1, 0} : ConePoint{0, 1}; }

// Sum of c(m,n) X^m Y^n A^m B^n for two coefficient series sharing A, B.
inline std::array<Series, 2> substitute(const std::array<const Series*, 2>& G, const Series& A, const Series& B) {
    int N = A.truncation();
    std::vector<Series> powA{Series::one(N)}, powB{Series::one(N)};
    for (int j = 1; j <= N; ++j) {
        powA.push_back(multiply(powA.back(), A, N - j));
        powB.push_back(multiply(powB.back(), B, N - j));
    }
    std::array<Series, 2> out{Series(N), Series(N)};
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < Series::size(N); ++i)
        if (sgn(G[0]->coefficients()[i]) != 0 || sgn(G[1]->coefficients()[i]) != 0) idx.push_back(i);
    for (auto i : idx) {
        auto [m, n] = Series::point(i);
        Series p = (m == 0) ? powB[n].truncated(N - m - n)
                   : (n == 0) ? powA[m].truncated(N - m - n)
                              : multiply(powA[m], powB[n], N - m - n);
        p = p.shifted(m, n);
        for (int k = 0; k < 2; ++k) {
            const Q& c = G[k]->coefficients()[i];
            if (sgn(c) != 0) out[k] += p * c;
        }
    }
    return out;
}

// X^{-e_i} D_H (X^{e_i} F) with D_H = {sum h_a sigma(a) X^a, .}.
inline Series shiftedDerivation(const LieSeries& H, const Series& F, int i) {
    const Cone& cone = H.cone();
    int N = cone.truncation();
    Series r(N);
    ConePoint e = unit(i);
    Q t;
    for (auto a : H.coefficients().support()) {
        auto [am, an] = Series::point(a);
        Q ha = H.coefficients().coefficients()[a] * cone.sigma({am, an});
        for (auto c : F.support()) {
            auto [cm, cn] = Series::point(c);
            if (am + an + cm + cn > N) break;
            Int p = cone.pairing({am, an}, {cm + e.m, cn + e.n});
            if (p == 0) continue;
            t = ha * F.coefficients()[c];
            t *= static_cast<long>(p);
            r.at(am + cm, an + cn) += t;
        }
    }
    return r;
}

} // namespace detail

// Derivation action of a Lie series on a series of absolute monomials.
inline Series derivation(const LieSeries& H, const Series& f) {
    const Cone& cone = H.cone();
    int N = cone.truncation();
    if (f.truncation() != N) throw ConeMismatch();
    Series r(N);
    for (auto a : H.coefficients().support()) {
        auto [am, an] = Series::point(a);
        Q ha = H.coefficients().coefficients()[a] * cone.sigma({am, an});
        for (auto c : f.support()) {
            auto [cm, cn] = Series::point(c);
            if (am + an + cm + cn > N) break;
            Int p = cone.pairing({am, an}, {cm, cn});
            if (p != 0) r.at(am + cm, an + cn) += ha * f.coefficients()[c] * Q(static_cast<long>(p));
        }
    }
    return r;
}

// exp of the derivation attached to H, as an automorphism.
inline TorusAutomorphism expSeries(const LieSeries& H) {
    const Cone& cone = H.cone();
    int N = cone.truncation();
    std::array<Series, 2> f;
    for (int i = 0; i < 2; ++i) {
        Series acc = Series::one(N), term = Series::one(N);
        for (int n = 1; n <= N; ++n) {
            term = detail::shiftedDerivation(H, term, i) * Q(1, n);
            if (term.isZero()) break;
            acc += term;
        }
        f[i] = std::move(acc);
    }
    return TorusAutomorphism(cone, std::move(f[0]), std::move(f[1]));
}

// K_gamma^omega: X^mu -> X^mu (1 - sigma(gamma) X^gamma)^(-omega <gamma,mu>).
inline TorusAutomorphism ksTransform(const Cone& cone, ConePoint g, const Q& omega) {
    if (g.degree() < 1) throw InvalidCharge();
    if (g.m < 0 || g.n < 0) throw OutsideCone();
    int N = cone.truncation();
    if (g.degree() > N || sgn(omega) == 0) return TorusAutomorphism::identity(cone);
    Series s = Series::monomial(g.m, g.n, Q(-cone.sigma(g)), N);
    std::array<Series, 2> f;
    for (int i = 0; i < 2; ++i) {
        Int p = cone.pairing(g, detail::unit(i));
        f[i] = binomialPower(s, -omega * Q(static_cast<long>(p)));
    }
    return TorusAutomorphism(cone, std::move(f[0]), std::move(f[1]));
}

inline TorusAutomorphism ksTransform(const Cone& cone, const Charge& g, const Q& omega) {
    return ksTransform(cone, cone.point(g), omega);
}

// Group product g*h. It acts on the torus algebra as phi_h o phi_g, i.e. the
// images of h are composed after those of g.
inline TorusAutomorphism multiply(const TorusAutomorphism& g, const TorusAutomorphism& h) {
    if (g.cone() != h.cone()) throw ConeMismatch();
    auto sub = detail::substitute({&g.image(0), &g.image(1)}, h.image(0), h.image(1));
    return TorusAutomorphism(g.cone(), multiply(h.image(0), sub[0]), multiply(h.image(1), sub[1]));
}

// K_gamma^omega * h, without a general substitution.
inline TorusAutomorphism leftMultiplyKS(ConePoint g, const Q& omega, const TorusAutomorphism& h) {
    const Cone& cone = h.cone();
    int N = cone.truncation();
    if (g.degree() < 1) throw InvalidCharge();
    if (g.degree() > N || sgn(omega) == 0) return h;
    Series q = Series::one(N);
    for (int j = 0; j < g.m; ++j) q = multiply(q, h.image(0), N - g.degree());
    for (int j = 0; j < g.n; ++j) q = multiply(q, h.image(1), N - g.degree());
    q = q.shifted(g.m, g.n) * Q(-cone.sigma(g));
    std::array<Series, 2> f;
    for (int i = 0; i < 2; ++i) {
        Int p = cone.pairing(g, detail::unit(i));
        f[i] = multiply(h.image(i), binomialPower(q, -omega * Q(static_cast<long>(p))));
    }
    return TorusAutomorphism(cone, std::move(f[0]), std::move(f[1]));
}

// Unique Lie series H with expSeries(H) == g up to truncation.
inline LieSeries logSeries(const TorusAutomorphism& g) {
    const Cone& cone = g.cone();
    int N = cone.truncation();
    LieSeries H(cone);
    if (g.isIdentity()) return H;
    if (cone.degenerate()) throw DegeneratePairing();
    for (int d = 1; d <= N; ++d) {
        TorusAutomorphism r = multiply(expSeries(-H), g);
        for (int m = 0; m <= d; ++m) {
            ConePoint c{m, d - m};
            Int p0 = cone.pairing(c, {1, 0}), p1 = cone.pairing(c, {0, 1});
            const Q& a0 = r.image(0).at(c.m, c.n);
            const Q& a1 = r.image(1).at(c.m, c.n);
            Q h = (p0 != 0) ? a0 / Q(static_cast<long>(p0)) : a1 / Q(static_cast<long>(p1));
            Q other = (p0 != 0) ? a1 : a0;
            Int po = (p0 != 0) ? p1 : p0;
            if (other != h * Q(static_cast<long>(po))) throw MalformedElement("not an element of the truncated group");
            h *= cone.sigma(c);
            if (sgn(h) != 0) H.at(c) = h;
        }
    }
    return H;
}

inline TorusAutomorphism inverse(const TorusAutomorphism& g) { return expSeries(-logSeries(g)); }

} // namespace wcs
