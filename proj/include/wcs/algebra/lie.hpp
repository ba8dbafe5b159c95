#pragma once

#include "wcs/algebra/lattice.hpp"
#include "wcs/algebra/series.hpp"

#include <map>
#include <utility>

namespace wcs {

struct ConePoint {
    int m = 0, n = 0;
    int degree() const { return m + n; }
    friend bool operator==(const ConePoint& a, const ConePoint& b) { return a.m == b.m && a.n == b.n; }
    friend bool operator<(const ConePoint& a, const ConePoint& b) {
        return a.degree() != b.degree() ? a.degree() < b.degree() : a.m < b.m;
    }
};

// Positive cone spanned by two primitive charges, truncated at total degree N.
class Cone {
public:
    Cone() = default;
    Cone(Lattice lat, Charge gen1, Charge gen2, int N) : lat_(std::move(lat)), g1_(std::move(gen1)), g2_(std::move(gen2)), N_(N) {
        if (N_ < 1) throw AlgebraError("truncation degree must be positive");
        if (g1_.rank() != lat_.rank() || g2_.rank() != lat_.rank()) throw LatticeMismatch();
        if (g1_.isZero() || g2_.isZero()) throw InvalidCharge();
        if (!g1_.isPrimitive() || !g2_.isPrimitive()) throw InvalidCharge("cone generators must be primitive");
        if (!minor(i_, j_)) throw AlgebraError("cone generators are linearly dependent");
        k_ = lat_.pairing(g1_, g2_);
    }

    // Abstract rank-2 cone with <gen1,gen2> = k.
    static Cone standard(Int k, int N) { return Cone(Lattice({{0, k}, {-k, 0}}), Charge{1, 0}, Charge{0, 1}, N); }

    const Lattice& lattice() const { return lat_; }
    const Charge& gen1() const { return g1_; }
    const Charge& gen2() const { return g2_; }
    Int k() const { return k_; }
    int truncation() const { return N_; }
    bool degenerate() const { return k_ == 0; }

    Int pairing(ConePoint a, ConePoint b) const { return k_ * (Int(a.m) * b.n - Int(a.n) * b.m); }
    // Quadratic refinement making e_a -> sigma(a) X^a a Lie map.
    int sigma(ConePoint a) const { return ((k_ * a.m * a.n) % 2 == 0) ? 1 : -1; }

    Charge charge(ConePoint p) const { return Int(p.m) * g1_ + Int(p.n) * g2_; }

    ConePoint point(const Charge& g) const {
        if (g.rank() != lat_.rank()) throw LatticeMismatch();
        if (g.isZero()) throw InvalidCharge();
        Int det = g1_[i_] * g2_[j_] - g1_[j_] * g2_[i_];
        Int mn = g[i_] * g2_[j_] - g[j_] * g2_[i_];
        Int nn = g1_[i_] * g[j_] - g1_[j_] * g[i_];
        if (mn % det != 0 || nn % det != 0) throw OutsideCone("charge " + g.str() + " not in cone lattice");
        ConePoint p{static_cast<int>(mn / det), static_cast<int>(nn / det)};
        if (charge(p) != g) throw OutsideCone("charge " + g.str() + " not in cone span");
        if (p.m < 0 || p.n < 0) throw OutsideCone("charge " + g.str() + " outside positive cone");
        return p;
    }

    friend bool operator==(const Cone& a, const Cone& b) {
        return a.N_ == b.N_ && a.g1_ == b.g1_ && a.g2_ == b.g2_ && a.lat_ == b.lat_;
    }
    friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }

private:
    bool minor(std::size_t& oi, std::size_t& oj) const {
        for (std::size_t i = 0; i < g1_.rank(); ++i)
            for (std::size_t j = i + 1; j < g1_.rank(); ++j)
                if (g1_[i] * g2_[j] - g1_[j] * g2_[i] != 0) {
                    oi = i;
                    oj = j;
                    return true;
                }
        return false;
    }

    Lattice lat_;
    Charge g1_, g2_;
    Int k_ = 0;
    int N_ = 0;
    std::size_t i_ = 0, j_ = 1;
};

// Element of the truncated Lie algebra: sum of c(m,n) e_{m gen1 + n gen2}.
class LieSeries {
public:
    LieSeries() = default;
    explicit LieSeries(const Cone& cone) : cone_(cone), s_(cone.truncation()) {}
    LieSeries(const Cone& cone, Series s) : cone_(cone), s_(std::move(s)) {
        if (s_.truncation() != cone.truncation()) throw ConeMismatch();
        if (sgn(s_.at(0, 0)) != 0) throw AlgebraError("Lie series has no degree-0 part");
    }

    static LieSeries basis(const Cone& cone, ConePoint p, const Q& c = 1) {
        if (p.degree() < 1) throw InvalidCharge();
        LieSeries l(cone);
        if (p.degree() <= cone.truncation()) l.s_.at(p.m, p.n) = c;
        return l;
    }

    const Cone& cone() const { return cone_; }
    const Series& coefficients() const { return s_; }
    const Q& at(ConePoint p) const { return s_.at(p.m, p.n); }
    Q& at(ConePoint p) { return s_.at(p.m, p.n); }
    bool isZero() const { return s_.isZero(); }

    std::map<ConePoint, Q> terms() const {
        std::map<ConePoint, Q> t;
        for (auto i : s_.support()) {
            auto [m, n] = Series::point(i);
            t[{m, n}] = s_.coefficients()[i];
        }
        return t;
    }

    LieSeries& operator+=(const LieSeries& o) {
        if (o.cone_ != cone_) throw ConeMismatch();
        s_ += o.s_;
        return *this;
    }
    LieSeries& operator-=(const LieSeries& o) {
        if (o.cone_ != cone_) throw ConeMismatch();
        s_ -= o.s_;
        return *this;
    }
    LieSeries& operator*=(const Q& k) {
        s_ *= k;
        return *this;
    }
    friend LieSeries operator+(LieSeries a, const LieSeries& b) { return a += b; }
    friend LieSeries operator-(LieSeries a, const LieSeries& b) { return a -= b; }
    friend LieSeries operator*(LieSeries a, const Q& k) { return a *= k; }
    friend LieSeries operator-(LieSeries a) { return a *= Q(-1); }
    friend bool operator==(const LieSeries& a, const LieSeries& b) { return a.cone_ == b.cone_ && a.s_ == b.s_; }
    friend bool operator!=(const LieSeries& a, const LieSeries& b) { return !(a == b); }

private:
    Cone cone_;
    Series s_;
};

// [e_a, e_b] = (-1)^<a,b> <a,b> e_{a+b}, extended bilinearly and truncated.
inline LieSeries bracket(const LieSeries& s, const LieSeries& t) {
    if (s.cone() != t.cone()) throw ConeMismatch();
    const Cone& cone = s.cone();
    int N = cone.truncation();
    LieSeries r(cone);
    auto ss = s.coefficients().support(), ts = t.coefficients().support();
    for (auto i : ss) {
        auto [m1, n1] = Series::point(i);
        for (auto j : ts) {
            auto [m2, n2] = Series::point(j);
            if (m1 + n1 + m2 + n2 > N) break;
            Int p = cone.pairing({m1, n1}, {m2, n2});
            if (p == 0) continue;
            Int c = (p % 2 == 0) ? p : -p;
            r.at({m1 + m2, n1 + n2}) += Q(static_cast<long>(c)) * s.coefficients().coefficients()[i] *
                                        t.coefficients().coefficients()[j];
        }
    }
    return r;
}

} // namespace wcs
