#pragma once

#include "wcs/algebra/automorphism.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace wcs {

enum class Ordering { Increasing, Decreasing, Unordered };

struct Factor {
    Charge charge;
    Q exponent;
};

struct FactorWord {
    std::vector<Factor> factors;
    Ordering tag = Ordering::Unordered;

    FactorWord() = default;
    FactorWord(std::vector<Factor> f, Ordering t = Ordering::Unordered) : factors(std::move(f)), tag(t) {}
    bool empty() const { return factors.empty(); }
    std::size_t size() const { return factors.size(); }
};

// slope(m,n) = m/n, with n = 0 read as +infinity.
inline bool slopeLess(ConePoint a, ConePoint b) { return Int(a.m) * b.n < Int(b.m) * a.n; }
inline bool sameRay(ConePoint a, ConePoint b) { return Int(a.m) * b.n == Int(b.m) * a.n; }

// Primitive rays of the truncated cone sorted by slope.
inline std::vector<ConePoint> primitiveRays(int N, Ordering tag) {
    std::vector<ConePoint> rays;
    for (int d = 1; d <= N; ++d)
        for (int m = 0; m <= d; ++m)
            if (std::gcd(m, d - m) == 1) rays.push_back({m, d - m});
    std::sort(rays.begin(), rays.end(), [&](ConePoint a, ConePoint b) {
        return tag == Ordering::Decreasing ? slopeLess(b, a) : slopeLess(a, b);
    });
    return rays;
}

// Distinct rays appear in strictly monotone slope order; multiples of one ray may repeat.
inline bool isOrdered(const Cone& cone, const FactorWord& w) {
    if (w.tag == Ordering::Unordered) return true;
    for (std::size_t i = 1; i < w.factors.size(); ++i) {
        ConePoint a = cone.point(w.factors[i - 1].charge), b = cone.point(w.factors[i].charge);
        if (sameRay(a, b)) continue;
        bool ok = w.tag == Ordering::Increasing ? slopeLess(a, b) : slopeLess(b, a);
        if (!ok) return false;
    }
    return true;
}

class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(const Cone& cone) : cone_(cone) {}

    const Cone& cone() const { return cone_; }
    const std::map<ConePoint, Q>& omega() const { return omega_; }
    Q at(ConePoint p) const {
        auto it = omega_.find(p);
        return it == omega_.end() ? Q(0) : it->second;
    }
    Q at(const Charge& g) const {
        try {
            return at(cone_.point(g));
        } catch (const OutsideCone&) {
            return 0;
        }
    }
    void set(ConePoint p, const Q& w) {
        if (sgn(w) == 0)
            omega_.erase(p);
        else
            omega_[p] = w;
    }
    bool empty() const { return omega_.empty(); }
    bool allInteger() const {
        for (const auto& [p, w] : omega_)
            if (!isInteger(w)) return false;
        return true;
    }

private:
    Cone cone_;
    std::map<ConePoint, Q> omega_;
};

// a(j) = sum_{d | j} omega(d) / (j/d)^2 along one ray.
inline std::map<int, Q> rayLogCoefficients(const std::map<int, Q>& omega, int top) {
    std::map<int, Q> a;
    for (int j = 1; j <= top; ++j) {
        Q s = 0;
        for (const auto& [d, w] : omega)
            if (j % d == 0) s += w / Q((j / d) * (j / d));
        if (sgn(s) != 0) a[j] = s;
    }
    return a;
}

// Inverse of rayLogCoefficients, solved multiple by multiple.
inline std::map<int, Q> rayInversion(const std::map<int, Q>& a, int top) {
    std::map<int, Q> omega;
    for (int j = 1; j <= top; ++j) {
        auto it = a.find(j);
        Q s = it == a.end() ? Q(0) : it->second;
        for (const auto& [d, w] : omega)
            if (j % d == 0 && d < j) s -= w / Q((j / d) * (j / d));
        if (sgn(s) != 0) omega[j] = s;
    }
    return omega;
}

// Left-to-right product of K_gamma^omega factors.
inline TorusAutomorphism evaluate(const FactorWord& w, const Cone& cone) {
    TorusAutomorphism cur = TorusAutomorphism::identity(cone);
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
        ConePoint p = cone.point(it->charge);
        cur = leftMultiplyKS(p, it->exponent, cur);
    }
    return cur;
}

struct Factorization {
    FactorWord word;
    Spectrum spectrum;
};

// Unique slope-ordered word evaluating to g, with the DT invariants per charge.
inline Factorization factorize(const TorusAutomorphism& g, Ordering tag) {
    const Cone& cone = g.cone();
    if (cone.degenerate()) throw DegeneratePairing();
    if (tag == Ordering::Unordered) throw AlgebraError("factorization needs a slope ordering");
    int N = cone.truncation();
    Factorization out{FactorWord({}, tag), Spectrum(cone)};
    TorusAutomorphism cur = g;
    for (ConePoint r : primitiveRays(N, tag)) {
        std::map<int, Q> peeled;
        for (int j = 1; j * r.degree() <= N; ++j) {
            ConePoint c{j * r.m, j * r.n};
            Int p0 = cone.pairing(c, {1, 0}), p1 = cone.pairing(c, {0, 1});
            const Q& a0 = cur.image(0).at(c.m, c.n);
            const Q& a1 = cur.image(1).at(c.m, c.n);
            Q w = (p0 != 0) ? a0 / Q(static_cast<long>(p0)) : a1 / Q(static_cast<long>(p1));
            if ((p0 != 0 ? a1 : a0) != w * Q(static_cast<long>(p0 != 0 ? p1 : p0)))
                throw MalformedElement("input is not an element of the truncated group");
            w *= cone.sigma(c);
            if (sgn(w) == 0) continue;
            peeled[j] = w;
            cur = leftMultiplyKS(c, -w, cur);
        }
        if (peeled.empty()) continue;
        auto a = rayLogCoefficients(peeled, N / r.degree());
        auto omega = rayInversion(a, N / r.degree());
        if (omega != peeled) throw AlgebraError("ray inversion disagrees with peeled exponents");
        for (const auto& [j, w] : omega) {
            ConePoint c{j * r.m, j * r.n};
            out.word.factors.push_back({cone.charge(c), w});
            out.spectrum.set(c, w);
        }
    }
    if (!cur.isIdentity()) throw MalformedElement("residual after factorization is not the identity");
    return out;
}

inline Spectrum scatter(const std::vector<std::pair<Charge, Q>>& incoming, Ordering tag, int N, const Lattice& lat);
inline Spectrum scatterInCone(const std::vector<std::pair<Charge, Q>>& incoming, const Cone& c, Ordering tag);

struct IdentityCheck {
    bool equal = true;
    std::optional<ConePoint> firstDiscrepancy;
    Q lhsCoefficient, rhsCoefficient;
};

// Compares two words to degree N; on failure reports the lowest lattice point
// where the log-coefficients differ.
inline IdentityCheck verifyIdentity(const FactorWord& lhs, const FactorWord& rhs, const Cone& cone) {
    IdentityCheck r;
    TorusAutomorphism a = evaluate(lhs, cone), b = evaluate(rhs, cone);
    if (a == b) return r;
    r.equal = false;
    LieSeries la = logSeries(a), lb = logSeries(b);
    for (std::size_t i = 0; i < Series::size(cone.truncation()); ++i) {
        auto [m, n] = Series::point(i);
        if (la.coefficients().coefficients()[i] != lb.coefficients().coefficients()[i]) {
            r.firstDiscrepancy = ConePoint{m, n};
            r.lhsCoefficient = la.coefficients().coefficients()[i];
            r.rhsCoefficient = lb.coefficients().coefficients()[i];
            break;
        }
    }
    return r;
}

// Jump of Omega(g1+g2) across the wall for primitive constituents.
inline Q primitiveJump(const Lattice& lat, const Charge& g1, const Q& om1, const Charge& g2, const Q& om2) {
    Int k = lat.pairing(g1, g2);
    if (k == 0) return 0;
    Q s = ((k + 1) % 2 == 0) ? Q(1) : Q(-1);
    return s * Q(static_cast<long>(k < 0 ? -k : k)) * om1 * om2;
}

// Basis (e1, e2) of the lattice points in the real plane of g1, g2 whose
// positive cone contains the positive real cone of g1, g2.
inline std::pair<Charge, Charge> planeBasis(const Charge& g1, const Charge& g2) {
    if (g1.rank() != g2.rank()) throw LatticeMismatch();
    Charge a = g1.primitive(), b = g2.primitive();
    Int D = 0;
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = i + 1; j < a.rank(); ++j) {
            Int mnr = a[i] * b[j] - a[j] * b[i];
            D = std::gcd(D, mnr < 0 ? -mnr : mnr);
        }
    if (D == 0) throw AlgebraError("plane charges are parallel");
    for (Int s = 0; s < D; ++s) {
        Charge t = s * a + b;
        bool divisible = true;
        for (std::size_t i = 0; i < t.rank() && divisible; ++i) divisible = t[i] % D == 0;
        if (!divisible) continue;
        for (auto& x : t.c) x /= D;
        // b = D t - s a; shift so that b has a non-negative coefficient on a
        if (s > 0) t = t - a;
        return {a, t};
    }
    throw AlgebraError("no plane basis");
}

// Cone through two rays, oriented so that the product of the incoming rays in
// the order opposite to tag is the side with only the incoming factors.
inline Cone scatteringCone(const Charge& r1, const Charge& r2, Ordering tag, int N, const Lattice& lat) {
    Int k = lat.pairing(r1, r2);
    if (k == 0) throw DegeneratePairing();
    bool keep = (tag == Ordering::Increasing) == (k > 0);
    return keep ? Cone(lat, r1, r2, N) : Cone(lat, r2, r1, N);
}

inline Spectrum scatter(const std::vector<std::pair<Charge, Q>>& incoming, Ordering tag, int N, const Lattice& lat) {
    if (tag == Ordering::Unordered) throw AlgebraError("scatter needs a slope ordering");
    if (incoming.empty()) throw InvalidCharge("scatter needs incoming charges");
    std::vector<Charge> rays;
    for (const auto& [g, w] : incoming) {
        if (g.isZero()) throw InvalidCharge();
        Charge p = g.primitive();
        if (std::find(rays.begin(), rays.end(), p) == rays.end()) rays.push_back(p);
    }
    if (rays.size() == 1) {
        Charge other(std::vector<Int>(lat.rank(), 0));
        // any independent helper direction gives a valid cone for a single ray
        for (std::size_t i = 0; i < lat.rank(); ++i) {
            Charge e(std::vector<Int>(lat.rank(), 0));
            e[i] = 1;
            if (lat.pairing(rays[0], e) != 0) {
                other = e;
                break;
            }
        }
        if (other.isZero()) throw DegeneratePairing();
        Cone cone = scatteringCone(rays[0], other, tag, N, lat);
        Spectrum s(cone);
        for (const auto& [g, w] : incoming) s.set(cone.point(g), s.at(cone.point(g)) + w);
        return s;
    }
    // extreme rays: the pair with the largest |pairing| whose cone holds all others
    std::optional<Cone> cone;
    for (std::size_t i = 0; i < rays.size() && !cone; ++i)
        for (std::size_t j = i + 1; j < rays.size() && !cone; ++j) {
            if (lat.pairing(rays[i], rays[j]) == 0) continue;
            Cone c = scatteringCone(rays[i], rays[j], tag, N, lat);
            bool all = true;
            for (const auto& r : rays) {
                try {
                    c.point(r);
                } catch (const OutsideCone&) {
                    all = false;
                    break;
                }
            }
            if (all) cone = c;
        }
    if (!cone) throw DegeneratePairing();
    return scatterInCone(incoming, *cone, tag);
}

// Scatter with the cone given; its orientation must come from scatteringCone.
inline Spectrum scatterInCone(const std::vector<std::pair<Charge, Q>>& incoming, const Cone& c, Ordering tag) {
    const Cone* cone = &c;
    Ordering opposite = tag == Ordering::Increasing ? Ordering::Decreasing : Ordering::Increasing;
    std::vector<std::pair<ConePoint, Q>> pts;
    for (const auto& [g, w] : incoming) pts.push_back({cone->point(g), w});
    std::stable_sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
        return opposite == Ordering::Increasing ? slopeLess(a.first, b.first) : slopeLess(b.first, a.first);
    });
    FactorWord w({}, opposite);
    for (const auto& [p, e] : pts)
        if (p.degree() <= cone->truncation()) w.factors.push_back({cone->charge(p), e});
    return factorize(evaluate(w, *cone), tag).spectrum;
}

// Words of standard identities on the cone spanned by gamma1, gamma2.
namespace identities {

inline FactorWord pentagonLhs() { return FactorWord({{Charge{1, 0}, 1}, {Charge{0, 1}, 1}}, Ordering::Decreasing); }
inline FactorWord pentagonRhs() {
    return FactorWord({{Charge{0, 1}, 1}, {Charge{1, 1}, 1}, {Charge{1, 0}, 1}}, Ordering::Increasing);
}

inline FactorWord kroneckerLhs() { return FactorWord({{Charge{0, 1}, 1}, {Charge{1, 0}, 1}}, Ordering::Increasing); }
// prod_{n>=1} K_{n g1+(n-1) g2} * K_{g1+g2}^{-2} * prod_{n=inf..1} K_{(n-1) g1+n g2}
inline FactorWord kroneckerRhs(int N) {
    FactorWord w({}, Ordering::Decreasing);
    for (int n = 1; 2 * n - 1 <= N; ++n) w.factors.push_back({Charge{n, n - 1}, 1});
    if (N >= 2) w.factors.push_back({Charge{1, 1}, -2});
    int top = (N + 1) / 2;
    for (int n = top; n >= 1; --n) w.factors.push_back({Charge{n - 1, n}, 1});
    return w;
}

// K_{g1} K_{g3} K_{g2} with g3 = g1 + g2.
inline FactorWord splitPointLhs() {
    return FactorWord({{Charge{1, 0}, 1}, {Charge{1, 1}, 1}, {Charge{0, 1}, 1}}, Ordering::Decreasing);
}
// Xi+ K_{g3}^2 K_{2 g3}^{-2} Xi- K_{g1}
inline FactorWord splitPointRhs(int N) {
    FactorWord w({}, Ordering::Increasing);
    for (int n = 1; 4 * n - 3 <= N; ++n) {
        w.factors.push_back({Charge{2 * n - 2, 2 * n - 1}, 1});
        if (4 * n - 1 <= N) w.factors.push_back({Charge{2 * n - 1, 2 * n}, 1});
    }
    w.factors.push_back({Charge{1, 1}, 2});
    if (N >= 4) w.factors.push_back({Charge{2, 2}, -2});
    int top = (N + 1) / 4 + 1;
    for (int n = top; n >= 1; --n) {
        if (4 * n + 1 <= N) w.factors.push_back({Charge{2 * n + 1, 2 * n}, 1});
        if (4 * n - 1 <= N) w.factors.push_back({Charge{2 * n, 2 * n - 1}, 1});
    }
    w.factors.push_back({Charge{1, 0}, 1});
    return w;
}

} // namespace identities

} // namespace wcs
