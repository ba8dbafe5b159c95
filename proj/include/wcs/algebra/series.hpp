#pragma once

#include "wcs/algebra/rational.hpp"
#include "wcs/error.hpp"

#include <utility>
#include <vector>

namespace wcs {

// Truncated commutative power series in two variables X, Y with exact
// rational coefficients; keeps monomials X^m Y^n with m+n <= N.
class Series {
public:
    Series() = default;
    explicit Series(int N) : N_(N), c_(size(N)) {}

    static Series one(int N) {
        Series s(N);
        s.c_[0] = 1;
        return s;
    }
    static Series monomial(int m, int n, const Q& coef, int N) {
        Series s(N);
        if (m + n <= N) s.c_[index(m, n)] = coef;
        return s;
    }

    static std::size_t size(int N) { return static_cast<std::size_t>((N + 1) * (N + 2) / 2); }
    static std::size_t index(int m, int n) {
        int d = m + n;
        return static_cast<std::size_t>(d * (d + 1) / 2 + m);
    }
    static std::pair<int, int> point(std::size_t idx) {
        int d = 0;
        while (static_cast<std::size_t>((d + 1) * (d + 2) / 2) <= idx) ++d;
        int m = static_cast<int>(idx) - d * (d + 1) / 2;
        return {m, d - m};
    }

    int truncation() const { return N_; }
    const Q& at(int m, int n) const { return c_[index(m, n)]; }
    Q& at(int m, int n) { return c_[index(m, n)]; }
    const std::vector<Q>& coefficients() const { return c_; }

    bool isZero() const {
        for (const auto& q : c_)
            if (sgn(q) != 0) return false;
        return true;
    }
    // Smallest total degree carrying a nonzero coefficient, -1 if zero.
    int lowestDegree() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) return point(i).first + point(i).second;
        return -1;
    }
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) s.push_back(i);
        return s;
    }

    Series& operator+=(const Series& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (sgn(o.c_[i]) != 0) c_[i] += o.c_[i];
        return *this;
    }
    Series& operator-=(const Series& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (sgn(o.c_[i]) != 0) c_[i] -= o.c_[i];
        return *this;
    }
    Series& operator*=(const Q& k) {
        for (auto& q : c_)
            if (sgn(q) != 0) q *= k;
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, const Q& k) { return a *= k; }
    friend Series operator-(Series a) { return a *= Q(-1); }
    friend bool operator==(const Series& a, const Series& b) { return a.N_ == b.N_ && a.c_ == b.c_; }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    // Product truncated at total degree maxDeg (default: N).
    friend Series multiply(const Series& a, const Series& b, int maxDeg = -1) {
        a.check(b);
        int D = maxDeg < 0 ? a.N_ : std::min(maxDeg, a.N_);
        Series r(a.N_);
        auto sa = a.support(), sb = b.support();
        Q t;
        for (auto i : sa) {
            auto [m1, n1] = point(i);
            if (m1 + n1 > D) break;
            for (auto j : sb) {
                auto [m2, n2] = point(j);
                if (m1 + n1 + m2 + n2 > D) break;
                mpq_mul(t.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
                r.c_[index(m1 + m2, n1 + n2)] += t;
            }
        }
        return r;
    }
    friend Series operator*(const Series& a, const Series& b) { return multiply(a, b); }

    // Multiply by the monomial X^m Y^n, dropping terms beyond N.
    Series shifted(int m, int n) const {
        Series r(N_);
        for (auto i : support()) {
            auto [a, b] = point(i);
            if (a + b + m + n <= N_) r.c_[index(a + m, b + n)] = c_[i];
        }
        return r;
    }

    // Keep only terms of total degree <= D.
    Series truncated(int D) const {
        Series r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            auto [m, n] = point(i);
            if (m + n > D) r.c_[i] = 0;
        }
        return r;
    }

    // (1 + s)^e for s without constant term and rational e.
    friend Series binomialPower(const Series& s, const Q& e) {
        if (sgn(s.at(0, 0)) != 0) throw MalformedElement("binomial series needs vanishing constant term");
        Series r = one(s.N_);
        if (sgn(e) == 0 || s.isZero()) return r;
        int low = s.lowestDegree();
        Series term = one(s.N_);
        Q coef = 1;
        for (int j = 1; j * low <= s.N_; ++j) {
            coef *= (e - (j - 1));
            coef /= j;
            term = term * s;
            if (sgn(coef) != 0) r += term * coef;
        }
        return r;
    }

    // Multiplicative inverse of a series with constant term 1.
    friend Series reciprocal(const Series& s) {
        if (s.at(0, 0) != 1) throw MalformedElement("reciprocal needs unit constant term");
        return binomialPower(s - one(s.N_), Q(-1));
    }

private:
    void check(const Series& o) const {
        if (o.N_ != N_) throw ConeMismatch();
    }

    int N_ = 0;
    std::vector<Q> c_;
};

} // namespace wcs
