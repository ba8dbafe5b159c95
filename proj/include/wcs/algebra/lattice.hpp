#pragma once

#include "wcs/error.hpp"

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace wcs {

using Int = std::int64_t;

// Integer vector in a fixed lattice basis.
struct Charge {
    std::vector<Int> c;

    Charge() = default;
    Charge(std::initializer_list<Int> l) : c(l) {}
    explicit Charge(std::vector<Int> v) : c(std::move(v)) {}

    std::size_t rank() const { return c.size(); }
    Int operator[](std::size_t i) const { return c[i]; }
    Int& operator[](std::size_t i) { return c[i]; }

    bool isZero() const {
        for (Int x : c)
            if (x != 0) return false;
        return true;
    }
    Int content() const {
        Int g = 0;
        for (Int x : c) g = std::gcd(g, x < 0 ? -x : x);
        return g;
    }
    bool isPrimitive() const { return content() == 1; }
    Charge primitive() const {
        Int g = content();
        Charge r = *this;
        if (g > 1)
            for (auto& x : r.c) x /= g;
        return r;
    }

    friend bool operator==(const Charge& a, const Charge& b) { return a.c == b.c; }
    friend bool operator!=(const Charge& a, const Charge& b) { return a.c != b.c; }
    friend bool operator<(const Charge& a, const Charge& b) { return a.c < b.c; }
    friend Charge operator+(const Charge& a, const Charge& b) {
        if (a.rank() != b.rank()) throw LatticeMismatch();
        Charge r = a;
        for (std::size_t i = 0; i < r.rank(); ++i) r.c[i] += b.c[i];
        return r;
    }
    friend Charge operator-(const Charge& a, const Charge& b) {
        if (a.rank() != b.rank()) throw LatticeMismatch();
        Charge r = a;
        for (std::size_t i = 0; i < r.rank(); ++i) r.c[i] -= b.c[i];
        return r;
    }
    friend Charge operator-(const Charge& a) {
        Charge r = a;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend Charge operator*(Int k, const Charge& a) {
        Charge r = a;
        for (auto& x : r.c) x *= k;
        return r;
    }
    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
        return s + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const Charge& a) { return os << a.str(); }
};

// Charge lattice with an antisymmetric integer pairing.
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(std::vector<std::vector<Int>> pairing) : w_(std::move(pairing)) {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            if (w_[i].size() != w_.size()) throw AlgebraError("pairing matrix is not square");
            for (std::size_t j = 0; j < w_.size(); ++j)
                if (w_[i][j] != -w_[j][i]) throw AlgebraError("pairing matrix is not antisymmetric");
        }
    }

    // (q,g) coordinates, <(q1,g1),(q2,g2)> = q1 g2 - q2 g1.
    static Lattice su2() { return Lattice({{0, 1}, {-1, 0}}); }
    // (g1,g2,q1,q2) coordinates, <(g,q),(g',q')> = g.q' - q.g'.
    static Lattice su3() {
        return Lattice({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}});
    }

    std::size_t rank() const { return w_.size(); }
    const std::vector<std::vector<Int>>& matrix() const { return w_; }

    Int pairing(const Charge& a, const Charge& b) const {
        if (a.rank() != rank() || b.rank() != rank()) throw LatticeMismatch();
        Int s = 0;
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) s += a.c[i] * w_[i][j] * b.c[j];
        return s;
    }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.w_ == b.w_; }

private:
    std::vector<std::vector<Int>> w_;
};

} // namespace wcs
