#pragma once

#include "wcs/algebra/lattice.hpp"
#include "wcs/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace wcs {

using cplx = std::complex<double>;

enum class Group { SU2, SU3 };

// Pure SU(2) curve y^2 = (x^2-u)^2 - L^4, or the SU(3) curve
// y^2 = (x^3-ux-v)^2 - L^6 restricted to the real slice v = reV.
struct SWModel {
    Group group = Group::SU2;
    double lambda = 1.0;
    double reV = 10.0;      // SU(3) slice only, in units of lambda^3
    double epsDelta = 1e-6; // discriminant proximity, units of lambda^n

    static SWModel su2(double L = 1.0) { return SWModel{Group::SU2, L, 0.0, 1e-6}; }
    static SWModel su3Slice(double L = 1.0, double reV = 10.0) { return SWModel{Group::SU3, L, reV, 1e-6}; }

    int n() const { return group == Group::SU2 ? 2 : 3; }
    int genus() const { return n() - 1; }
    double scale() const { return std::pow(lambda, n()); }
    double uScale() const { return lambda * lambda; }
    cplx v() const { return cplx(reV * std::pow(lambda, 3), 0.0); }
    std::string name() const { return group == Group::SU2 ? "su2" : "su3-slice"; }

    Lattice lattice() const { return group == Group::SU2 ? Lattice::su2() : Lattice::su3(); }
    // Intersection number of cycles = sign * lattice pairing of their charges.
    int intersectionSign() const { return group == Group::SU2 ? 1 : -1; }

    // Coefficients of W(x) = x^n - u x^{n-2} - ..., highest degree first.
    std::vector<cplx> superpotential(cplx u) const {
        if (group == Group::SU2) return {1.0, 0.0, -u};
        return {1.0, 0.0, -u, -v()};
    }
    cplx W(cplx u, cplx x) const {
        cplx r = 0;
        for (auto c : superpotential(u)) r = r * x + c;
        return r;
    }
    cplx dW(cplx u, cplx x) const { return group == Group::SU2 ? 2.0 * x : 3.0 * x * x - u; }
    cplx P(cplx u, cplx x) const {
        cplx w = W(u, x);
        return w * w - scale() * scale();
    }

    // Integrands f(x) of the forms f dx/y: holomorphic x^{n-k} for k = 2..n, then lambda_SW.
    int formCount() const { return genus() + 1; }
    void forms(cplx u, cplx x, cplx* out) const {
        if (group == Group::SU2) {
            out[0] = 1.0;
            out[1] = 2.0 * x * x;
        } else {
            out[0] = x;
            out[1] = 1.0;
            out[2] = (3.0 * x * x - u) * x;
        }
    }

    // Discriminant points in the u-plane (for SU(3), on the slice).
    std::vector<cplx> discriminant() const {
        if (group == Group::SU2) return {cplx(uScale(), 0), cplx(-uScale(), 0)};
        std::vector<cplx> pts;
        double L3 = std::pow(lambda, 3);
        for (int k = 0; k < 3; ++k) {
            cplx w = std::polar(1.0, 2.0 * M_PI * k / 3.0);
            for (double s : {1.0, -1.0}) {
                double r = 3.0 * std::pow((reV * L3 + s * L3) / 2.0, 2.0 / 3.0);
                pts.push_back(r * w);
            }
        }
        return pts;
    }

    // Distance in the u-plane to the nearest discriminant point.
    double distanceToDiscriminant(cplx u) const {
        double d = 1e300;
        for (auto p : discriminant()) d = std::min(d, std::abs(u - p));
        return d;
    }
    bool nearDiscriminant(cplx u) const { return distanceToDiscriminant(u) < epsDelta * uScale(); }
};

namespace detail {

inline std::vector<cplx> polyRoots(const std::vector<cplx>& c) {
    // c: highest degree first, monic
    int d = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int j = 0; j < d; ++j) C(0, j) = -c[j + 1] / c[0];
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + d);
    return r;
}

inline cplx horner(const std::vector<cplx>& c, cplx x, cplx& deriv) {
    cplx p = 0, dp = 0;
    for (auto a : c) {
        dp = dp * x + p;
        p = p * x + a;
    }
    deriv = dp;
    return p;
}

} // namespace detail

// The 2n roots of P, from the companion matrices of W = +-L^n with Newton
// polish, in a canonical order (argument, then modulus).
inline std::vector<cplx> branchPoints(const SWModel& m, cplx u) {
    if (m.nearDiscriminant(u))
        throw CollidingRoots(m.distanceToDiscriminant(u), "u = " + std::to_string(u.real()) + "+" + std::to_string(u.imag()) + "i");
    std::vector<cplx> roots;
    for (double s : {1.0, -1.0}) {
        auto c = m.superpotential(u);
        c.back() -= s * m.scale();
        for (cplx x : detail::polyRoots(c)) {
            for (int it = 0; it < 8; ++it) {
                cplx d;
                cplx p = detail::horner(c, x, d);
                if (d == 0.0) break;
                cplx dx = p / d;
                x -= dx;
                if (std::abs(dx) < 1e-16 * (1 + std::abs(x))) break;
            }
            roots.push_back(x);
        }
    }
    double gap = 1e300;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j) gap = std::min(gap, std::abs(roots[i] - roots[j]));
    if (gap < 1e-12 * m.lambda) throw CollidingRoots(gap, "branch points");
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        double aa = std::arg(a), ab = std::arg(b);
        if (std::abs(aa - ab) > 1e-12) return aa < ab;
        return std::abs(a) < std::abs(b);
    });
    return roots;
}

} // namespace wcs
