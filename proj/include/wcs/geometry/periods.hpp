#pragma once

#include "wcs/geometry/model.hpp"

#include <array>
#include <limits>
#include <numeric>

namespace wcs {

struct QuadratureOptions {
    double target = 1e-13;   // relative per segment
    double accept = 1e-10;   // worst acceptable estimate before a precision error
    int minNodes = 32;
    int maxNodes = 1 << 16;
};

// Periods of the forms over the lifts of a simple chain of segments
// e0-e1-...-e_{2g+1}; the first 2g chain cycles form a basis of H1.
struct RawPeriods {
    std::vector<cplx> chain;  // branch points in chain order
    Eigen::MatrixXcd P;       // 2g x (g+1): rows cycles, columns forms (holomorphic..., lambda)
    double achievedError = 0;
};

namespace detail {

inline double segmentDistance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double t = std::clamp(std::real((p - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

inline bool segmentsCross(cplx a, cplx b, cplx c, cplx d) {
    auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a), d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Simple polygonal path through all roots maximizing the worst ratio of
// clearance from other roots to segment length.
inline std::vector<cplx> bestChain(const std::vector<cplx>& roots) {
    std::size_t k = roots.size();
    std::vector<int> perm(k), best;
    std::iota(perm.begin(), perm.end(), 0);
    double bestScore = -1, bestLen = 1e300;
    do {
        if (perm.front() > perm.back()) continue;  // reversal symmetry
        double score = 1e300, len = 0;
        bool ok = true;
        for (std::size_t s = 0; s + 1 < k && ok; ++s) {
            cplx a = roots[perm[s]], b = roots[perm[s + 1]];
            double L = std::abs(b - a);
            len += L;
            for (std::size_t r = 0; r < k; ++r) {
                if (static_cast<int>(r) == perm[s] || static_cast<int>(r) == perm[s + 1]) continue;
                score = std::min(score, segmentDistance(roots[r], a, b) / L);
            }
            for (std::size_t t = s + 2; t + 1 < k && ok; ++t)
                if (segmentsCross(a, b, roots[perm[t]], roots[perm[t + 1]])) ok = false;
        }
        if (!ok) continue;
        if (score > bestScore * (1 + 1e-9) || (score > bestScore * (1 - 1e-9) && len < bestLen)) {
            bestScore = score;
            bestLen = len;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<cplx> chain;
    for (int i : best) chain.push_back(roots[i]);
    return chain;
}

} // namespace detail

// 2 * integral over the segment [a,b] of f dx / y for all forms, with y
// continued along the segment from the product of per-root square roots.
// Gauss-Chebyshev in theta (x = c + h cos theta), node count doubled until
// successive estimates agree.
inline std::vector<cplx> segmentPeriods(const SWModel& m, cplx u, const std::vector<cplx>& roots, std::size_t ia,
                                        std::size_t ib, const QuadratureOptions& q, double& err) {
    cplx a = roots[ia], b = roots[ib];
    cplx c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<cplx> others, dirs, sdirs;
    for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j == ia || j == ib) continue;
        others.push_back(roots[j]);
        cplx d = (c - roots[j]) / std::abs(c - roots[j]);
        dirs.push_back(d);
        sdirs.push_back(std::sqrt(d));
    }
    int F = m.formCount();
    std::vector<cplx> f(F);
    auto estimate = [&](int M) {
        std::vector<cplx> s(F, 0.0);
        for (int k = 0; k < M; ++k) {
            double th = (k + 0.5) * M_PI / M;
            cplx x = c + h * std::cos(th);
            cplx S = 1.0;
            for (std::size_t j = 0; j < others.size(); ++j) S *= sdirs[j] * std::sqrt((x - others[j]) / dirs[j]);
            m.forms(u, x, f.data());
            for (int i = 0; i < F; ++i) s[i] += f[i] / S;
        }
        // y = i h sqrt(1-t^2) S, dx = h dt: the segment integral is -i * int_0^pi f/S dtheta
        for (auto& v : s) v *= cplx(0, -2.0) * (M_PI / M);
        return s;
    };
    int M = q.minNodes;
    auto prev = estimate(M);
    for (;;) {
        M *= 2;
        auto cur = estimate(M);
        double diff = 0, mag = 0;
        for (int i = 0; i < F; ++i) {
            diff = std::max(diff, std::abs(cur[i] - prev[i]));
            mag = std::max(mag, std::abs(cur[i]));
        }
        if (diff <= q.target * std::max(1.0, mag) || M >= q.maxNodes) {
            err = diff;
            if (diff > q.accept * std::max(1.0, mag)) throw PrecisionError("period quadrature did not converge", diff);
            return cur;
        }
        prev = std::move(cur);
    }
}

inline RawPeriods rawPeriods(const SWModel& m, cplx u, const QuadratureOptions& q = {}) {
    auto roots = branchPoints(m, u);
    RawPeriods r;
    r.chain = detail::bestChain(roots);
    int g = m.genus();
    r.P.resize(2 * g, m.formCount());
    for (int s = 0; s < 2 * g; ++s) {
        double e = 0;
        auto p = segmentPeriods(m, u, r.chain, s, s + 1, q, e);
        r.achievedError = std::max(r.achievedError, e);
        for (int i = 0; i < m.formCount(); ++i) r.P(s, i) = p[i];
    }
    return r;
}

// Intersection matrix of the chain cycles: consecutive cycles meet once, with
// signs fixed by the Riemann bilinear relations.
inline Eigen::MatrixXi chainIntersection(const SWModel& m, const RawPeriods& r) {
    int g = m.genus(), d = 2 * g;
    Eigen::MatrixXcd H = r.P.leftCols(g);
    Eigen::MatrixXi best;
    double bestRes = 1e300;
    for (int mask = 0; mask < (1 << (d - 1)); ++mask) {
        Eigen::MatrixXi C = Eigen::MatrixXi::Zero(d, d);
        for (int j = 0; j + 1 < d; ++j) {
            int s = (mask >> j) & 1 ? -1 : 1;
            C(j, j + 1) = s;
            C(j + 1, j) = -s;
        }
        Eigen::MatrixXd Ci = C.cast<double>().inverse();
        Eigen::MatrixXcd R1 = H.transpose() * Ci.cast<cplx>() * H;
        Eigen::MatrixXcd R2 = cplx(0, -1) * H.transpose() * Ci.cast<cplx>() * H.conjugate();
        Eigen::MatrixXcd Hm = 0.5 * (R2 + R2.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hm);
        if (es.eigenvalues().minCoeff() <= 0) continue;
        double res = R1.norm();
        if (res < bestRes) {
            bestRes = res;
            best = C;
        }
    }
    if (best.size() == 0) throw ContinuationFailure("no consistent intersection form for chain cycles");
    return best;
}

} // namespace wcs
