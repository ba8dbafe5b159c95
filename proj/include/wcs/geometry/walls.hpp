#pragma once

#include "wcs/geometry/calibration.hpp"

#include <functional>
#include <optional>

namespace wcs {

// Largest |residue| of the forms over the poles of lambda_SW. The only poles
// sit over x = infinity; each is encircled by a large circle on one sheet,
// where y = x^n sqrt(P/x^{2n}) with the principal root.
inline double residueCheck(const SWModel& m, cplx u, int maxNodes = 1 << 14) {
    auto roots = branchPoints(m, u);
    double rmax = 1;
    for (auto r : roots) rmax = std::max(rmax, std::abs(r));
    double R = 4 * rmax;
    int F = m.formCount(), n = m.n();
    std::vector<cplx> f(F);
    auto estimate = [&](int M) {
        std::vector<cplx> s(F, 0.0);
        for (int k = 0; k < M; ++k) {
            cplx x = std::polar(R, 2 * M_PI * k / M);
            cplx y = std::pow(x, n) * std::sqrt(m.P(u, x) / std::pow(x, 2 * n));
            m.forms(u, x, f.data());
            // residue = (1/2 pi i) * contour integral; dx = i x dtheta
            for (int i = 0; i < F; ++i) s[i] += f[i] / y * x / static_cast<double>(M);
        }
        return s;
    };
    int M = 64;
    auto prev = estimate(M);
    double worst = 0;
    for (;;) {
        M *= 2;
        auto cur = estimate(M);
        double diff = 0;
        worst = 0;
        for (int i = 0; i < F; ++i) {
            diff = std::max(diff, std::abs(cur[i] - prev[i]));
            worst = std::max(worst, std::abs(cur[i]));
        }
        if (diff < 1e-14 * std::pow(R, 2 * n) || M >= maxNodes) return worst;
        prev = std::move(cur);
    }
}

struct Window {
    double reMin = -2, reMax = 2, imMin = -2, imMax = 2;  // units of Lambda^2
    int nx = 40, ny = 40;
};

struct Polyline {
    std::vector<cplx> points;
    bool closed = false;
};

struct WallTrace {
    std::vector<Polyline> lines;
    std::size_t skippedCells = 0;
    double maxResidual = 0;  // largest |Im(Z1 conj Z2)| / (|Z1|^2 + |Z2|^2) at reported points
};

namespace detail {

inline double wallFunction(const PeriodFrame& f, const Charge& g1, const Charge& g2) {
    cplx z1 = f.centralCharge(g1), z2 = f.centralCharge(g2);
    return std::imag(z1 * std::conj(z2));
}

// Zero of the wall function on the segment a->b starting from frame fa,
// bracketed by a sign change, to width tol (Illinois variant of regula falsi).
inline cplx refineCrossing(const PeriodFrame& fa, cplx b, double fa_v, double fb_v, const Charge& g1, const Charge& g2,
                           double tol, double& residual) {
    cplx a = fa.u;
    double lo = 0, hi = 1, flo = fa_v, fhi = fb_v;
    int side = 0;
    double t = 0;
    PeriodFrame last = fa;
    for (int it = 0; it < 100 && (hi - lo) * std::abs(b - a) > tol; ++it) {
        t = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
        last = continueFrame(fa, a + t * (b - a));
        double ft = wallFunction(last, g1, g2);
        if ((ft > 0) == (flo > 0)) {
            lo = t;
            flo = ft;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = t;
            fhi = ft;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    t = 0.5 * (lo + hi);
    last = continueFrame(fa, a + t * (b - a));
    cplx z1 = last.centralCharge(g1), z2 = last.centralCharge(g2);
    double scale = std::norm(z1) + std::norm(z2);
    residual = scale > 0 ? std::abs(std::imag(z1 * std::conj(z2))) / scale : 0;
    return a + t * (b - a);
}

inline bool parallel(const Charge& a, const Charge& b) {
    // all 2x2 minors vanish
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = i + 1; j < a.rank(); ++j)
            if (a[i] * b[j] - a[j] * b[i] != 0) return false;
    return true;
}

} // namespace detail

// Zero set of Im(Z(g1)/Z(g2)) in the window, by marching squares with cell-local
// continuation. Cells touching the discriminant are skipped and the traced
// curve is joined through the discriminant point.
inline WallTrace wallFirstKind(const SWModel& m, const Charge& g1, const Charge& g2, const Window& w,
                               double tol = 1e-9) {
    if (g1.rank() != m.lattice().rank() || g2.rank() != m.lattice().rank()) throw LatticeMismatch();
    if (g1.isZero() || g2.isZero() || detail::parallel(g1, g2)) throw InvalidCharge("wall charges must be independent");
    if (!(w.reMax > w.reMin && w.imMax > w.imMin && w.nx > 0 && w.ny > 0)) throw AlgebraError("degenerate window");
    double s = m.uScale();
    double dx = (w.reMax - w.reMin) * s / w.nx, dy = (w.imMax - w.imMin) * s / w.ny;
    double diag = std::hypot(dx, dy);
    auto node = [&](int i, int j) { return cplx(w.reMin * s + i * dx, w.imMin * s + j * dy); };
    WallTrace out;
    std::vector<std::pair<cplx, cplx>> segments;
    tol *= s;

    for (int j = 0; j < w.ny; ++j) {
        // row frames are continued left to right, restarting from the
        // reference where the row passes near the discriminant
        std::optional<PeriodFrame> rowFrame;
        for (int i = 0; i < w.nx; ++i) {
            std::array<cplx, 4> c{node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
            std::optional<PeriodFrame> start;
            try {
                if (rowFrame && m.distanceToDiscriminant(c[0]) > diag &&
                    m.distanceToDiscriminant(0.5 * (rowFrame->u + c[0])) > diag)
                    start = continueFrame(*rowFrame, c[0]);
                else if (!m.nearDiscriminant(c[0]))
                    start = periods(m, c[0]);
            } catch (const GeometryError&) {
            }
            rowFrame = start;
            cplx centre = 0.5 * (c[0] + c[2]);
            if (!start || m.distanceToDiscriminant(centre) < diag) {
                ++out.skippedCells;
                continue;
            }
            std::array<std::optional<PeriodFrame>, 4> f;
            std::array<double, 4> v{};
            try {
                f[0] = start;
                for (int k = 1; k < 4; ++k) f[k] = continueFrame(*f[k - 1], c[k]);
            } catch (const GeometryError&) {
                ++out.skippedCells;
                continue;
            }
            for (int k = 0; k < 4; ++k) v[k] = detail::wallFunction(*f[k], g1, g2);
            std::vector<cplx> cross;
            for (int k = 0; k < 4; ++k) {
                int l = (k + 1) % 4;
                if ((v[k] > 0) == (v[l] > 0)) continue;
                double res;
                // edges are refined from the lower-left-most endpoint so that
                // neighbouring cells reproduce the same point
                bool fwd = std::real(c[k]) + std::imag(c[k]) < std::real(c[l]) + std::imag(c[l]);
                cplx p = fwd ? detail::refineCrossing(*f[k], c[l], v[k], v[l], g1, g2, tol, res)
                             : detail::refineCrossing(*f[l], c[k], v[l], v[k], g1, g2, tol, res);
                out.maxResidual = std::max(out.maxResidual, res);
                cross.push_back(p);
            }
            if (cross.size() == 2) {
                segments.emplace_back(cross[0], cross[1]);
            } else if (cross.size() == 4) {
                // saddle: decide the pairing by the sign at the centre
                double vc = detail::wallFunction(continueFrame(*f[0], centre), g1, g2);
                if ((vc > 0) == (v[0] > 0)) {
                    segments.emplace_back(cross[0], cross[1]);
                    segments.emplace_back(cross[2], cross[3]);
                } else {
                    segments.emplace_back(cross[0], cross[3]);
                    segments.emplace_back(cross[1], cross[2]);
                }
            }
        }
    }

    // chain segments into polylines by endpoint proximity
    double joinTol = 1e-6 * s + 10 * tol;
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> lines;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        std::vector<cplx> pts{segments[k].first, segments[k].second};
        for (int dir = 0; dir < 2; ++dir) {
            bool grown = true;
            while (grown) {
                grown = false;
                cplx end = pts.back();
                for (std::size_t q = 0; q < segments.size(); ++q) {
                    if (used[q]) continue;
                    if (std::abs(segments[q].first - end) < joinTol) {
                        pts.push_back(segments[q].second);
                    } else if (std::abs(segments[q].second - end) < joinTol) {
                        pts.push_back(segments[q].first);
                    } else {
                        continue;
                    }
                    used[q] = true;
                    grown = true;
                    break;
                }
            }
            std::reverse(pts.begin(), pts.end());
        }
        lines.push_back({pts, false});
    }

    // join open ends through the discriminant points they surround
    for (cplx p : m.discriminant()) {
        std::vector<std::pair<std::size_t, bool>> ends;  // (line, at back)
        for (std::size_t l = 0; l < lines.size(); ++l) {
            if (std::abs(lines[l].points.front() - p) < 2 * diag) ends.emplace_back(l, false);
            if (std::abs(lines[l].points.back() - p) < 2 * diag) ends.emplace_back(l, true);
        }
        if (ends.size() != 2) continue;
        auto [la, ba] = ends[0];
        auto [lb, bb] = ends[1];
        auto& A = lines[la].points;
        if (!ba) std::reverse(A.begin(), A.end());
        A.push_back(p);
        if (la == lb) {
            A.push_back(A.front());
            continue;
        }
        auto B = lines[lb].points;
        if (bb) std::reverse(B.begin(), B.end());
        A.insert(A.end(), B.begin(), B.end());
        lines.erase(lines.begin() + static_cast<long>(lb));
    }
    for (auto& l : lines)
        if (l.points.size() > 2 && std::abs(l.points.front() - l.points.back()) < joinTol) {
            l.points.back() = l.points.front();
            l.closed = true;
        }
    // deterministic order: longest first, then by first point
    std::sort(lines.begin(), lines.end(), [](const Polyline& a, const Polyline& b) {
        if (a.points.size() != b.points.size()) return a.points.size() > b.points.size();
        auto pa = a.points.front(), pb = b.points.front();
        return pa.real() != pb.real() ? pa.real() < pb.real() : pa.imag() < pb.imag();
    });
    out.lines = std::move(lines);
    return out;
}

} // namespace wcs
