#pragma once

#include "wcs/flow/trees.hpp"

namespace wcs {

// Chamber name: signs of Im(Z1 conj Z2) over a list of walls.
inline std::string chamberSignature(const PeriodFrame& f, const std::vector<SplitPair>& walls) {
    std::string s;
    for (const auto& w : walls) s += detail::wallFunction(f, w.first, w.second) > 0 ? '+' : '-';
    return s;
}

struct SpectrumEntry {
    Charge charge;
    Q omega;
    int trees = 0;
    bool exhaustive = true;
};

struct ChamberSpectrum {
    cplx basepoint;
    std::vector<SpectrumEntry> entries;  // nonzero invariants, sorted by charge
    bool exhaustive = true;
    double achievedError = 0;

    Q at(const Charge& g) const {
        for (const auto& e : entries)
            if (e.charge == g || e.charge == -g) return e.omega;
        return 0;
    }
};

// One charge per pair +-g (first nonzero coordinate positive).
inline std::vector<Charge> canonicalCharges(std::size_t rank, int maxCoord) {
    std::vector<Charge> out;
    std::vector<Int> c(rank, -maxCoord);
    for (;;) {
        Charge g(c);
        if (!g.isZero()) {
            std::size_t i = 0;
            while (g[i] == 0) ++i;
            if (g[i] > 0) out.push_back(g);
        }
        std::size_t i = 0;
        while (i < rank && c[i] == maxCoord) c[i++] = -maxCoord;
        if (i == rank) break;
        ++c[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline ChamberSpectrum chamberSpectrum(const PeriodFrame& base, const std::vector<Charge>& charges, const TreeOptions& o = {}) {
    ChamberSpectrum s;
    s.basepoint = base.u;
    s.achievedError = base.achievedError;
    for (const auto& g : charges) {
        DTResult r = dtInvariant(base, g, o);
        s.exhaustive = s.exhaustive && r.exhaustive;
        if (sgn(r.omega) == 0) continue;
        s.entries.push_back({g, r.omega, r.tree ? 1 : 0, r.exhaustive});
    }
    return s;
}

inline ChamberSpectrum chamberSpectrum(const SWModel& m, cplx u, int maxCoord, const TreeOptions& o = {}) {
    return chamberSpectrum(periods(m, u, o.flow.continuation), canonicalCharges(m.lattice().rank(), maxCoord), o);
}

// Vanishing cycles of each pair of neighbouring discriminant points, read in
// the frame f along straight paths from f.u and signed so that their central
// charges are aligned on the wall that encloses the pair.
inline std::vector<SplitPair> alignedPairs(const PeriodFrame& f, const ContinuationOptions& o = {}) {
    const SWModel& m = f.model;
    const Reference& ref = reference(m);
    std::vector<SplitPair> out;
    for (std::size_t k = 0; k + 1 < ref.points.size(); k += 2) {
        cplx pa = ref.points[k].u, pb = ref.points[k + 1].u;
        double sep = std::abs(pb - pa);
        double radius = 0.2 * sep;
        Charge va = vanishingCycle(monodromyAlong(f, loopAround(m, f.u, pa, radius), o));
        Charge vb = vanishingCycle(monodromyAlong(f, loopAround(m, f.u, pb, radius), o));
        // walk towards the midpoint and keep the last sign change of the wall function
        cplx c = 0.5 * (pa + pb);
        auto path = safePath(m, f.u, c, radius / m.uScale());
        PeriodFrame cur = f;
        double prev = detail::wallFunction(cur, va, vb);
        int sign = 0;
        cplx from = f.u;
        for (cplx node : path) {
            int steps = std::max(1, static_cast<int>(std::ceil(std::abs(node - from) / (0.02 * sep))));
            for (int i = 1; i <= steps; ++i) {
                PeriodFrame nxt = continueFrame(cur, from + (node - from) * (static_cast<double>(i) / steps), o);
                double v = detail::wallFunction(nxt, va, vb);
                if ((v > 0) != (prev > 0)) {
                    PeriodFrame mid = continueFrame(cur, 0.5 * (cur.u + nxt.u), o);
                    sign = std::real(mid.centralCharge(va) / mid.centralCharge(vb)) > 0 ? 1 : -1;
                }
                cur = std::move(nxt);
                prev = v;
            }
            from = node;
        }
        if (sign == 0) throw ContinuationFailure("no wall around the pair " + ref.points[k].label + ", " + ref.points[k + 1].label);
        out.push_back({va, Int(sign) * vb});
    }
    return out;
}

// Invariant of g in the spectra generated by the aligned pairs: the states
// just outside the walls that enclose the pairs, read in the frame f.
inline Q towerInvariant(const PeriodFrame& f, const Charge& g, const ContinuationOptions& o = {}) {
    Lattice lat = f.model.lattice();
    Q total = 0;
    for (const auto& p : alignedPairs(f, o)) {
        for (const Charge& h : {g, -g}) {
            Cone probe(lat, p.first, p.second, 1);
            ConePoint pt;
            try {
                pt = probe.point(h);
            } catch (const OutsideCone&) {
                continue;
            }
            Spectrum s = scatter({{p.first, 1}, {p.second, 1}}, Ordering::Decreasing, std::max(pt.degree(), 1), lat);
            total += s.at(h);
        }
    }
    return total;
}

struct JumpResult {
    Q before = 0, after = 0;
    Q predictedJump = 0;        // Omega(bound side) - Omega(unbound side)
    bool firstIsBound = false;
    std::string method;         // "trees" or "chamber"
    bool lowerConfidence = false;
    cplx crossing;              // wall point on the segment
    double crossingRatio = 0;   // Z1/Z2 there
};

// Omega(g) at two points on either side of the wall of (g1, g2). The segment
// between them may cross the positive-ratio part of the wall at most once.
inline JumpResult jumpAcrossWall(const SWModel& m, const Charge& g, const SplitPair& wall, cplx p, cplx q,
                                 const TreeOptions& o = {}, int samples = 64) {
    const Charge& g1 = wall.first;
    const Charge& g2 = wall.second;
    if (detail::parallel(g1, g2)) throw InvalidCharge("wall charges must be independent");
    PeriodFrame fp = periods(m, p, o.flow.continuation);
    int crossings = 0;
    JumpResult r;
    PeriodFrame cur = fp;
    double prev = detail::wallFunction(cur, g1, g2);
    for (int i = 1; i <= samples; ++i) {
        PeriodFrame nxt = continueFrame(cur, p + (q - p) * (static_cast<double>(i) / samples), o.flow.continuation);
        double v = detail::wallFunction(nxt, g1, g2);
        if ((v > 0) != (prev > 0)) {
            double res;
            cplx c = detail::refineCrossing(cur, nxt.u, prev, v, g1, g2, 1e-10 * m.uScale(), res);
            PeriodFrame fc = continueFrame(cur, c, o.flow.continuation);
            double ratio = std::real(fc.centralCharge(g1) / fc.centralCharge(g2));
            if (ratio > 0) {
                ++crossings;
                r.crossing = c;
                r.crossingRatio = ratio;
            }
        }
        cur = std::move(nxt);
        prev = v;
    }
    if (crossings > 1)
        throw ChamberMismatch("segment crosses the wall " + std::to_string(crossings) + " times");
    const PeriodFrame& fq = cur;
    if (crossings == 0) {
        DTResult a = dtInvariant(fp, g, o), b = dtInvariant(fq, g, o);
        if (a.exhaustive && b.exhaustive) {
            r.method = "trees";
            r.before = a.omega;
            r.after = b.omega;
            r.lowerConfidence = a.omega != b.omega;
        } else {
            r.method = "chamber";
            r.lowerConfidence = true;
            r.before = r.after = towerInvariant(fp, g, o.flow.continuation);
        }
        return r;
    }
    int sigma = stabilitySign(m);
    Lattice lat = m.lattice();
    double sp = sigma * static_cast<double>(lat.pairing(g1, g2)) * detail::wallFunction(fp, g1, g2);
    r.firstIsBound = sp > 0;

    DTResult a = dtInvariant(fp, g, o), b = dtInvariant(fq, g, o);
    const DTResult& unbound = r.firstIsBound ? b : a;
    const PeriodFrame& fu = r.firstIsBound ? fq : fp;
    bool treesOk = a.exhaustive && b.exhaustive;

    // constituent invariants on the unbound side
    auto constituent = [&](const Charge& c) {
        if (treesOk) {
            DTResult d = dtInvariant(fu, c, o);
            if (d.exhaustive) return d.omega;
        }
        return towerInvariant(fu, c, o.flow.continuation);
    };
    Q om1 = constituent(g1), om2 = constituent(g2);
    if (g == g1 + g2 && g1.isPrimitive() && g2.isPrimitive()) {
        r.predictedJump = primitiveJump(lat, g1, om1, g2, om2);
    } else {
        auto [e1, e2] = planeBasis(g1, g2);
        Cone probe(lat, e1, e2, 1);
        ConePoint pg = probe.point(g);
        Cone cone = scatteringCone(e1, e2, Ordering::Decreasing, std::max(pg.degree(), 1), lat);
        r.predictedJump = scatterInCone({{g1, om1}, {g2, om2}}, cone, Ordering::Decreasing).at(g);
    }

    if (treesOk) {
        r.method = "trees";
        r.before = a.omega;
        r.after = b.omega;
        Q bound = r.firstIsBound ? a.omega : b.omega;
        r.lowerConfidence = bound - unbound.omega != r.predictedJump;
        return r;
    }
    r.method = "chamber";
    r.lowerConfidence = true;
    Q base = towerInvariant(fu, g, o.flow.continuation);
    Q boundValue = base + r.predictedJump;
    r.before = r.firstIsBound ? boundValue : base;
    r.after = r.firstIsBound ? base : boundValue;
    return r;
}

// A point on the positive-ratio part of the traced wall of (g1, g2) and two
// points offset along the local normal: (unbound side, bound side).
struct Straddle {
    cplx wallPoint, unbound, bound;
};

inline std::optional<Straddle> straddleWall(const SWModel& m, const Charge& g1, const Charge& g2, const Window& w,
                                            double offset = 0.4) {
    WallTrace tr = wallFirstKind(m, g1, g2, w);
    int sigma = stabilitySign(m);
    double k = static_cast<double>(m.lattice().pairing(g1, g2));
    double h = offset * m.uScale();
    for (const auto& l : tr.lines)
        for (std::size_t i = 1; i + 1 < l.points.size(); ++i) {
            cplx c = l.points[i], t = l.points[i + 1] - l.points[i - 1];
            if (std::abs(t) == 0 || m.distanceToDiscriminant(c) < 4 * h) continue;
            cplx nrm = cplx(0, 1) * t / std::abs(t);
            try {
                PeriodFrame fc = periods(m, c);
                if (std::real(fc.centralCharge(g1) / fc.centralCharge(g2)) <= 0) continue;
                PeriodFrame fa = continueFrame(fc, c + h * nrm), fb = continueFrame(fc, c - h * nrm);
                double sa = sigma * k * detail::wallFunction(fa, g1, g2);
                double sb = sigma * k * detail::wallFunction(fb, g1, g2);
                if ((sa > 0) == (sb > 0)) continue;
                return sa > 0 ? Straddle{c, fb.u, fa.u} : Straddle{c, fa.u, fb.u};
            } catch (const GeometryError&) {
            }
        }
    return std::nullopt;
}

} // namespace wcs
