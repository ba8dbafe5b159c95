#pragma once

#include "wcs/algebra/kswcf.hpp"
#include "wcs/flow/flow.hpp"

namespace wcs {

struct TreeOptions {
    FlowOptions flow{};
    int depthMax = 3;
    double farOffset = 1e-3;  // step past a split point into the far chamber, units of Lambda^2
    int maxFlows = 5000;      // flow lines integrated per search
};

// A flow line with its subtree. At an internal vertex the children are the
// far-side states entering the scattering; `multiplicity` is the number of
// copies of a child's charge in the split of the parent's charge (0 for
// states that enter only through the scattering product).
struct AttractorTree {
    Charge charge;
    double theta = 0;
    std::vector<cplx> points;
    Termination end = Termination::StepLimit;
    Q omega = 0;
    Int multiplicity = 1;
    int attractor = -1;
    Charge vanishing;
    std::optional<cplx> vertex;
    std::optional<SplitPair> split;
    double wallResidual = 0;
    double phaseError = 0;  // largest |Arg Z - theta| along the edge
    std::vector<AttractorTree> children;
};

struct DTResult {
    Q omega = 0;
    std::optional<AttractorTree> tree;  // present iff a tree carries a nonzero invariant
    bool exhaustive = true;
    int depthMax = 0, Mmax = 0;
    std::string note;  // first reason for a non-exhaustive result
    int flows = 0;     // flow lines integrated
};

namespace detail {

class TreeSearch {
public:
    explicit TreeSearch(const TreeOptions& o) : o_(o) {}

    DTResult run(const PeriodFrame& root, const Charge& g) {
        DTResult r;
        r.depthMax = o_.depthMax;
        r.Mmax = o_.flow.Mmax;
        auto n = solve(root, g, o_.depthMax);
        r.omega = n.omega;
        if (sgn(n.omega) != 0) r.tree = std::move(n);
        r.exhaustive = exhaustive_;
        r.note = note_;
        r.flows = flows_;
        return r;
    }

private:
    using Key = std::tuple<double, double, Charge>;

    void incomplete(const std::string& why) {
        if (exhaustive_) note_ = why;
        exhaustive_ = false;
    }

    AttractorTree solve(const PeriodFrame& start, const Charge& g, int depth) {
        Key key{start.u.real(), start.u.imag(), g};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        AttractorTree t = compute(start, g, depth);
        memo_.emplace(key, t);
        return t;
    }

    AttractorTree compute(const PeriodFrame& start, const Charge& g, int depth) {
        AttractorTree t;
        t.charge = g;
        if (++flows_ > o_.maxFlows) {
            incomplete("flow budget exhausted");
            return t;
        }
        Trajectory tr;
        try {
            tr = flow(start, g, o_.flow);
        } catch (const GeometryError& e) {
            incomplete(e.what());
            return t;
        }
        t.theta = tr.theta;
        t.points = tr.points;
        t.phaseError = tr.maxPhaseError;
        t.end = tr.termination;
        switch (tr.termination) {
        case Termination::AttractorPoint:
            t.attractor = tr.attractor;
            t.vanishing = tr.vanishing;
            // initial data: Omega = 1 on the vanishing cycle, up to sign
            t.omega = (g == tr.vanishing || g == -tr.vanishing) ? 1 : 0;
            return t;
        case Termination::ZeroMass:
        case Termination::Escaped:
            return t;
        case Termination::StepLimit:
            incomplete("flow step limit");
            return t;
        case Termination::WallHit:
            break;
        }
        const WallEvent& ev = *tr.wall;
        t.vertex = ev.u;
        t.wallResidual = ev.residual;
        const SWModel& m = start.model;
        cplx rot = std::polar(1.0, -tr.theta);
        cplx dF = rot * ev.frame.centralChargeDerivative(g);
        cplx far = ev.u - std::conj(dF) / std::abs(dF) * (o_.farOffset * m.uScale());
        PeriodFrame ff;
        try {
            ff = continueFrame(ev.frame, far, o_.flow.continuation);
        } catch (const GeometryError& e) {
            incomplete(e.what());
            return t;
        }

        // far-side invariants of the constituents and of g itself
        std::vector<Charge> cands;
        for (const auto& p : ev.pairs)
            for (const Charge& c : {p.first, p.second})
                if (std::find(cands.begin(), cands.end(), c) == cands.end()) cands.push_back(c);
        std::sort(cands.begin(), cands.end());
        cands.push_back(g);
        std::vector<AttractorTree> support;
        if (depth == 0) incomplete("split depth bound reached");
        for (const Charge& c : cands) {
            if (std::abs(ff.centralCharge(c)) == 0) continue;
            // g continues on the same flow line; constituents start new branches
            if (c != g && depth == 0) continue;
            AttractorTree sub = solve(ff, c, c == g ? depth : depth - 1);
            if (sgn(sub.omega) == 0) continue;
            sub.points.insert(sub.points.begin(), ev.u);
            support.push_back(std::move(sub));
        }
        Q farOmega = 0;
        for (const auto& s : support)
            if (s.charge == g) farOmega = s.omega;
        t.omega = farOmega;
        if (support.empty()) return t;

        // extreme rays of the support by phase on the far side
        auto slope = [&](const Charge& c) {
            cplx z = rot * ff.centralCharge(c);
            return z.imag() / z.real();
        };
        const Charge* lo = &support.front().charge;
        const Charge* hi = lo;
        for (const auto& s : support) {
            if (slope(s.charge) < slope(*lo)) lo = &s.charge;
            if (slope(s.charge) > slope(*hi)) hi = &s.charge;
        }
        Charge r1 = lo->primitive(), r2 = hi->primitive();
        Lattice lat = m.lattice();
        if (r1 == r2 || lat.pairing(r1, r2) == 0) {
            t.children = std::move(support);
            return t;
        }
        auto [e1, e2] = planeBasis(r1, r2);
        Cone probe(lat, e1, e2, 1);
        ConePoint pg;
        try {
            pg = probe.point(g);
        } catch (const OutsideCone&) {
            return t;
        }
        Cone cone = scatteringCone(e1, e2, Ordering::Decreasing, std::max(pg.degree(), 1), lat);
        std::vector<std::pair<Charge, Q>> incoming;
        for (const auto& s : support) {
            try {
                if (cone.point(s.charge).degree() <= cone.truncation()) incoming.emplace_back(s.charge, s.omega);
            } catch (const OutsideCone&) {
            }
        }
        t.omega = scatterInCone(incoming, cone, Ordering::Decreasing).at(g);

        // balance: g = a r1 + b r2 over the extreme rays
        Cone rays(lat, r1, r2, 1);
        try {
            ConePoint ab = rays.point(g);
            if (ab.m > 0 && ab.n > 0) t.split = SplitPair{Int(ab.m) * r1, Int(ab.n) * r2};
            for (auto& s : support) {
                s.multiplicity = 0;
                if (s.charge == r1) s.multiplicity = ab.m;
                if (s.charge == r2) s.multiplicity = ab.n;
            }
        } catch (const OutsideCone&) {
            for (auto& s : support) s.multiplicity = 0;
        }
        t.children = std::move(support);
        return t;
    }

    TreeOptions o_;
    std::map<Key, AttractorTree> memo_;
    bool exhaustive_ = true;
    std::string note_;
    int flows_ = 0;
};

} // namespace detail

// Invariant of g at the frame's point from attractor trees: Omega = 1 on
// vanishing cycles at the leaves, scattering of the far-side states at
// every split point.
inline DTResult dtInvariant(const PeriodFrame& root, const Charge& g, const TreeOptions& o = {}) {
    if (g.rank() != root.model.lattice().rank()) throw LatticeMismatch();
    if (g.isZero()) throw InvalidCharge();
    detail::TreeSearch s(o);
    return s.run(root, g);
}

inline DTResult dtInvariant(const SWModel& m, cplx u, const Charge& g, const TreeOptions& o = {}) {
    return dtInvariant(periods(m, u, o.flow.continuation), g, o);
}

struct TreeList {
    std::vector<AttractorTree> trees;
    bool exhaustive = true;
    std::string note;
};

inline TreeList enumerateTrees(const SWModel& m, cplx root, const Charge& g, int depthMax, int Mmax, TreeOptions o = {}) {
    o.depthMax = depthMax;
    o.flow.Mmax = Mmax;
    DTResult r = dtInvariant(m, root, g, o);
    TreeList l;
    if (r.tree) l.trees.push_back(*r.tree);
    l.exhaustive = r.exhaustive;
    l.note = r.note;
    return l;
}

} // namespace wcs
