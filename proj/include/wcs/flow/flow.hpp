#pragma once

#include "wcs/geometry/walls.hpp"

#include <optional>

namespace wcs {

struct FlowOptions {
    double epsPhase = 1e-10;   // |Im F| / |Z| after correction
    double maxStep = 0.05;     // units of Lambda^2
    double minStep = 1e-8;     // units of Lambda^2
    double capture = 1e-4;     // attractor ball radius, units of Lambda^2
    double zeroMass = 1e-6;    // mass below this * Lambda^n at a regular point ends the flow
    double escape = 60;        // |u| beyond this (units of Lambda^2) ends the flow
    int maxSteps = 20000;
    int Mmax = 6;              // coefficient bound for split candidates
    bool detectWalls = true;
    ContinuationOptions continuation{};
};

enum class Termination { AttractorPoint, WallHit, ZeroMass, Escaped, StepLimit };

inline std::string toString(Termination t) {
    switch (t) {
    case Termination::AttractorPoint: return "attractor";
    case Termination::WallHit: return "wall";
    case Termination::ZeroMass: return "zero-mass";
    case Termination::Escaped: return "escaped";
    case Termination::StepLimit: return "step-limit";
    }
    return "?";
}

struct SplitPair {
    Charge first, second;
};

struct WallEvent {
    cplx u;
    PeriodFrame frame;
    std::vector<SplitPair> pairs;  // all candidate splits on this wall
    double residual = 0;           // max |Im(Z1/Z2)| over the pairs
};

struct Trajectory {
    Charge charge;
    double theta = 0;
    std::vector<cplx> points;
    std::vector<double> masses;
    Termination termination = Termination::StepLimit;
    int attractor = -1;  // index into model.discriminant()
    Charge vanishing;    // local vanishing cycle at the attractor
    std::optional<WallEvent> wall;
    PeriodFrame last;
    double maxPhaseError = 0;
    bool tie = false;  // a wall crossing was found in the step that reached the attractor
};

// Sign sigma with sigma <g1,g2> Im(Z1 conj Z2) > 0 on the side where the
// bound state of g1, g2 exists. Fixed once from the W boson of pure SU(2)
// at weak coupling; the SU(3) lattice pairing is minus the intersection form.
inline int stabilitySign(const SWModel& m) {
    static const int su2 = [] {
        SWModel w = SWModel::su2();
        PeriodFrame f = periods(w, cplx(0, -2.5));
        Charge g1{0, 1}, g2{2, -1};
        double v = static_cast<double>(w.lattice().pairing(g1, g2)) *
                   std::imag(f.centralCharge(g1) * std::conj(f.centralCharge(g2)));
        return v > 0 ? 1 : -1;
    }();
    return su2 * m.intersectionSign();
}

namespace detail {

struct LockedFrame {
    PeriodFrame f;
    cplx F, dF;  // e^{-i theta} Z and its u-derivative
};

inline LockedFrame lock(PeriodFrame f, const Charge& g, cplx rot) {
    LockedFrame l{std::move(f), 0, 0};
    l.F = rot * l.f.centralCharge(g);
    l.dF = rot * l.f.centralChargeDerivative(g);
    return l;
}

// Newton iteration back onto Im F = 0 along the gradient of Im F.
inline std::optional<LockedFrame> correct(LockedFrame p, const Charge& g, cplx rot, double tolAbs, double epsPhase,
                                          const ContinuationOptions& o) {
    for (int it = 0; it < 12; ++it) {
        double tol = std::max(epsPhase * std::abs(p.F), tolAbs);
        if (std::abs(p.F.imag()) <= tol) return p;
        if (std::abs(p.dF) == 0) return std::nullopt;
        cplx du = cplx(0, -p.F.imag()) * std::conj(p.dF) / std::norm(p.dF);
        if (p.f.model.nearDiscriminant(p.f.u + du)) return std::nullopt;
        p = lock(continueFrame(p.f, p.f.u + du, o), g, rot);
    }
    return std::nullopt;
}

// Local vanishing cycle at discriminant point p seen from frame f, by a
// circle about p through f.u.
inline Charge localVanishingCycle(const PeriodFrame& f, cplx p, const ContinuationOptions& o) {
    cplx d = f.u - p;
    std::vector<cplx> loop;
    const int sides = 24;
    for (int k = 1; k <= sides; ++k) loop.push_back(p + d * std::polar(1.0, 2 * M_PI * k / sides));
    loop.back() = f.u;
    return vanishingCycle(monodromyAlong(f, loop, o));
}

inline std::vector<double> imRow(const PeriodFrame& f, cplx rot) {
    std::vector<double> r(2 * f.genus());
    for (int i = 0; i < 2 * f.genus(); ++i) r[i] = std::imag(rot * f.periods(i, f.genus()));
    return r;
}
inline std::vector<double> reRow(const PeriodFrame& f, cplx rot) {
    std::vector<double> r(2 * f.genus());
    for (int i = 0; i < 2 * f.genus(); ++i) r[i] = std::real(rot * f.periods(i, f.genus()));
    return r;
}
inline double dot(const Charge& c, const std::vector<double>& r) {
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += static_cast<double>(c[i]) * r[i];
    return s;
}

// Charges g1 with g1 and g - g1 not parallel to g, one per unordered pair
// {g1, g - g1} in which at least one piece has |coefficients| <= M.
inline std::vector<Charge> splitCharges(const Charge& g, int M) {
    std::vector<Charge> out;
    std::size_t r = g.rank();
    std::vector<Int> c(r, -M);
    auto bounded = [&](const Charge& x) {
        for (std::size_t i = 0; i < r; ++i)
            if (x[i] > M || x[i] < -M) return false;
        return true;
    };
    for (;;) {
        Charge a(c);
        Charge b = g - a;
        if (!a.isZero() && !b.isZero() && !parallel(a, g) && (a < b || !bounded(b))) out.push_back(a);
        std::size_t i = 0;
        while (i < r && c[i] == M) c[i++] = -M;
        if (i == r) break;
        ++c[i];
    }
    return out;
}

// Joint zero of Im F(g) and Im F(g1) near u0 by 2-d Newton.
inline std::optional<PeriodFrame> wallPoint(const PeriodFrame& near, cplx u0, const Charge& g, const Charge& g1, cplx rot,
                                            const ContinuationOptions& o) {
    PeriodFrame f = continueFrame(near, u0, o);
    double scale = f.model.scale();
    for (int it = 0; it < 20; ++it) {
        cplx F = rot * f.centralCharge(g), a = rot * f.centralChargeDerivative(g);
        cplx F1 = rot * f.centralCharge(g1), b = rot * f.centralChargeDerivative(g1);
        // Im(a du) = a_i x + a_r y
        double det = a.imag() * b.real() - a.real() * b.imag();
        if (det == 0) return std::nullopt;
        double r1 = -F.imag(), r2 = -F1.imag();
        if (std::abs(r1) < 1e-14 * scale && std::abs(r2) < 1e-14 * scale) return f;
        double x = (r1 * b.real() - a.real() * r2) / det;
        double y = (a.imag() * r2 - b.imag() * r1) / det;
        cplx du(x, y);
        if (std::abs(du) < 1e-15 * f.model.uScale()) return f;
        if (std::abs(du) > 0.1 * f.model.uScale() || f.model.nearDiscriminant(f.u + du)) return std::nullopt;
        f = continueFrame(f, f.u + du, o);
    }
    return f;
}

// Same point by bisection along the corrected level set between two
// accepted flow points that bracket the sign change of Im F(g1).
inline std::optional<PeriodFrame> wallPointOnStep(const LockedFrame& a, const LockedFrame& b, const Charge& g,
                                                  const Charge& g1, cplx rot, double tolAbs, double epsPhase,
                                                  const ContinuationOptions& o) {
    double fa = std::imag(rot * a.f.centralCharge(g1));
    std::optional<LockedFrame> best;
    double lo = 0, hi = 1;
    for (int it = 0; it < 60; ++it) {
        double s = 0.5 * (lo + hi);
        auto p = correct(lock(continueFrame(a.f, a.f.u + s * (b.f.u - a.f.u), o), g, rot), g, rot, tolAbs, epsPhase, o);
        if (!p) return std::nullopt;
        double v = std::imag(rot * p->f.centralCharge(g1));
        if ((v > 0) == (fa > 0)) lo = s;
        else hi = s;
        best = std::move(p);
        if ((hi - lo) * std::abs(b.f.u - a.f.u) < 1e-14 * a.f.model.uScale()) break;
    }
    if (!best) return std::nullopt;
    return best->f;
}

} // namespace detail

// Level-set march of Im(e^{-i theta} Z(g)) = 0 with decreasing mass from
// the frame `start`. Charges are read in the basis continued along the way.
inline Trajectory flow(const PeriodFrame& start, const Charge& g, const FlowOptions& opt = {}) {
    const SWModel& m = start.model;
    if (g.rank() != m.lattice().rank()) throw LatticeMismatch();
    if (m.nearDiscriminant(start.u)) branchPoints(m, start.u);
    cplx z0 = start.centralCharge(g);
    double s2 = m.uScale(), scale = m.scale();
    if (std::abs(z0) <= 1e-12 * scale) throw InvalidCharge("central charge vanishes at the start point");
    const ContinuationOptions& co = opt.continuation;

    Trajectory t;
    t.charge = g;
    t.theta = std::arg(z0);
    cplx rot = std::polar(1.0, -t.theta);
    double tolAbs = 1e-13 * scale;
    const int sigma = stabilitySign(m);
    Lattice lat = m.lattice();
    std::vector<Charge> cand;
    std::vector<Int> candPairing;
    if (opt.detectWalls) {
        for (auto& c : detail::splitCharges(g, opt.Mmax)) {
            Int p = lat.pairing(c, g);
            if (p == 0) continue;
            cand.push_back(c);
            candPairing.push_back(p);
        }
    }

    detail::LockedFrame cur = detail::lock(start, g, rot);
    t.points.push_back(cur.f.u);
    t.masses.push_back(cur.F.real());
    auto disc = m.discriminant();
    std::vector<bool> checked(disc.size(), false);
    double h = opt.maxStep * s2;

    for (int step = 0;; ++step) {
        if (step >= opt.maxSteps) {
            t.termination = Termination::StepLimit;
            break;
        }
        double dist = m.distanceToDiscriminant(cur.f.u);
        double hmax = std::min({opt.maxStep * s2, 0.25 * dist, 0.5 * cur.F.real() / std::abs(cur.dF)});
        h = std::min(2 * h, hmax);
        std::optional<detail::LockedFrame> next;
        while (!next) {
            if (h < opt.minStep * s2)
                throw ContinuationFailure("attractor flow step failure at u = " + std::to_string(cur.f.u.real()) + "+" +
                                          std::to_string(cur.f.u.imag()) + "i");
            cplx dir = -std::conj(cur.dF) / std::abs(cur.dF);
            cplx up = cur.f.u + h * dir;
            try {
                if (m.nearDiscriminant(up)) throw ContinuationFailure("predictor on discriminant");
                auto p = detail::lock(continueFrame(cur.f, up, co), g, rot);
                next = detail::correct(p, g, rot, tolAbs, opt.epsPhase, co);
                if (next && !(next->F.real() < cur.F.real() && next->F.real() > 0)) next.reset();
                if (next && std::abs(next->f.u - cur.f.u) > 2 * h) next.reset();
            } catch (const GeometryError&) {
                next.reset();
            }
            if (!next) h *= 0.5;
        }
        detail::LockedFrame prev = std::move(cur);
        cur = std::move(*next);
        t.points.push_back(cur.f.u);
        t.masses.push_back(cur.F.real());
        t.maxPhaseError = std::max(t.maxPhaseError, std::abs(std::arg(cur.F)));

        // wall crossings in this step
        std::optional<WallEvent> ev;
        if (!cand.empty()) {
            auto ip = detail::imRow(prev.f, rot), in = detail::imRow(cur.f, rot);
            auto rn = detail::reRow(cur.f, rot);
            double best = 2;
            std::size_t bestIdx = 0;
            double zprev = std::abs(prev.F);
            for (std::size_t k = 0; k < cand.size(); ++k) {
                double a = detail::dot(cand[k], ip), b = detail::dot(cand[k], in);
                if ((a > 0) == (b > 0) || a == 0) continue;
                if (step == 0 && std::abs(a) < 1e-9 * zprev) continue;  // started on this wall
                if (sigma * static_cast<double>(candPairing[k]) * a <= 0) continue;  // not arriving from the bound side
                double re1 = detail::dot(cand[k], rn);
                if (!(re1 > 0 && re1 < cur.F.real())) continue;
                double frac = a / (a - b);
                if (frac < best) {
                    best = frac;
                    bestIdx = k;
                }
            }
            if (best <= 1) {
                const Charge& g1 = cand[bestIdx];
                cplx u0 = prev.f.u + best * (cur.f.u - prev.f.u);
                auto wf = detail::wallPoint(prev.f, u0, g, g1, rot, co);
                auto inStep = [&](const PeriodFrame& f) {
                    double F = std::real(rot * f.centralCharge(g));
                    return F >= cur.F.real() && F <= prev.F.real();
                };
                if (!wf || !inStep(*wf)) wf = detail::wallPointOnStep(prev, cur, g, g1, rot, tolAbs, opt.epsPhase, co);
                if (wf) {
                    WallEvent e;
                    e.u = wf->u;
                    e.frame = *wf;
                    auto rw = detail::reRow(*wf, rot);
                    double Fw = std::real(rot * wf->centralCharge(g));
                    for (std::size_t k = 0; k < cand.size(); ++k) {
                        const Charge& w1 = cand[k];
                        Charge c2 = g - w1;
                        double re1 = detail::dot(w1, rw);
                        if (!(re1 > 0 && re1 < Fw)) continue;
                        cplx z1 = wf->centralCharge(w1), z2 = wf->centralCharge(c2);
                        double res = std::abs(std::imag(z1 * std::conj(z2))) / (std::abs(z1) * std::abs(z2));
                        if (res > 1e-7) continue;
                        e.pairs.push_back({w1, c2});
                        e.residual = std::max(e.residual, res);
                    }
                    ev = std::move(e);
                }
            }
        }

        // attractor points entered in this step
        for (std::size_t k = 0; k < disc.size(); ++k) {
            double d = std::abs(cur.f.u - disc[k]);
            if (checked[k] || d >= opt.capture * s2) continue;
            checked[k] = true;
            Charge v = detail::localVanishingCycle(cur.f, disc[k], co);
            if (!v.isZero() && detail::parallel(v, g)) {
                t.termination = Termination::AttractorPoint;
                t.attractor = static_cast<int>(k);
                t.vanishing = v;
                t.tie = ev.has_value();
                t.last = cur.f;
                return t;
            }
        }
        if (ev) {
            // the trajectory ends on the wall, inside the last step
            t.points.pop_back();
            t.masses.pop_back();
            t.points.push_back(ev->u);
            t.masses.push_back(std::real(rot * ev->frame.centralCharge(g)));
            t.termination = Termination::WallHit;
            t.wall = std::move(ev);
            t.last = t.wall->frame;
            return t;
        }
        if (cur.F.real() < opt.zeroMass * scale && m.distanceToDiscriminant(cur.f.u) >= opt.capture * s2) {
            t.termination = Termination::ZeroMass;
            break;
        }
        if (std::abs(cur.f.u) > opt.escape * s2) {
            t.termination = Termination::Escaped;
            break;
        }
    }
    t.last = cur.f;
    return t;
}

// Decompositions of the trajectory's charge at a wall point whose
// constituents are aligned with it within epsPhase and have positive masses.
inline std::vector<SplitPair> splitCandidates(const Trajectory& t, const PeriodFrame& at, int Mmax, double epsPhase = 1e-7) {
    std::vector<SplitPair> out;
    cplx z = at.centralCharge(t.charge);
    for (auto& a : detail::splitCharges(t.charge, Mmax)) {
        Charge b = t.charge - a;
        cplx za = at.centralCharge(a), zb = at.centralCharge(b);
        if (std::abs(za) == 0 || std::abs(zb) == 0) continue;
        double pa = std::arg(za / z), pb = std::arg(zb / z);
        if (std::abs(pa) < epsPhase && std::abs(pb) < epsPhase) out.push_back({a, b});
    }
    return out;
}

} // namespace wcs
