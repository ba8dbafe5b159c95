#pragma once

#include "wcs/geometry/frame.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace wcs {

// A discriminant point with the vanishing cycle seen from the reference
// point along the approach path that passes obstacles on `side`.
struct DiscriminantPoint {
    cplx u;
    std::string label;
    Charge vanishing;
    int side = 1;
};

struct Reference {
    PeriodFrame frame;  // calibrated frame at the reference point u = 0
    std::vector<DiscriminantPoint> points;
};

namespace detail {

struct Target {
    std::string label;
    Charge charge;
};

// SU(2): (0,1) at +L^2 and (-2,1) at -L^2. SU(3): the nu_k^+- in
// (g1,g2,q1,q2) coordinates, electric part in Dynkin labels.
inline std::vector<Target> vanishingTargets(const SWModel& m) {
    if (m.group == Group::SU2) return {{"+L2", {0, 1}}, {"-L2", {-2, 1}}};
    return {{"nu1+", {1, 0, -2, 1}}, {"nu1-", {1, 0, 0, 0}}, {"nu2+", {0, 1, 0, 0}},
            {"nu2-", {0, 1, -1, 2}}, {"nu3+", {1, 1, -2, 1}}, {"nu3-", {1, 1, -1, 2}}};
}

inline Eigen::MatrixXd pairingMatrix(const Lattice& lat) {
    int r = static_cast<int>(lat.rank());
    Eigen::MatrixXd W(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) W(i, j) = static_cast<double>(lat.matrix()[i][j]);
    return W;
}

// Integer S with S r_i = t_i for all rows, unimodular and carrying the chain
// intersection form C to sign * pairing. Empty if none.
inline std::optional<IMatrix> solveCalibration(const Eigen::MatrixXd& R, const Eigen::MatrixXd& Tg, const Eigen::MatrixXd& C,
                                               const Eigen::MatrixXd& W, int sign) {
    Eigen::MatrixXd St = (R.transpose() * R).ldlt().solve(R.transpose() * Tg);
    if ((R * St - Tg).norm() > 1e-9) return std::nullopt;
    Eigen::MatrixXd S = St.transpose();
    IMatrix Si = S.array().round().cast<long>();
    if ((S - Si.cast<double>()).norm() > 1e-9) return std::nullopt;
    Eigen::MatrixXd Sd = Si.cast<double>();
    if (std::abs(std::abs(Sd.determinant()) - 1) > 1e-9) return std::nullopt;
    if ((C - sign * Sd.transpose() * W * Sd).norm() > 1e-9) return std::nullopt;
    return Si;
}

inline Charge toCharge(const Eigen::VectorXd& v) {
    std::vector<Int> c(v.size());
    for (int i = 0; i < v.size(); ++i) c[i] = std::llround(v(i));
    return Charge(c);
}

inline Reference calibrate(const SWModel& m) {
    const cplx u0 = 0;
    const double radius = 0.3 * m.uScale();
    RawPeriods raw = rawPeriods(m, u0);
    int d = 2 * m.genus();
    PeriodFrame rawFrame = makeFrame(m, u0, raw, IMatrix::Identity(d, d));
    Eigen::MatrixXd C = chainIntersection(m, raw).cast<double>();
    Eigen::MatrixXd W = pairingMatrix(m.lattice());
    auto disc = m.discriminant();
    auto targets = vanishingTargets(m);
    std::size_t np = disc.size();

    // raw vanishing cycles for both detour sides
    std::vector<std::array<Eigen::VectorXd, 2>> rv(np);
    for (std::size_t i = 0; i < np; ++i)
        for (int s = 0; s < 2; ++s) {
            Charge c = vanishingCycle(monodromyAlong(rawFrame, loopAround(m, u0, disc[i], radius, s == 0 ? 1 : -1)));
            Eigen::VectorXd v(d);
            for (int j = 0; j < d; ++j) v(j) = static_cast<double>(c[j]);
            rv[i][s] = v;
        }

    // assignments of discriminant points to targets: SU(2) fixed; SU(3)
    // pairs at equal argument go to one k, in either order
    std::vector<std::vector<int>> assignments;
    if (m.group == Group::SU2) {
        assignments.push_back({0, 1});
    } else {
        std::array<int, 3> perm{0, 1, 2};
        do {
            for (int sw = 0; sw < 8; ++sw) {
                std::vector<int> a(6);
                for (int k = 0; k < 3; ++k) {
                    bool swap = (sw >> k) & 1;
                    a[2 * k] = 2 * perm[k] + (swap ? 1 : 0);
                    a[2 * k + 1] = 2 * perm[k] + (swap ? 0 : 1);
                }
                assignments.push_back(a);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    for (int sides = 0; sides < (1 << np); ++sides) {
        Eigen::MatrixXd R(np, d);
        for (std::size_t i = 0; i < np; ++i) R.row(i) = rv[i][(sides >> i) & 1].transpose();
        for (const auto& a : assignments)
            for (int signs = 0; signs < (1 << np); ++signs) {
                Eigen::MatrixXd Tg(np, d);
                for (std::size_t i = 0; i < np; ++i) {
                    double e = ((signs >> i) & 1) ? -1.0 : 1.0;
                    for (int j = 0; j < d; ++j) Tg(i, j) = e * static_cast<double>(targets[a[i]].charge[j]);
                }
                auto S = solveCalibration(R, Tg, C, W, m.intersectionSign());
                if (!S) continue;
                // physical cycles = T * chain cycles with T = S^{-T}
                Eigen::MatrixXd Ti = S->cast<double>().inverse().transpose();
                IMatrix T = Ti.array().round().cast<long>();
                Reference ref;
                ref.frame = makeFrame(m, u0, raw, T);
                for (std::size_t i = 0; i < np; ++i) {
                    int side = ((sides >> i) & 1) ? -1 : 1;
                    ref.points.push_back({disc[i], targets[a[i]].label, targets[a[i]].charge, side});
                }
                return ref;
            }
    }
    throw ContinuationFailure("no cycle basis reproduces the vanishing-cycle data");
}

} // namespace detail

// Calibrated reference data, computed once per model parameters.
inline const Reference& reference(const SWModel& m) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, double>, std::unique_ptr<Reference>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(static_cast<int>(m.group), m.lambda, m.group == Group::SU2 ? 0.0 : m.reV);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Reference>(detail::calibrate(m))).first;
    return *it->second;
}

// Frame at u, continued from the calibrated reference along a path that
// keeps discriminant points on its left.
inline PeriodFrame periods(const SWModel& m, cplx u, const ContinuationOptions& o = {}) {
    if (m.nearDiscriminant(u)) branchPoints(m, u);  // throws with the gap
    const Reference& ref = reference(m);
    PeriodFrame f = ref.frame;
    f.model = m;
    return continueAlong(f, safePath(m, f.u, u, o.detour), o);
}

// Frame at u continued from a nearby frame along the straight segment.
inline PeriodFrame periods(const PeriodFrame& near, cplx u, const ContinuationOptions& o = {}) {
    if (near.model.nearDiscriminant(u)) branchPoints(near.model, u);
    return continueFrame(near, u, o);
}

inline IMatrix monodromy(const SWModel& m, const std::vector<cplx>& loop, const ContinuationOptions& o = {}) {
    if (loop.empty()) throw ContinuationFailure("empty loop");
    return monodromyAlong(periods(m, loop.front(), o), loop, o);
}

} // namespace wcs
