#pragma once

#include "wcs/geometry/periods.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace wcs {

using IMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

// Periods in a symplectic cycle basis whose rows follow the charge
// coordinates of the model's lattice: SU(2) (alpha, beta); SU(3)
// (beta1, beta2, alpha1, alpha2).
struct PeriodFrame {
    SWModel model;
    cplx u;
    std::vector<cplx> branchPoints;  // chain order
    IMatrix basis;                   // physical cycles = basis * chain cycles
    Eigen::MatrixXcd periods;        // 2g x (g+1): rows cycles, columns holomorphic forms then lambda
    double achievedError = 0;
    std::vector<cplx> path;          // continuation polyline ending at u

    int genus() const { return model.genus(); }
    std::vector<int> alphaRows() const { return model.group == Group::SU2 ? std::vector<int>{0} : std::vector<int>{2, 3}; }
    std::vector<int> betaRows() const { return model.group == Group::SU2 ? std::vector<int>{1} : std::vector<int>{0, 1}; }

    Eigen::MatrixXcd rows(const std::vector<int>& r, int cols) const {
        Eigen::MatrixXcd M(r.size(), cols);
        for (std::size_t i = 0; i < r.size(); ++i) M.row(i) = periods.row(r[i]).head(cols);
        return M;
    }
    // A_ij = period of holomorphic form j over alpha^i; B likewise over beta_i.
    Eigen::MatrixXcd A() const { return rows(alphaRows(), genus()); }
    Eigen::MatrixXcd B() const { return rows(betaRows(), genus()); }
    // Normalized period matrix, symmetric with positive imaginary part.
    Eigen::MatrixXcd tau() const { return B() * A().inverse(); }

    Eigen::VectorXcd a() const {
        Eigen::VectorXcd r(genus());
        auto ar = alphaRows();
        for (int i = 0; i < genus(); ++i) r(i) = periods(ar[i], genus());
        return r;
    }
    Eigen::VectorXcd aD() const {
        Eigen::VectorXcd r(genus());
        auto br = betaRows();
        for (int i = 0; i < genus(); ++i) r(i) = periods(br[i], genus());
        return r;
    }

    cplx centralCharge(const Charge& g) const {
        if (static_cast<int>(g.rank()) != 2 * genus()) throw LatticeMismatch();
        cplx z = 0;
        for (int i = 0; i < 2 * genus(); ++i) z += static_cast<double>(g[i]) * periods(i, genus());
        return z;
    }
    // dZ/du: the u-derivative of lambda is the top holomorphic form.
    cplx centralChargeDerivative(const Charge& g) const {
        cplx z = 0;
        for (int i = 0; i < 2 * genus(); ++i) z += static_cast<double>(g[i]) * periods(i, 0);
        return z;
    }

    // Riemann relations with Omega = (A^T B^T): first returns the norm of
    // A^T B - B^T A, second the smallest eigenvalue of i(A^T conj B - B^T conj A).
    double riemannFirst() const {
        Eigen::MatrixXcd a = A(), b = B();
        return (a.transpose() * b - b.transpose() * a).norm();
    }
    double riemannSecond() const {
        Eigen::MatrixXcd a = A(), b = B();
        Eigen::MatrixXcd H = cplx(0, 1) * (a.transpose() * b.conjugate() - b.transpose() * a.conjugate());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()));
        return es.eigenvalues().minCoeff();
    }

    // Kahler metric Im tau in the a-coordinates.
    Eigen::MatrixXd kahlerMetric() const {
        Eigen::MatrixXcd t = tau();
        Eigen::MatrixXd g = 0.5 * (t.imag() + t.imag().transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        if (es.eigenvalues().minCoeff() <= 0) throw ContinuationFailure("metric not positive definite: cycle basis drift");
        return g;
    }
};

struct ContinuationOptions {
    double maxStep = 0.25;      // units of Lambda^2
    double clearance = 0.25;    // step <= clearance * distance to discriminant
    double margin = 0.1;        // largest accepted distance of the basis fit from integers
    double minStep = 1e-10;     // units of Lambda^2
    double detour = 0.35;       // radius of detours around discriminant points, units of Lambda^2
    QuadratureOptions quad;
};

namespace detail {

inline Eigen::MatrixXd realStack(const Eigen::MatrixXcd& M) {
    Eigen::MatrixXd R(M.rows(), 2 * M.cols());
    R << M.real(), M.imag();
    return R;
}

inline long roundedDet(const IMatrix& T) { return std::lround(T.cast<double>().determinant()); }

// Integer matrix T with target ~ T * source, and the largest distance of the
// least-squares fit from the integers.
inline IMatrix integerFit(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& source, double& margin) {
    Eigen::MatrixXd X = realStack(source), Y = realStack(target);
    Eigen::MatrixXd F = (X * X.transpose()).ldlt().solve(X * Y.transpose()).transpose();
    IMatrix T(F.rows(), F.cols());
    margin = 0;
    for (int i = 0; i < F.rows(); ++i)
        for (int j = 0; j < F.cols(); ++j) {
            T(i, j) = std::lround(F(i, j));
            margin = std::max(margin, std::abs(F(i, j) - static_cast<double>(T(i, j))));
        }
    return T;
}

} // namespace detail

inline PeriodFrame makeFrame(const SWModel& m, cplx u, const RawPeriods& raw, const IMatrix& basis) {
    PeriodFrame f;
    f.model = m;
    f.u = u;
    f.branchPoints = raw.chain;
    f.basis = basis;
    f.periods = basis.cast<double>().cast<cplx>() * raw.P;
    f.achievedError = raw.achievedError * basis.cwiseAbs().rowwise().sum().maxCoeff();
    f.path = {u};
    return f;
}

// Continue a frame along the straight segment to `to`, refitting the integer
// basis against a linear prediction at every accepted step.
inline PeriodFrame continueFrame(const PeriodFrame& from, cplx to, const ContinuationOptions& o = {}) {
    const SWModel& m = from.model;
    double s2 = m.uScale();
    PeriodFrame cur = from;
    Eigen::MatrixXcd slope = Eigen::MatrixXcd::Zero(from.periods.rows(), from.periods.cols());
    bool haveSlope = false;
    double h = o.maxStep * s2;
    while (std::abs(to - cur.u) > 0) {
        double dist = m.distanceToDiscriminant(cur.u);
        double hmax = std::min(o.maxStep * s2, o.clearance * dist);
        h = std::min(h * 2, hmax);
        for (;;) {
            if (h < o.minStep * s2) throw ContinuationFailure("step size underflow near u = " + std::to_string(cur.u.real()) + "+" + std::to_string(cur.u.imag()) + "i");
            cplx d = to - cur.u;
            cplx next = (std::abs(d) <= h) ? to : cur.u + d / std::abs(d) * h;
            double step = std::abs(next - cur.u);
            RawPeriods raw = rawPeriods(m, next, o.quad);
            Eigen::MatrixXcd pred = cur.periods;
            if (haveSlope) pred += slope * (next - cur.u);
            double margin;
            IMatrix T = detail::integerFit(pred, raw.P, margin);
            if (margin > o.margin || std::abs(detail::roundedDet(T)) != 1) {
                h = step / 2;
                continue;
            }
            PeriodFrame nf = makeFrame(m, next, raw, T);
            Eigen::MatrixXcd dP = nf.periods - cur.periods;
            // the basis is locally constant: the change must be small against the periods
            if (dP.norm() > 0.5 * cur.periods.norm() && step > o.minStep * s2) {
                h = step / 2;
                continue;
            }
            slope = dP / (next - cur.u);
            haveSlope = true;
            nf.path = cur.path;
            nf.path.push_back(next);
            nf.achievedError = std::max(cur.achievedError, nf.achievedError);
            cur = std::move(nf);
            break;
        }
    }
    return cur;
}

inline PeriodFrame continueAlong(const PeriodFrame& from, const std::vector<cplx>& poly, const ContinuationOptions& o = {}) {
    PeriodFrame f = from;
    for (cplx p : poly) f = continueFrame(f, p, o);
    return f;
}

// Polyline from a to b that keeps a detour radius away from discriminant
// points, leaving each obstacle on the left of the direction of travel
// (side = +1) or on the right (side = -1).
inline std::vector<cplx> safePath(const SWModel& m, cplx a, cplx b, double detour, int side = 1) {
    double r = detour * m.uScale();
    cplx d = b - a;
    double L = std::abs(d);
    if (L == 0) return {b};
    cplx e = d / L;
    std::vector<std::pair<double, cplx>> obstacles;
    for (cplx p : m.discriminant()) {
        double t = std::real((p - a) * std::conj(e));
        double off = std::imag((p - a) * std::conj(e));
        if (t <= 0 || t >= L || std::abs(off) >= r) continue;
        if (std::abs(b - p) < r || std::abs(a - p) < r) continue;
        obstacles.emplace_back(t, p);
    }
    std::sort(obstacles.begin(), obstacles.end(), [](auto& x, auto& y) { return x.first < y.first; });
    std::vector<cplx> out;
    cplx left = cplx(0, 1) * e;
    for (auto& [t, p] : obstacles) {
        cplx off = -static_cast<double>(side) * left * r;
        out.push_back(p - e * r + off);
        out.push_back(p + off);
        out.push_back(p + e * r + off);
    }
    out.push_back(b);
    return out;
}

// Closed polyline (first point = last point = base) encircling the discriminant point p once
// counterclockwise, approached along a straight segment.
inline std::vector<cplx> loopAround(const SWModel& m, cplx base, cplx p, double radius, int side = 1, int sides = 16) {
    cplx d = base - p;
    cplx start = p + d / std::abs(d) * radius;
    std::vector<cplx> approach = safePath(m, base, start, radius / m.uScale(), side);
    std::vector<cplx> loop{base};
    loop.insert(loop.end(), approach.begin(), approach.end());
    double phi0 = std::arg(d);
    for (int k = 1; k <= sides; ++k) loop.push_back(p + std::polar(radius, phi0 + 2 * M_PI * k / sides));
    for (int k = static_cast<int>(approach.size()) - 2; k >= 0; --k) loop.push_back(approach[k]);
    loop.push_back(base);
    return loop;
}

// Charge action of the monodromy of a frame continued around a closed
// polyline: a charge with coordinates c is carried to M c.
inline IMatrix monodromyAlong(const PeriodFrame& start, const std::vector<cplx>& loop, const ContinuationOptions& o = {}) {
    PeriodFrame end = continueAlong(start, loop, o);
    if (std::abs(end.u - start.u) > 1e-12 * start.model.uScale()) throw ContinuationFailure("loop is not closed");
    double margin;
    // end cycles = Mc * start cycles; charges transform with the transpose
    IMatrix Mc = detail::integerFit(end.periods, start.periods, margin);
    if (margin > 1e-6) throw ContinuationFailure("no integer monodromy within tolerance, margin " + std::to_string(margin));
    return Mc.transpose();
}

// Picard-Lefschetz action gamma -> gamma + <gamma,gamma0> gamma0.
inline IMatrix picardLefschetz(const Lattice& lat, const Charge& g0) {
    int r = static_cast<int>(lat.rank());
    IMatrix P = IMatrix::Identity(r, r);
    for (int i = 0; i < r; ++i) {
        Charge e(std::vector<Int>(r, 0));
        e[i] = 1;
        Int p = lat.pairing(e, g0);
        for (int j = 0; j < r; ++j) P(j, i) += p * g0[j];
    }
    return P;
}

// Vanishing cycle of a Picard-Lefschetz matrix, up to sign (first nonzero
// entry made positive).
inline Charge vanishingCycle(const IMatrix& M) {
    int r = static_cast<int>(M.rows());
    IMatrix D = M - IMatrix::Identity(r, r);
    for (int j = 0; j < r; ++j) {
        Charge c(std::vector<Int>(D.col(j).data(), D.col(j).data() + r));
        if (c.isZero()) continue;
        c = c.primitive();
        for (int i = 0; i < r; ++i)
            if (c[i] != 0) {
                if (c[i] < 0) c = -c;
                break;
            }
        return c;
    }
    return Charge(std::vector<Int>(r, 0));
}

} // namespace wcs
