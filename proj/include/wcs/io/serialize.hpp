#pragma once

#include "wcs/flow/chambers.hpp"

#include <json.hpp>

namespace wcs::io {

using Json = nlohmann::ordered_json;

inline Json toJson(const Charge& g) {
    Json a = Json::array();
    for (std::size_t i = 0; i < g.rank(); ++i) a.push_back(static_cast<long long>(g[i]));
    return a;
}

inline Json toJson(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json toJson(const std::vector<cplx>& v) {
    Json a = Json::array();
    for (auto z : v) a.push_back(toJson(z));
    return a;
}

inline Json toJson(const Eigen::MatrixXcd& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(toJson(M(i, j)));
        rows.push_back(r);
    }
    return rows;
}

inline Json toJson(const Eigen::VectorXcd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(toJson(v(i)));
    return a;
}

inline Json toJson(const IMatrix& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
        rows.push_back(r);
    }
    return rows;
}

// Exact rows carry achievedError 0.
inline Json termsJson(const std::map<ConePoint, Q>& terms, const Cone& cone, const char* valueKey) {
    Json out = Json::array();
    for (const auto& [p, c] : terms) {
        Json row;
        row["m"] = p.m;
        row["n"] = p.n;
        row["charge"] = toJson(cone.charge(p));
        row[valueKey] = toString(c);
        row["achievedError"] = 0;
        out.push_back(row);
    }
    return out;
}

inline Json toJson(const Spectrum& s) { return termsJson(s.omega(), s.cone(), "coeff"); }
inline Json toJson(const LieSeries& l) { return termsJson(l.terms(), l.cone(), "coeff"); }

inline std::string orderName(Ordering t) {
    switch (t) {
    case Ordering::Increasing: return "increasing";
    case Ordering::Decreasing: return "decreasing";
    case Ordering::Unordered: return "unordered";
    }
    return "?";
}

inline Json toJson(const FactorWord& w) {
    Json f = Json::array();
    for (const auto& x : w.factors) f.push_back(Json{{"charge", toJson(x.charge)}, {"exponent", toString(x.exponent)}});
    return Json{{"order", orderName(w.tag)}, {"factors", f}};
}

inline Json toJson(const PeriodFrame& f) {
    Json j;
    j["model"] = f.model.name();
    j["u"] = toJson(f.u);
    j["A"] = toJson(f.A());
    j["B"] = toJson(f.B());
    j["tau"] = toJson(f.tau());
    j["a"] = toJson(f.a());
    j["aD"] = toJson(f.aD());
    j["achievedError"] = f.achievedError;
    return j;
}

inline Json toJson(const WallTrace& w) {
    Json lines = Json::array();
    for (const auto& l : w.lines)
        lines.push_back(Json{{"closed", l.closed}, {"points", toJson(l.points)}, {"achievedError", w.maxResidual}});
    return Json{{"lines", lines}, {"skippedCells", w.skippedCells}, {"maxResidual", w.maxResidual}};
}

inline Json toJson(const SplitPair& p) { return Json::array({toJson(p.first), toJson(p.second)}); }

inline Json toJson(const AttractorTree& t) {
    Json j;
    j["charge"] = toJson(t.charge);
    j["theta"] = t.theta;
    j["omega"] = toString(t.omega);
    j["end"] = toString(t.end);
    j["multiplicity"] = static_cast<long long>(t.multiplicity);
    if (t.attractor >= 0) {
        j["attractor"] = t.attractor;
        j["vanishing"] = toJson(t.vanishing);
    }
    if (t.vertex) {
        j["vertex"] = toJson(*t.vertex);
        j["wallResidual"] = t.wallResidual;
    }
    if (t.split) j["split"] = toJson(*t.split);
    j["achievedError"] = t.phaseError;
    j["points"] = toJson(t.points);
    Json kids = Json::array();
    for (const auto& c : t.children) kids.push_back(toJson(c));
    j["children"] = kids;
    return j;
}

inline Json toJson(const DTResult& r) {
    Json j;
    j["omega"] = toString(r.omega);
    j["exhaustive"] = r.exhaustive;
    j["depthMax"] = r.depthMax;
    j["Mmax"] = r.Mmax;
    if (!r.note.empty()) j["note"] = r.note;
    j["flows"] = r.flows;
    Json trees = Json::array();
    if (r.tree) trees.push_back(toJson(*r.tree));
    j["trees"] = trees;
    return j;
}

inline Json toJson(const ChamberSpectrum& s) {
    Json entries = Json::array();
    for (const auto& e : s.entries)
        entries.push_back(Json{{"charge", toJson(e.charge)},
                               {"omega", toString(e.omega)},
                               {"trees", e.trees},
                               {"exhaustive", e.exhaustive},
                               {"achievedError", s.achievedError}});
    return Json{{"basepoint", toJson(s.basepoint)}, {"exhaustive", s.exhaustive}, {"achievedError", s.achievedError},
                {"spectrum", entries}};
}

} // namespace wcs::io
