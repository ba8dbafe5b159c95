#include "commands.hpp"

#include <regex>
#include <sstream>

namespace wcs::cli {

void RunConfig::validate() const {
    if (model != "su2" && model != "su3-slice") throw AlgebraError("unknown model '" + model + "' (su2 | su3-slice)");
    if (!(lambda > 0)) throw AlgebraError("lambda must be positive");
    if (!(tolPhase > 0 && tolWall > 0 && tolDelta > 0 && tolQuad > 0)) throw AlgebraError("tolerances must be positive");
    if (truncation < 1) throw AlgebraError("truncation must be at least 1");
    if (!(window.reMax > window.reMin && window.imMax > window.imMin && window.nx > 0 && window.ny > 0))
        throw AlgebraError("degenerate window");
    if (format != "json" && format != "csv") throw AlgebraError("unknown format '" + format + "' (json | csv)");
    if (depthMax < 0 || mmax < 1 || maxFlows < 1) throw AlgebraError("search bounds must be positive");
}

SWModel RunConfig::swModel() const {
    SWModel m = model == "su2" ? SWModel::su2(lambda) : SWModel::su3Slice(lambda, reV);
    m.epsDelta = tolDelta;
    return m;
}

ContinuationOptions RunConfig::continuation() const {
    ContinuationOptions o;
    o.quad.target = tolQuad;
    return o;
}

TreeOptions RunConfig::treeOptions() const {
    TreeOptions o;
    o.depthMax = depthMax;
    o.maxFlows = maxFlows;
    o.flow.Mmax = mmax;
    o.flow.epsPhase = tolPhase;
    o.flow.continuation = continuation();
    return o;
}

namespace {

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

double toDouble(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw AlgebraError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw AlgebraError("not a number: '" + s + "'");
    return v;
}

} // namespace

Charge parseCharge(const std::string& s) {
    std::vector<Int> c;
    static const std::regex integer(R"(\s*(-?\d+)\s*)");
    for (const auto& item : splitList(s)) {
        std::smatch mt;
        if (!std::regex_match(item, mt, integer)) throw AlgebraError("malformed charge '" + s + "'");
        c.push_back(std::stoll(mt[1]));
    }
    if (c.empty()) throw AlgebraError("empty charge");
    return Charge(c);
}

cplx parsePoint(const std::string& s) {
    auto items = splitList(s);
    if (items.size() == 1) return {toDouble(items[0]), 0.0};
    if (items.size() == 2) return {toDouble(items[0]), toDouble(items[1])};
    throw AlgebraError("malformed point '" + s + "' (re,im)");
}

Window parseWindow(const std::string& s) {
    auto items = splitList(s);
    if (items.size() != 4 && items.size() != 6) throw AlgebraError("malformed window '" + s + "' (reMin,reMax,imMin,imMax[,nx,ny])");
    Window w;
    w.reMin = toDouble(items[0]);
    w.reMax = toDouble(items[1]);
    w.imMin = toDouble(items[2]);
    w.imMax = toDouble(items[3]);
    if (items.size() == 6) {
        w.nx = static_cast<int>(toDouble(items[4]));
        w.ny = static_cast<int>(toDouble(items[5]));
    }
    return w;
}

FactorWord parseWord(const std::string& word) {
    static const std::regex factor(R"(\s*K\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\](?:\^\(?\s*(-?\d+(?:/\d+)?)\s*\)?)?\s*)");
    FactorWord w;
    auto it = word.cbegin();
    std::smatch mt;
    while (it != word.cend()) {
        if (!std::regex_search(it, word.cend(), mt, factor, std::regex_constants::match_continuous)) {
            if (std::all_of(it, word.cend(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); })) break;
            throw AlgebraError("malformed word at '" + std::string(it, word.cend()) + "' (expected K[m,n] or K[m,n]^e)");
        }
        Q e = mt[3].matched ? parseRational(mt[3]) : Q(1);
        w.factors.push_back({Charge{std::stoll(mt[1]), std::stoll(mt[2])}, e});
        it = mt[0].second;
    }
    return w;
}

cplx regionPoint(const SWModel& m, const std::string& region) {
    double s = m.uScale();
    if (m.group == Group::SU2) {
        if (region == "strong") return s * cplx(0.3, -0.2);
        if (region == "weak") return s * cplx(2.0, -1.5);
        throw AlgebraError("unknown region '" + region + "' for su2 (strong | weak)");
    }
    if (region == "near") {
        auto d = m.discriminant();
        return 0.5 * (d[0] + d[1]) - cplx(0, 1.5 * s);
    }
    throw AlgebraError("unknown region '" + region + "' for su3-slice (near)");
}

Json cmdFactorize(const RunConfig& c, const std::string& text, long pairing, const std::string& order) {
    FactorWord w = parseWord(text);
    Cone cone = Cone::standard(pairing, c.truncation);
    if (cone.degenerate()) throw DegeneratePairing();
    Ordering tag;
    if (order == "increasing") {
        tag = Ordering::Increasing;
    } else if (order == "decreasing") {
        tag = Ordering::Decreasing;
    } else if (order == "auto") {
        // the opposite of the input's slope order
        w.tag = Ordering::Decreasing;
        bool dec = isOrdered(cone, w);
        w.tag = Ordering::Increasing;
        bool inc = isOrdered(cone, w);
        if (dec == inc) tag = Ordering::Increasing;
        else tag = dec ? Ordering::Increasing : Ordering::Decreasing;
    } else {
        throw AlgebraError("unknown order '" + order + "' (auto | increasing | decreasing)");
    }
    w.tag = Ordering::Unordered;
    Factorization f = factorize(evaluate(w, cone), tag);
    Json j;
    j["command"] = "factorize";
    j["pairing"] = pairing;
    j["truncation"] = c.truncation;
    j["input"] = io::toJson(w)["factors"];
    j["word"] = io::toJson(f.word);
    j["spectrum"] = io::toJson(f.spectrum);
    j["achievedError"] = 0;
    return j;
}

Json cmdPeriods(const RunConfig& c, cplx u) {
    SWModel m = c.swModel();
    PeriodFrame f = periods(m, u, c.continuation());
    Json j;
    j["command"] = "periods";
    j["lambda"] = m.lambda;
    if (m.group == Group::SU3) j["reV"] = m.reV;
    j.update(io::toJson(f));
    j["maxResidue"] = residueCheck(m, u);
    return j;
}

Json cmdWall(const RunConfig& c, const Charge& g1, const Charge& g2) {
    SWModel m = c.swModel();
    WallTrace t = wallFirstKind(m, g1, g2, c.window, c.tolWall);
    Json j;
    j["command"] = "wall";
    j["model"] = m.name();
    j["g1"] = io::toJson(g1);
    j["g2"] = io::toJson(g2);
    j["window"] = Json{{"reMin", c.window.reMin}, {"reMax", c.window.reMax}, {"imMin", c.window.imMin},
                       {"imMax", c.window.imMax}, {"nx", c.window.nx}, {"ny", c.window.ny}};
    j.update(io::toJson(t));
    return j;
}

Json cmdTree(const RunConfig& c, const Charge& g, cplx at) {
    SWModel m = c.swModel();
    PeriodFrame f = periods(m, at, c.continuation());
    DTResult r = dtInvariant(f, g, c.treeOptions());
    Json j;
    j["command"] = "tree";
    j["model"] = m.name();
    j["basepoint"] = io::toJson(at);
    j["charge"] = io::toJson(g);
    j.update(io::toJson(r));
    j["achievedError"] = f.achievedError;
    return j;
}

Json cmdSpectrum(const RunConfig& c, cplx at, int maxDegree) {
    if (maxDegree < 1) throw AlgebraError("max degree must be at least 1");
    SWModel m = c.swModel();
    TreeOptions o = c.treeOptions();
    ChamberSpectrum s = chamberSpectrum(m, at, maxDegree, o);
    Json j;
    j["command"] = "spectrum";
    j["model"] = m.name();
    j["maxDegree"] = maxDegree;
    j["depthMax"] = o.depthMax;
    j["Mmax"] = o.flow.Mmax;
    j.update(io::toJson(s));
    return j;
}

} // namespace wcs::cli
