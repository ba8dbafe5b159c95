#pragma once

#include "wcs/io/serialize.hpp"

#include <string>

namespace wcs::cli {

using io::Json;

struct RunConfig {
    std::string model = "su2";
    double lambda = 1.0;
    double reV = 10.0;
    int truncation = 12;
    double tolPhase = 1e-10;
    double tolWall = 1e-9;
    double tolDelta = 1e-6;
    double tolQuad = 1e-13;
    Window window{};
    std::string format = "json";
    int depthMax = 3;
    int mmax = 6;
    int maxFlows = 5000;

    void validate() const;
    SWModel swModel() const;
    TreeOptions treeOptions() const;
    ContinuationOptions continuation() const;
};

// Parsers for the textual arguments; malformed input raises AlgebraError.
FactorWord parseWord(const std::string& word);
Charge parseCharge(const std::string& s);
cplx parsePoint(const std::string& s);
Window parseWindow(const std::string& s);

// Named basepoints: su2 strong / weak, su3-slice near (close to the first
// pair of discriminant points).
cplx regionPoint(const SWModel& m, const std::string& region);

Json cmdFactorize(const RunConfig& c, const std::string& word, long pairing, const std::string& order);
Json cmdPeriods(const RunConfig& c, cplx u);
Json cmdWall(const RunConfig& c, const Charge& g1, const Charge& g2);
Json cmdTree(const RunConfig& c, const Charge& g, cplx at);
Json cmdSpectrum(const RunConfig& c, cplx at, int maxDegree);

// Command output in the configured format, newline terminated.
std::string render(const RunConfig& c, const std::string& command, const Json& doc);

} // namespace wcs::cli
