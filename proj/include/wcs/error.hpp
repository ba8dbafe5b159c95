#pragma once

#include <stdexcept>
#include <string>

namespace wcs {

// Failure classes map one-to-one onto CLI exit codes.
enum class ErrorClass { Algebraic = 2, Geometric = 3, Precision = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass c, const std::string& msg) : std::runtime_error(msg), cls_(c) {}
    ErrorClass errorClass() const noexcept { return cls_; }
    int exitCode() const noexcept { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

struct AlgebraError : Error {
    explicit AlgebraError(const std::string& m) : Error(ErrorClass::Algebraic, m) {}
};

struct LatticeMismatch : AlgebraError {
    LatticeMismatch() : AlgebraError("lattice mismatch: charge dimensions differ") {}
};
struct InvalidCharge : AlgebraError {
    explicit InvalidCharge(const std::string& m = "invalid charge: zero vector") : AlgebraError(m) {}
};
struct OutsideCone : AlgebraError {
    explicit OutsideCone(const std::string& m = "charge outside cone") : AlgebraError(m) {}
};
struct ConeMismatch : AlgebraError {
    ConeMismatch() : AlgebraError("cone or truncation mismatch") {}
};
struct DegeneratePairing : AlgebraError {
    DegeneratePairing() : AlgebraError("degenerate pairing: <gen1,gen2> = 0") {}
};
struct MalformedElement : AlgebraError {
    explicit MalformedElement(const std::string& m = "malformed group element") : AlgebraError(m) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& m) : Error(ErrorClass::Geometric, m) {}
};

struct CollidingRoots : GeometryError {
    CollidingRoots(double gap, const std::string& where)
        : GeometryError("colliding roots near discriminant (" + where + "), min gap " + std::to_string(gap)),
          minGap(gap) {}
    double minGap;
};

struct ContinuationFailure : GeometryError {
    explicit ContinuationFailure(const std::string& m) : GeometryError("continuation failure: " + m) {}
};

struct ChamberMismatch : GeometryError {
    explicit ChamberMismatch(const std::string& m) : GeometryError("chamber misidentification: " + m) {}
};

struct PrecisionError : Error {
    PrecisionError(const std::string& m, double achieved)
        : Error(ErrorClass::Precision, m + " (achieved " + std::to_string(achieved) + ")"), achieved(achieved) {}
    double achieved;
};

} // namespace wcs
