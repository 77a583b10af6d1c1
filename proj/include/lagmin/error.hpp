#pragma once

#include <stdexcept>
#include <string>

namespace lagmin {

enum class ErrorKind {
    ZeroNormal,
    SingularPoint,
    DegenerateFit,
    EmptyIntersection,
    UnknownName,
    DomainMismatch,
    DegenerateFamily,
    TooFew,
    NotLinearOnCircle,
    DependentCircles,
    NoCommonPoint,
    PencilDegeneracy,
    BadFit,
    DegenerateCone,
    NonImmersed,
    IdealImage,
    ZeroGaussCurvature,
    ProvenanceMismatch,
    Parse,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::ZeroNormal: return "ZeroNormal";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::EmptyIntersection: return "EmptyIntersection";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::TooFew: return "TooFew";
    case ErrorKind::NotLinearOnCircle: return "NotLinearOnCircle";
    case ErrorKind::DependentCircles: return "DependentCircles";
    case ErrorKind::NoCommonPoint: return "NoCommonPoint";
    case ErrorKind::PencilDegeneracy: return "PencilDegeneracy";
    case ErrorKind::BadFit: return "BadFit";
    case ErrorKind::DegenerateCone: return "DegenerateCone";
    case ErrorKind::NonImmersed: return "NonImmersed";
    case ErrorKind::IdealImage: return "IdealImage";
    case ErrorKind::ZeroGaussCurvature: return "ZeroGaussCurvature";
    case ErrorKind::ProvenanceMismatch: return "ProvenanceMismatch";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(kind_name(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace lagmin
