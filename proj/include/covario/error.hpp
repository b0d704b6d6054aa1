#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covario {

enum class ErrorKind {
    InvalidPolygon,
    NotConvex,
    NotC2Plus,
    PolygonNotSmooth,
    DegenerateZonogon,
    InvalidFamilyParams,
    InvalidSegment,
    FitFailed,
    PrecisionLoss,
    NewtonDiverged,
    ValidationFailed,
    UnmatchedZero,
    InvalidCap,
    Inconclusive,
    InvalidArgument,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. The kind is stable and machine-checkable; the
/// message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::NotC2Plus: return "NotC2Plus";
    case ErrorKind::PolygonNotSmooth: return "PolygonNotSmooth";
    case ErrorKind::DegenerateZonogon: return "DegenerateZonogon";
    case ErrorKind::InvalidFamilyParams: return "InvalidFamilyParams";
    case ErrorKind::InvalidSegment: return "InvalidSegment";
    case ErrorKind::FitFailed: return "FitFailed";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::UnmatchedZero: return "UnmatchedZero";
    case ErrorKind::InvalidCap: return "InvalidCap";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace covario
