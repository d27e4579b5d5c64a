#pragma once
// Error type shared by every routebayes module.
//
// All failures are reported by throwing routebayes::Error. The code says what
// went wrong; index/value/path carry the location when one exists.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace routebayes {

enum class Errc : std::uint8_t {
    // probability core
    EmptyVector,
    NegativeEntry,
    NonFiniteEntry,
    SumOutOfTolerance,
    LikelihoodOutOfRange,
    LengthMismatch,
    ZeroEvidence,
    EmptyHypothesisSet,
    EmptyHypothesisId,
    DuplicateHypothesisId,
    // weight optimizer
    InvalidBounds,
    InfeasibleConstraints,
    // route economics
    InvalidLoadFactor,
    NonpositiveUtilization,
    InvalidArgument,
    RangeInfeasible,
    DegenerateAnchors,
    InvalidEpsilon,
    // network planner
    UnknownFleet,
    DuplicateCandidate,
    // revenue management
    InvalidDemandModel,
    InvalidProblem,
    InvalidPolicy,
    // scenario io
    ParseError,
    SchemaVersionUnsupported,
    ValidationError,
    DanglingReference,
    IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::EmptyVector: return "EmptyVector";
        case Errc::NegativeEntry: return "NegativeEntry";
        case Errc::NonFiniteEntry: return "NonFiniteEntry";
        case Errc::SumOutOfTolerance: return "SumOutOfTolerance";
        case Errc::LikelihoodOutOfRange: return "LikelihoodOutOfRange";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ZeroEvidence: return "ZeroEvidence";
        case Errc::EmptyHypothesisSet: return "EmptyHypothesisSet";
        case Errc::EmptyHypothesisId: return "EmptyHypothesisId";
        case Errc::DuplicateHypothesisId: return "DuplicateHypothesisId";
        case Errc::InvalidBounds: return "InvalidBounds";
        case Errc::InfeasibleConstraints: return "InfeasibleConstraints";
        case Errc::InvalidLoadFactor: return "InvalidLoadFactor";
        case Errc::NonpositiveUtilization: return "NonpositiveUtilization";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::RangeInfeasible: return "RangeInfeasible";
        case Errc::DegenerateAnchors: return "DegenerateAnchors";
        case Errc::InvalidEpsilon: return "InvalidEpsilon";
        case Errc::UnknownFleet: return "UnknownFleet";
        case Errc::DuplicateCandidate: return "DuplicateCandidate";
        case Errc::InvalidDemandModel: return "InvalidDemandModel";
        case Errc::InvalidProblem: return "InvalidProblem";
        case Errc::InvalidPolicy: return "InvalidPolicy";
        case Errc::ParseError: return "ParseError";
        case Errc::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
        case Errc::ValidationError: return "ValidationError";
        case Errc::DanglingReference: return "DanglingReference";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

    Errc code() const noexcept { return code_; }
    // The message without the error-code prefix.
    const std::string& message() const noexcept { return message_; }

    // Offending element index, when the error concerns one entry of a vector.
    std::optional<std::size_t> index() const noexcept { return index_; }
    // Offending value (e.g. the out-of-tolerance sum).
    std::optional<double> value() const noexcept { return value_; }
    // Field path inside a scenario document, e.g. "routes[2].distance_km".
    const std::string& path() const noexcept { return path_; }

    Error& at_index(std::size_t i) { index_ = i; return *this; }
    Error& with_value(double v) { value_ = v; return *this; }
    Error& at_path(std::string p) { path_ = std::move(p); return *this; }

private:
    Errc code_;
    std::string message_;
    std::optional<std::size_t> index_;
    std::optional<double> value_;
    std::string path_;
};

}  // namespace routebayes
