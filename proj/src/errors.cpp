#include "svgnum/errors.hpp"

namespace svgnum {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::MalformedPath: return "MalformedPath";
    case Errc::UnsupportedFeature: return "UnsupportedFeature";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::DegenerateDocument: return "DegenerateDocument";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::InvalidOpcode: return "InvalidOpcode";
    case Errc::UnknownOpcode: return "UnknownOpcode";
    case Errc::SignalingValue: return "SignalingValue";
    case Errc::StrayNaN: return "StrayNaN";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::BadFloatKind: return "BadFloatKind";
    case Errc::TruncatedBlock: return "TruncatedBlock";
    case Errc::ValueOverflow: return "ValueOverflow";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyIndexSet: return "EmptyIndexSet";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::Divergence: return "Divergence";
    case Errc::RenderFailure: return "RenderFailure";
    case Errc::TooSmall: return "TooSmall";
    case Errc::MissingComponent: return "MissingComponent";
    case Errc::GroupTooSmall: return "GroupTooSmall";
    case Errc::IoError: return "IoError";
    case Errc::BadConfig: return "BadConfig";
    }
    return "UnknownError";
}

Error::Error(Errc code, const std::string& message, std::size_t offset)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      offset_(offset) {}

void fail(Errc code, const std::string& message, std::size_t offset) {
    throw Error(code, message, offset);
}

} // namespace svgnum
