#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svgnum {

enum class Errc {
    // svg text layer
    MalformedPath,
    UnsupportedFeature,
    MalformedDocument,
    // preprocess
    DegenerateDocument,
    // dual sequence
    CountMismatch,
    // svgfloat codec
    InvalidOpcode,
    UnknownOpcode,
    SignalingValue,
    StrayNaN,
    BadMagic,
    UnsupportedVersion,
    BadFloatKind,
    TruncatedBlock,
    ValueOverflow,
    NonFiniteValue,
    // number codec
    DimensionMismatch,
    EmptyIndexSet,
    IndexOutOfRange,
    Divergence,
    // raster & metrics
    RenderFailure,
    TooSmall,
    MissingComponent,
    GroupTooSmall,
    // io / config
    IoError,
    BadConfig,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Error(Errc code, const std::string& message, std::size_t offset = npos);

    Errc code() const { return code_; }

    // Byte offset into the offending input, when known.
    std::size_t offset() const { return offset_; }

private:
    Errc code_;
    std::size_t offset_;
};

[[noreturn]] void fail(Errc code, const std::string& message,
                       std::size_t offset = Error::npos);

} // namespace svgnum
