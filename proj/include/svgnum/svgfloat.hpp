#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "svgnum/document.hpp"
#include "svgnum/float_bits.hpp"

namespace svgnum {

// One decoded slot: either a numeric value or a NaN-boxed path opcode.
struct Slot {
    bool is_opcode = false;
    char op = '\0';
    double value = 0.0;
};

// NaN pattern carrying `opcode` in its mantissa: exponent all ones, sign 0,
// mantissa = the opcode's ASCII byte. Throws Error{InvalidOpcode} for
// characters outside the path-opcode set.
std::uint32_t nan_box(char opcode, FloatKind kind);

// Inverse of nan_box extended to the whole slot domain. Non-NaN patterns
// decode as values (infinities included; callers reject them where finiteness
// is required). Throws UnknownOpcode for NaNs with unrecognized payloads and
// StrayNaN for sign-1 NaNs.
Slot nan_unbox(std::uint32_t bits, FloatKind kind);

// Serializes the document into the SVGFloat container: 6-byte header
// ("SVGF", version 1, kind byte), then alternating ASCII runs and binary
// blocks (0x00 sentinel, LEB128 slot count, fixed-width little-endian
// slots). Layout is pinned in docs/svgfloat.md.
// Throws NonFiniteValue / ValueOverflow for values the kind cannot hold.
std::vector<std::uint8_t> encode(const SvgDocument& doc, FloatKind kind);

// Reads an SVGFloat byte stream back into a document. All failure modes are
// typed: BadMagic, UnsupportedVersion, BadFloatKind, TruncatedBlock,
// UnknownOpcode, StrayNaN, SignalingValue, NonFiniteValue, plus the document
// errors of parse_svg for streams whose ASCII skeleton is not the dialect.
SvgDocument decode(const std::vector<std::uint8_t>& bytes);

// Intermediate text form: canonical SVG with every slot spliced back in
// (shortest round-trip number formatting). decode() = parse_svg of this.
std::string decode_to_text(const std::vector<std::uint8_t>& bytes);

struct FileCompression {
    std::string name;
    std::size_t raw_bytes = 0;     // canonical ASCII serialization
    std::size_t deflate_bytes = 0; // DEFLATE of the canonical ASCII, default level
    std::size_t svgf_bytes = 0;
};

struct CompressionReport {
    double vs_raw = 0.0;     // sum(raw) / sum(svgf)
    double vs_deflate = 0.0; // sum(deflate) / sum(svgf)
    std::vector<FileCompression> per_file;
};

CompressionReport compression_report(const std::vector<SvgDocument>& corpus,
                                     FloatKind kind, int precision);

// Raw-DEFLATE (RFC 1951) size of a byte string at the default level.
std::size_t deflate_size(const std::string& data);

struct FidelityReport {
    double mean_ssim = 0.0;
    std::vector<double> per_file;
};

// Perceptual loss of the encode/decode round trip: `similarity` scores the
// renders of (original, decode(encode(original, kind))).
FidelityReport fidelity_report(
    const std::vector<SvgDocument>& corpus, FloatKind kind,
    const std::function<double(const SvgDocument&, const SvgDocument&)>& similarity);

} // namespace svgnum
