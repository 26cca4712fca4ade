#include "svgnum/svgfloat.hpp"

#include <cmath>
#include <cstring>

#include <zlib.h>

#include "svgnum/errors.hpp"
#include "svgnum/numeric.hpp"

namespace svgnum {

namespace {

constexpr char kMagic[4] = {'S', 'V', 'G', 'F'};
constexpr std::uint8_t kVersion = 1;

bool valid_opcode_byte(std::uint32_t b) {
    return b >= 65 && b <= 122 && is_path_opcode(static_cast<char>(b));
}

void write_leb128(std::vector<std::uint8_t>& out, std::uint64_t v) {
    do {
        std::uint8_t byte = v & 0x7F;
        v >>= 7;
        if (v) byte |= 0x80;
        out.push_back(byte);
    } while (v);
}

std::uint64_t read_leb128(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
        if (pos >= in.size() || shift > 28)
            fail(Errc::TruncatedBlock, "malformed block count", pos);
        std::uint8_t byte = in[pos++];
        v |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
        if (!(byte & 0x80)) return v;
        shift += 7;
    }
}

void push_slot(std::vector<std::uint8_t>& out, std::uint32_t bits, FloatKind kind) {
    for (int b = 0; b < slot_width(kind); ++b)
        out.push_back(static_cast<std::uint8_t>((bits >> (8 * b)) & 0xFF));
}

std::uint32_t pull_slot(const std::vector<std::uint8_t>& in, std::size_t pos, FloatKind kind) {
    std::uint32_t bits = 0;
    for (int b = 0; b < slot_width(kind); ++b)
        bits |= static_cast<std::uint32_t>(in[pos + b]) << (8 * b);
    return bits;
}

} // namespace

std::uint32_t nan_box(char opcode, FloatKind kind) {
    if (!valid_opcode_byte(static_cast<unsigned char>(opcode)))
        fail(Errc::InvalidOpcode, std::string("'") + opcode + "' is not a path opcode");
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    (void)bias;
    const std::uint32_t exp_mask = (1u << exp_bits) - 1;
    return (exp_mask << man_bits) | static_cast<std::uint32_t>(opcode);
}

Slot nan_unbox(std::uint32_t bits, FloatKind kind) {
    if (bits_is_nan(bits, kind)) {
        if (bits_sign(bits, kind))
            fail(Errc::StrayNaN, "sign-1 NaN slot is not canonical");
        std::uint32_t payload = bits_mantissa(bits, kind);
        if (!valid_opcode_byte(payload))
            fail(Errc::UnknownOpcode,
                 "NaN payload 0x" + std::to_string(payload) + " is not an opcode");
        return Slot{true, static_cast<char>(payload), 0.0};
    }
    return Slot{false, '\0', bits_to_double(bits, kind)};
}

namespace {

// Collects canonical pieces into alternating ASCII runs and slot blocks.
struct SlotSink : CanonicalSink {
    FloatKind kind;
    std::vector<std::uint8_t> out;
    std::vector<std::uint32_t> block;

    explicit SlotSink(FloatKind k) : kind(k) {}

    void flush_block() {
        if (block.empty()) return;
        out.push_back(0x00);
        write_leb128(out, block.size());
        for (std::uint32_t bits : block) push_slot(out, bits, kind);
        block.clear();
    }

    void structure(std::string_view text) override {
        flush_block();
        out.insert(out.end(), text.begin(), text.end());
    }
    void opcode(char op) override { block.push_back(nan_box(op, kind)); }
    void number(double v) override {
        if (!std::isfinite(v))
            fail(Errc::NonFiniteValue, "cannot encode non-finite value");
        std::uint32_t bits = double_to_bits(v, kind);
        if (bits_is_inf(bits, kind))
            fail(Errc::ValueOverflow,
                 format_number_roundtrip(v) + " exceeds the finite range of the kind");
        block.push_back(bits);
    }
};

} // namespace

std::vector<std::uint8_t> encode(const SvgDocument& doc, FloatKind kind) {
    validate(doc);
    SlotSink sink(kind);
    sink.out.assign(kMagic, kMagic + 4);
    sink.out.push_back(kVersion);
    sink.out.push_back(static_cast<std::uint8_t>(kind));
    emit_canonical(doc, sink);
    sink.flush_block();
    return sink.out;
}

std::string decode_to_text(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 6 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        fail(Errc::BadMagic, "not an SVGFloat stream");
    if (bytes[4] != kVersion)
        fail(Errc::UnsupportedVersion, "version " + std::to_string(bytes[4]));
    if (bytes[5] > 2)
        fail(Errc::BadFloatKind, "kind byte " + std::to_string(bytes[5]));
    const FloatKind kind = static_cast<FloatKind>(bytes[5]);
    const std::size_t width = slot_width(kind);

    CanonicalText text;
    std::string ascii_run;
    std::size_t pos = 6;
    while (pos < bytes.size()) {
        if (bytes[pos] != 0x00) {
            ascii_run.push_back(static_cast<char>(bytes[pos++]));
            continue;
        }
        // A block in a d attribute may hold opcodes; anywhere else every slot
        // must be a plain value.
        const bool path_context =
            ascii_run.size() >= 3 && ascii_run.compare(ascii_run.size() - 3, 3, "d=\"") == 0;
        text.append_structure(ascii_run);
        ascii_run.clear();
        ++pos;
        std::uint64_t count = read_leb128(bytes, pos);
        if (count == 0)
            fail(Errc::TruncatedBlock, "block with zero slots", pos);
        if (count > (bytes.size() - pos) / width)
            fail(Errc::TruncatedBlock, "block extends past end of stream", pos);
        for (std::uint64_t i = 0; i < count; ++i, pos += width) {
            std::uint32_t bits = pull_slot(bytes, pos, kind);
            if (!path_context && bits_is_nan(bits, kind) && !bits_sign(bits, kind))
                fail(Errc::SignalingValue, "NaN slot where a value is required", pos);
            Slot slot = nan_unbox(bits, kind);
            if (slot.is_opcode) {
                text.append_atom(std::string_view(&slot.op, 1));
            } else {
                if (!std::isfinite(slot.value))
                    fail(Errc::NonFiniteValue, "infinite value slot", pos);
                text.append_atom(format_number_roundtrip(slot.value));
            }
        }
    }
    text.append_structure(ascii_run);
    return text.take();
}

SvgDocument decode(const std::vector<std::uint8_t>& bytes) {
    return parse_svg(decode_to_text(bytes));
}

std::size_t deflate_size(const std::string& data) {
    z_stream zs{};
    // windowBits -15: raw DEFLATE (RFC 1951), no zlib/gzip wrapper
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -15, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK)
        fail(Errc::IoError, "deflateInit2 failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    std::vector<unsigned char> buf(deflateBound(&zs, data.size()));
    zs.next_out = buf.data();
    zs.avail_out = static_cast<uInt>(buf.size());
    int rc = deflate(&zs, Z_FINISH);
    std::size_t n = zs.total_out;
    deflateEnd(&zs);
    if (rc != Z_STREAM_END)
        fail(Errc::IoError, "deflate failed");
    return n;
}

FidelityReport fidelity_report(
    const std::vector<SvgDocument>& corpus, FloatKind kind,
    const std::function<double(const SvgDocument&, const SvgDocument&)>& similarity) {
    FidelityReport rep;
    for (const auto& doc : corpus) {
        SvgDocument round = decode(encode(doc, kind));
        rep.per_file.push_back(similarity(doc, round));
        rep.mean_ssim += rep.per_file.back();
    }
    if (!rep.per_file.empty()) rep.mean_ssim /= static_cast<double>(rep.per_file.size());
    return rep;
}

CompressionReport compression_report(const std::vector<SvgDocument>& corpus,
                                     FloatKind kind, int precision) {
    CompressionReport rep;
    std::size_t raw_total = 0, deflate_total = 0, svgf_total = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::string raw = serialize_svg(corpus[i], precision);
        FileCompression fc;
        fc.name = "doc" + std::to_string(i);
        fc.raw_bytes = raw.size();
        fc.deflate_bytes = deflate_size(raw);
        fc.svgf_bytes = encode(corpus[i], kind).size();
        raw_total += fc.raw_bytes;
        deflate_total += fc.deflate_bytes;
        svgf_total += fc.svgf_bytes;
        rep.per_file.push_back(std::move(fc));
    }
    if (svgf_total) {
        rep.vs_raw = static_cast<double>(raw_total) / static_cast<double>(svgf_total);
        rep.vs_deflate = static_cast<double>(deflate_total) / static_cast<double>(svgf_total);
    }
    return rep;
}

} // namespace svgnum
