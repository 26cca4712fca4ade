#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svgnum/path.hpp"

namespace svgnum {

struct PathElement {
    std::vector<PathCommand> commands;
    std::optional<std::string> fill;
    std::optional<std::string> stroke;
    std::optional<double> stroke_width;
    std::optional<std::string> fill_rule; // "nonzero" | "evenodd"

    bool operator==(const PathElement&) const = default;
};

struct SvgDocument {
    double width = 0;
    double height = 0;
    std::array<double, 4> view_box{}; // min-x, min-y, width, height
    std::string default_fill = "black";
    std::vector<PathElement> paths;

    bool operator==(const SvgDocument&) const = default;
};

// Throws Error{MalformedDocument} on any invariant violation (viewBox extents
// <= 0, empty path list, path not starting with M/m, bad stroke-width...).
void validate(const SvgDocument& doc);

// Parses the supported dialect: one <svg> root carrying width/height/viewBox/
// fill, containing only <path> children with d/fill/stroke/stroke-width/
// fill-rule. Anything else raises UnsupportedFeature naming the offender;
// structural defects raise MalformedDocument. An XML declaration is skipped
// and xmlns attributes are tolerated (see docs/format.md).
SvgDocument parse_svg(std::string_view text);

// Deterministic canonical form: fixed attribute order, one path per line.
// Byte layout is pinned in docs/format.md.
std::string serialize_svg(const SvgDocument& doc, int precision);

// The canonical serialization, decomposed into typed pieces. Every consumer
// of the canonical byte layout (text serializer, dual-sequence decomposer,
// SVGFloat encoder) walks the same emission so the three stay in lockstep.
class CanonicalSink {
public:
    virtual ~CanonicalSink() = default;
    virtual void structure(std::string_view text) = 0; // no numeric literals
    virtual void opcode(char op) = 0;
    virtual void number(double value) = 0;
};

void emit_canonical(const SvgDocument& doc, CanonicalSink& sink);

// Rebuilds canonical text from emitted pieces: atoms splice literally and a
// single space is inserted exactly where two word-like pieces would merge.
class CanonicalText {
public:
    void append_structure(std::string_view text) { append(text); }
    void append_atom(std::string_view text) { append(text); }
    const std::string& str() const { return out_; }
    std::string take() { return std::move(out_); }

private:
    void append(std::string_view piece);
    std::string out_;
};

} // namespace svgnum
