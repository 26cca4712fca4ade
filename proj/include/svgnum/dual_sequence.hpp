#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "svgnum/document.hpp"

namespace svgnum {

// Symbolic token: either a literal text fragment of the canonical
// serialization or the numeric placeholder.
struct Token {
    bool is_num = false;
    std::string text; // empty for placeholders

    static Token num() { return Token{true, {}}; }
    static Token sym(std::string t) { return Token{false, std::move(t)}; }

    bool operator==(const Token&) const = default;
};

// The two parallel streams: symbols with placeholders, and the replaced
// values normalized by the canvas bound M (v = n / M).
struct DualSequence {
    std::vector<Token> tokens;
    std::vector<double> floats;     // normalized values, one per placeholder
    double canvas_bound = 512.0;    // M
    std::vector<double> raw_values; // original user-unit values (may be empty)
};

// Splits the document's canonical serialization into the dual streams.
// Placeholder count always equals the float count.
DualSequence decompose(const SvgDocument& doc, double canvas_bound);

// Rebuilds the SVG string: every placeholder takes the next float, which is
// de-normalized (n = M*v), clipped to [-M, M], then rounded to `precision`
// decimals. Throws Error{CountMismatch} when the two streams disagree.
std::string consolidate(const DualSequence& seq, int precision);

// JSON-lines interchange: {"tokens": [...], "floats": [...], "M": ...} with
// placeholders spelled as the literal string "[NUM]".
std::string to_jsonl(const DualSequence& seq);
DualSequence from_jsonl(std::string_view line);

enum class TokenizerStrategy { DigitLevel, NumberAware, Placeholder };

const char* strategy_name(TokenizerStrategy s);

// Token count of a path-data string under a strategy. The rules mirror the
// worked tokenizer comparison: a separator run directly after an opcode is
// absorbed into it; other separator runs count once per character
// (DigitLevel) or once per run (NumberAware) and never (Placeholder).
std::size_t token_stats(std::string_view path_data, TokenizerStrategy strategy);

// Document-level count: sum over the canonical path-data text of every path.
std::size_t token_stats(const SvgDocument& doc, TokenizerStrategy strategy, int precision);

// Total tokens of `a` across the corpus divided by total tokens of `b`.
double compression_ratio(const std::vector<SvgDocument>& corpus,
                         TokenizerStrategy a, TokenizerStrategy b, int precision);

} // namespace svgnum
