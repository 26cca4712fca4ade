#include "svgnum/dual_sequence.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "svgnum/errors.hpp"
#include "svgnum/numeric.hpp"

namespace svgnum {

DualSequence decompose(const SvgDocument& doc, double canvas_bound) {
    struct TokenSink : CanonicalSink {
        DualSequence seq;
        void structure(std::string_view t) override {
            seq.tokens.push_back(Token::sym(std::string(t)));
        }
        void opcode(char op) override {
            seq.tokens.push_back(Token::sym(std::string(1, op)));
        }
        void number(double v) override {
            seq.tokens.push_back(Token::num());
            seq.floats.push_back(v / seq.canvas_bound);
            seq.raw_values.push_back(v);
        }
    } sink;
    validate(doc);
    sink.seq.canvas_bound = canvas_bound;
    emit_canonical(doc, sink);
    return sink.seq;
}

std::string consolidate(const DualSequence& seq, int precision) {
    const double m = seq.canvas_bound;
    CanonicalText text;
    std::size_t next = 0;
    for (const auto& tok : seq.tokens) {
        if (!tok.is_num) {
            text.append_structure(tok.text);
            continue;
        }
        if (next >= seq.floats.size())
            fail(Errc::CountMismatch,
                 "placeholder count exceeds float count (" +
                     std::to_string(seq.floats.size()) + " floats)");
        double n = m * seq.floats[next++];
        n = std::clamp(n, -m, m); // canvas bound, before rounding
        text.append_atom(format_number(n, precision));
    }
    if (next != seq.floats.size())
        fail(Errc::CountMismatch,
             std::to_string(seq.floats.size() - next) + " floats left over");
    return text.take();
}

std::string to_jsonl(const DualSequence& seq) {
    nlohmann::json j;
    j["tokens"] = nlohmann::json::array();
    for (const auto& tok : seq.tokens)
        j["tokens"].push_back(tok.is_num ? "[NUM]" : tok.text);
    j["floats"] = seq.floats;
    j["M"] = seq.canvas_bound;
    return j.dump();
}

DualSequence from_jsonl(std::string_view line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("tokens") ||
        !j.contains("floats") || !j.contains("M"))
        fail(Errc::MalformedDocument, "not a dual-sequence record");
    DualSequence seq;
    seq.canvas_bound = j.at("M").get<double>();
    if (!(seq.canvas_bound > 0))
        fail(Errc::MalformedDocument, "M must be positive");
    for (const auto& t : j.at("tokens")) {
        std::string s = t.get<std::string>();
        if (s == "[NUM]")
            seq.tokens.push_back(Token::num());
        else
            seq.tokens.push_back(Token::sym(std::move(s)));
    }
    seq.floats = j.at("floats").get<std::vector<double>>();
    return seq;
}

const char* strategy_name(TokenizerStrategy s) {
    switch (s) {
    case TokenizerStrategy::DigitLevel: return "digit-level";
    case TokenizerStrategy::NumberAware: return "number-aware";
    case TokenizerStrategy::Placeholder: return "placeholder";
    }
    return "?";
}

namespace {

bool is_sep_char(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',';
}

// Token pieces of a number literal under the number-aware rule: the sign
// sticks to the integer part; "123.456" -> "123" "." "456" (3 pieces), an
// integer is 1 piece, a trailing exponent is 1 more.
std::size_t number_aware_pieces(std::string_view lit) {
    std::size_t i = 0;
    if (i < lit.size() && (lit[i] == '+' || lit[i] == '-')) ++i;
    std::size_t int_digits = 0;
    while (i < lit.size() && lit[i] >= '0' && lit[i] <= '9') { ++i; ++int_digits; }

    std::size_t pieces = int_digits ? 1 : 0;
    if (i < lit.size() && lit[i] == '.') {
        pieces += 1; // the dot (carries the sign for ".5"-style literals)
        ++i;
        std::size_t frac_digits = 0;
        while (i < lit.size() && lit[i] >= '0' && lit[i] <= '9') { ++i; ++frac_digits; }
        if (frac_digits) pieces += 1;
    }
    if (i < lit.size()) pieces += 1; // exponent suffix as one piece
    return pieces;
}

} // namespace

std::size_t token_stats(std::string_view d, TokenizerStrategy strategy) {
    std::size_t count = 0;
    std::size_t i = 0;
    bool after_opcode = false;
    while (i < d.size()) {
        char c = d[i];
        if (is_sep_char(c)) {
            std::size_t run = 0;
            while (i < d.size() && is_sep_char(d[i])) { ++i; ++run; }
            if (after_opcode) { after_opcode = false; continue; } // absorbed
            switch (strategy) {
            case TokenizerStrategy::DigitLevel: count += run; break;
            case TokenizerStrategy::NumberAware: count += 1; break;
            case TokenizerStrategy::Placeholder: break;
            }
            continue;
        }
        after_opcode = false;
        if (auto num = scan_number(d, i)) {
            std::string_view lit = d.substr(i, num->end - i);
            switch (strategy) {
            case TokenizerStrategy::DigitLevel: count += lit.size(); break;
            case TokenizerStrategy::NumberAware: count += number_aware_pieces(lit); break;
            case TokenizerStrategy::Placeholder: count += 1; break;
            }
            i = num->end;
            continue;
        }
        // anything else (opcode letters in particular) is one symbol token
        count += 1;
        ++i;
        after_opcode = true;
    }
    return count;
}

std::size_t token_stats(const SvgDocument& doc, TokenizerStrategy strategy, int precision) {
    std::size_t total = 0;
    for (const auto& el : doc.paths)
        total += token_stats(serialize_path(el.commands, precision), strategy);
    return total;
}

double compression_ratio(const std::vector<SvgDocument>& corpus,
                         TokenizerStrategy a, TokenizerStrategy b, int precision) {
    if (corpus.empty())
        fail(Errc::EmptyIndexSet, "compression_ratio over an empty corpus");
    std::size_t ta = 0, tb = 0;
    for (const auto& doc : corpus) {
        ta += token_stats(doc, a, precision);
        tb += token_stats(doc, b, precision);
    }
    return static_cast<double>(ta) / static_cast<double>(tb);
}

} // namespace svgnum
