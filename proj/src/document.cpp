#include "svgnum/document.hpp"

#include <cctype>
#include <cmath>

#include "svgnum/errors.hpp"
#include "svgnum/numeric.hpp"

namespace svgnum {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_word_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
           (c >= 'A' && c <= 'Z') || c == '.';
}

bool is_word_start(char c) { return is_word_char(c) || c == '+' || c == '-'; }

// --- dialect parser ------------------------------------------------------

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    bool starts_with(std::string_view s) const { return text.substr(pos, s.size()) == s; }

    void skip_ws() {
        while (!eof() && is_ws(peek())) ++pos;
    }
};

struct Attribute {
    std::string name;
    std::string value;
    std::size_t at;
};

std::string parse_name(Cursor& c) {
    std::size_t start = c.pos;
    while (!c.eof()) {
        char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == ':' || ch == '_')
            ++c.pos;
        else
            break;
    }
    if (c.pos == start)
        fail(Errc::MalformedDocument, "expected a name", start);
    return std::string(c.text.substr(start, c.pos - start));
}

std::vector<Attribute> parse_attributes(Cursor& c) {
    std::vector<Attribute> attrs;
    for (;;) {
        c.skip_ws();
        if (c.eof())
            fail(Errc::MalformedDocument, "unterminated tag", c.pos);
        char ch = c.peek();
        if (ch == '>' || ch == '/' || ch == '?') break;
        std::size_t at = c.pos;
        std::string name = parse_name(c);
        c.skip_ws();
        if (c.eof() || c.peek() != '=')
            fail(Errc::MalformedDocument, "expected '=' after attribute " + name, c.pos);
        ++c.pos;
        c.skip_ws();
        if (c.eof() || (c.peek() != '"' && c.peek() != '\''))
            fail(Errc::MalformedDocument, "expected quoted value for " + name, c.pos);
        char quote = c.peek();
        ++c.pos;
        std::size_t vstart = c.pos;
        while (!c.eof() && c.peek() != quote) ++c.pos;
        if (c.eof())
            fail(Errc::MalformedDocument, "unterminated attribute value for " + name, vstart);
        attrs.push_back({std::move(name), std::string(c.text.substr(vstart, c.pos - vstart)), at});
        ++c.pos;
    }
    return attrs;
}

double parse_numeric_attr(const Attribute& a) {
    auto n = scan_number(a.value, 0);
    if (!n || n->end != a.value.size())
        fail(Errc::MalformedDocument,
             "attribute " + a.name + " is not a plain number: \"" + a.value + "\"", a.at);
    return n->value;
}

std::array<double, 4> parse_view_box(const Attribute& a) {
    std::array<double, 4> vb{};
    std::size_t i = 0;
    for (int k = 0; k < 4; ++k) {
        while (i < a.value.size() && (is_ws(a.value[i]) || a.value[i] == ',')) ++i;
        auto n = scan_number(a.value, i);
        if (!n)
            fail(Errc::MalformedDocument, "viewBox needs 4 numbers: \"" + a.value + "\"", a.at);
        vb[k] = n->value;
        i = n->end;
    }
    while (i < a.value.size() && (is_ws(a.value[i]) || a.value[i] == ',')) ++i;
    if (i != a.value.size())
        fail(Errc::MalformedDocument, "trailing content in viewBox", a.at);
    return vb;
}

PathElement parse_path_element(const std::vector<Attribute>& attrs, std::size_t tag_at) {
    PathElement el;
    bool have_d = false;
    for (const auto& a : attrs) {
        if (a.name == "d") {
            el.commands = parse_path(a.value);
            have_d = true;
        } else if (a.name == "fill") {
            el.fill = a.value;
        } else if (a.name == "stroke") {
            el.stroke = a.value;
        } else if (a.name == "stroke-width") {
            el.stroke_width = parse_numeric_attr(a);
        } else if (a.name == "fill-rule") {
            if (a.value != "nonzero" && a.value != "evenodd")
                fail(Errc::MalformedDocument, "fill-rule must be nonzero or evenodd", a.at);
            el.fill_rule = a.value;
        } else {
            fail(Errc::UnsupportedFeature, "path attribute '" + a.name + "'", a.at);
        }
    }
    if (!have_d)
        fail(Errc::MalformedDocument, "path element without d attribute", tag_at);
    return el;
}

} // namespace

void validate(const SvgDocument& doc) {
    if (!(doc.view_box[2] > 0) || !(doc.view_box[3] > 0))
        fail(Errc::MalformedDocument, "viewBox width and height must be > 0");
    if (doc.paths.empty())
        fail(Errc::MalformedDocument, "document has no paths");
    for (double v : {doc.width, doc.height, doc.view_box[0], doc.view_box[1]})
        if (!std::isfinite(v))
            fail(Errc::MalformedDocument, "non-finite document numeric");
    if (doc.default_fill.empty())
        fail(Errc::MalformedDocument, "empty fill");
    for (const auto& el : doc.paths) {
        if (el.commands.empty())
            fail(Errc::MalformedDocument, "path with empty command list");
        if (el.commands.front().op != 'M' && el.commands.front().op != 'm')
            fail(Errc::MalformedDocument, "path data must begin with M or m");
        validate_commands(el.commands);
        if (el.stroke_width && (!(*el.stroke_width >= 0) || !std::isfinite(*el.stroke_width)))
            fail(Errc::MalformedDocument, "stroke-width must be >= 0");
        if (el.fill_rule && *el.fill_rule != "nonzero" && *el.fill_rule != "evenodd")
            fail(Errc::MalformedDocument, "fill-rule must be nonzero or evenodd");
    }
}

SvgDocument parse_svg(std::string_view text) {
    Cursor c{text};
    if (c.starts_with("\xEF\xBB\xBF")) c.pos += 3; // UTF-8 BOM

    c.skip_ws();
    if (c.starts_with("<?xml")) { // declaration carries no content; skip it
        std::size_t end = text.find("?>", c.pos);
        if (end == std::string_view::npos)
            fail(Errc::MalformedDocument, "unterminated XML declaration", c.pos);
        c.pos = end + 2;
        c.skip_ws();
    }
    if (c.starts_with("<!--"))
        fail(Errc::UnsupportedFeature, "XML comment", c.pos);
    if (c.starts_with("<!DOCTYPE"))
        fail(Errc::UnsupportedFeature, "DOCTYPE declaration", c.pos);
    if (!c.starts_with("<svg"))
        fail(Errc::MalformedDocument, "expected <svg> root", c.pos);
    c.pos += 4;

    SvgDocument doc;
    std::optional<double> width, height;
    std::optional<std::array<double, 4>> view_box;

    for (const auto& a : parse_attributes(c)) {
        if (a.name == "width") width = parse_numeric_attr(a);
        else if (a.name == "height") height = parse_numeric_attr(a);
        else if (a.name == "viewBox") view_box = parse_view_box(a);
        else if (a.name == "fill") doc.default_fill = a.value;
        else if (a.name == "xmlns" || a.name.rfind("xmlns:", 0) == 0) continue;
        else fail(Errc::UnsupportedFeature, "svg attribute '" + a.name + "'", a.at);
    }
    if (c.eof() || c.peek() != '>')
        fail(Errc::MalformedDocument, "expected '>' to close <svg> tag", c.pos);
    ++c.pos;

    if (view_box) {
        doc.view_box = *view_box;
    } else if (width && height) {
        doc.view_box = {0, 0, *width, *height};
    } else {
        fail(Errc::MalformedDocument, "svg needs a viewBox or width+height");
    }
    doc.width = width.value_or(doc.view_box[2]);
    doc.height = height.value_or(doc.view_box[3]);

    // children: only <path>, until </svg>
    for (;;) {
        c.skip_ws();
        if (c.eof())
            fail(Errc::MalformedDocument, "missing </svg>", c.pos);
        if (c.starts_with("</svg")) {
            c.pos += 5;
            c.skip_ws();
            if (c.eof() || c.peek() != '>')
                fail(Errc::MalformedDocument, "malformed </svg>", c.pos);
            ++c.pos;
            break;
        }
        if (c.starts_with("<!--"))
            fail(Errc::UnsupportedFeature, "XML comment", c.pos);
        if (c.peek() != '<')
            fail(Errc::MalformedDocument, "unexpected text content", c.pos);
        std::size_t tag_at = c.pos;
        ++c.pos;
        std::string name = parse_name(c);
        if (name != "path")
            fail(Errc::UnsupportedFeature, "element <" + name + ">", tag_at);
        auto attrs = parse_attributes(c);
        if (c.starts_with("/>")) {
            c.pos += 2;
        } else if (c.peek() == '>') {
            ++c.pos;
            c.skip_ws();
            if (!c.starts_with("</path"))
                fail(Errc::MalformedDocument, "path element must be empty", c.pos);
            c.pos += 6;
            c.skip_ws();
            if (c.eof() || c.peek() != '>')
                fail(Errc::MalformedDocument, "malformed </path>", c.pos);
            ++c.pos;
        } else {
            fail(Errc::MalformedDocument, "malformed path tag", c.pos);
        }
        doc.paths.push_back(parse_path_element(attrs, tag_at));
    }
    c.skip_ws();
    if (!c.eof())
        fail(Errc::MalformedDocument, "trailing content after </svg>", c.pos);

    validate(doc);
    return doc;
}

void emit_canonical(const SvgDocument& doc, CanonicalSink& sink) {
    sink.structure("<svg width=\"");
    sink.number(doc.width);
    sink.structure("\" height=\"");
    sink.number(doc.height);
    sink.structure("\" viewBox=\"");
    for (double v : doc.view_box) sink.number(v);
    sink.structure("\" fill=\"" + doc.default_fill + "\">\n");
    for (const auto& el : doc.paths) {
        sink.structure("<path d=\"");
        for (const auto& cmd : el.commands) {
            sink.opcode(cmd.op);
            for (double p : cmd.params) sink.number(p);
        }
        sink.structure("\"");
        if (el.fill) sink.structure(" fill=\"" + *el.fill + "\"");
        if (el.stroke) sink.structure(" stroke=\"" + *el.stroke + "\"");
        if (el.stroke_width) {
            sink.structure(" stroke-width=\"");
            sink.number(*el.stroke_width);
            sink.structure("\"");
        }
        if (el.fill_rule) sink.structure(" fill-rule=\"" + *el.fill_rule + "\"");
        sink.structure("/>\n");
    }
    sink.structure("</svg>\n");
}

void CanonicalText::append(std::string_view piece) {
    if (piece.empty()) return;
    if (!out_.empty() && is_word_char(out_.back()) && is_word_start(piece.front()))
        out_.push_back(' ');
    out_.append(piece);
}

std::string serialize_svg(const SvgDocument& doc, int precision) {
    validate(doc);
    struct TextSink : CanonicalSink {
        CanonicalText text;
        int precision;
        explicit TextSink(int p) : precision(p) {}
        void structure(std::string_view t) override { text.append_structure(t); }
        void opcode(char op) override { text.append_atom(std::string_view(&op, 1)); }
        void number(double v) override { text.append_atom(format_number(v, precision)); }
    } sink(precision);
    emit_canonical(doc, sink);
    return sink.text.take();
}

} // namespace svgnum
