#include <cmath>

#include <doctest.h>

#include "svgnum/dual_sequence.hpp"
#include "svgnum/errors.hpp"
#include "svgnum/number_codec.hpp"
#include "svgnum/preprocess.hpp"
#include "test_support.hpp"

using namespace svgnum;

namespace {

SvgDocument single_path_doc(const std::string& d) {
    SvgDocument doc;
    doc.width = doc.height = 512;
    doc.view_box = {0, 0, 512, 512};
    doc.paths.push_back({parse_path(d), {}, {}, {}, {}});
    return doc;
}

// tokens contributed by the d attribute only
std::vector<Token> path_tokens(const DualSequence& seq) {
    std::vector<Token> out;
    bool in_d = false;
    for (const auto& t : seq.tokens) {
        if (!t.is_num && t.text.find("d=\"") != std::string::npos) {
            in_d = true;
            continue;
        }
        if (in_d && !t.is_num && t.text.find('"') != std::string::npos) break;
        if (in_d) out.push_back(t);
    }
    return out;
}

} // namespace

TEST_CASE("decompose splits the table example path") {
    auto seq = decompose(single_path_doc("M 123.456 234.567"), 512.0);
    auto toks = path_tokens(seq);
    REQUIRE(toks.size() == 3);
    CHECK(toks[0] == Token::sym("M"));
    CHECK(toks[1].is_num);
    CHECK(toks[2].is_num);
    // the last two floats belong to the path
    REQUIRE(seq.floats.size() == 8); // width, height, 4 viewBox, 2 path
    CHECK(seq.floats[6] == 123.456 / 512);
    CHECK(seq.floats[7] == 234.567 / 512);
    CHECK(std::fabs(seq.floats[6] - 0.241125) <= 1e-6);
    CHECK(std::fabs(seq.floats[7] - 0.458139) <= 1e-6);
    CHECK(seq.raw_values[6] == 123.456);
}

TEST_CASE("z-only path contributes a single symbol") {
    auto seq = decompose(single_path_doc("M 0 0 z"), 512.0);
    auto toks = path_tokens(seq);
    REQUIRE(toks.size() == 4); // M NUM NUM z
    CHECK(toks[3] == Token::sym("z"));
}

TEST_CASE("placeholder count equals float count equals parameter count") {
    auto files = testsup::corpus_files(20);
    for (const auto& f : files) {
        auto doc = parse_svg(testsup::read_file(f));
        auto seq = decompose(doc, 512.0);
        std::size_t placeholders = 0;
        for (const auto& t : seq.tokens) placeholders += t.is_num;
        CHECK(placeholders == seq.floats.size());
        CHECK(placeholders == seq.raw_values.size());

        // brute-force parameter count from the arity table + attributes
        std::size_t expect = 6; // width height viewBox
        for (const auto& el : doc.paths) {
            if (el.stroke_width) ++expect;
            for (const auto& cmd : el.commands)
                expect += static_cast<std::size_t>(command_arity(cmd.op));
        }
        CHECK(placeholders == expect);
    }
}

TEST_CASE("consolidate splices, de-normalizes, clips") {
    DualSequence seq;
    seq.canvas_bound = 512;
    seq.tokens = {Token::sym("M"), Token::num(), Token::num()};
    seq.floats = {0.5, -0.25};
    CHECK(consolidate(seq, 3) == "M 256 -128");

    seq.floats = {1.2, -3.0}; // out of range: clipped to the canvas
    CHECK(consolidate(seq, 3) == "M 512 -512");
}

TEST_CASE("consolidate raises CountMismatch instead of truncating") {
    DualSequence seq;
    seq.canvas_bound = 512;
    seq.tokens = {Token::sym("M"), Token::num(), Token::num()};
    seq.floats = {0.5};
    CHECK_THROWS_AS((void)consolidate(seq, 3), Error);

    seq.floats = {0.5, 0.25, 0.125};
    try {
        (void)consolidate(seq, 3);
        FAIL("expected CountMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CountMismatch);
    }
}

TEST_CASE("consolidate(decompose) equals serialize_svg for in-bound documents") {
    for (const auto& f : testsup::corpus_files(15)) {
        auto doc = parse_svg(testsup::read_file(f));
        // a power-of-two bound above every corpus numeric: nothing clips and
        // the normalize/denormalize pair is exact
        auto seq = decompose(doc, 4096.0);
        CHECK(consolidate(seq, 3) == serialize_svg(doc, 3));
        CHECK(consolidate(seq, 6) == serialize_svg(doc, 6));
    }
}

TEST_CASE("clipping idempotence") {
    DualSequence seq;
    seq.canvas_bound = 512;
    seq.tokens = {Token::sym("M"), Token::num(), Token::num(), Token::sym("L"),
                  Token::num(), Token::num()};
    seq.floats = {1.5, -2.0, 0.25, 0.75};
    auto once = consolidate(seq, 3);
    // re-decompose the clipped output and consolidate again
    auto cmds = parse_path(once);
    DualSequence seq2;
    seq2.canvas_bound = 512;
    for (const auto& c : cmds) {
        seq2.tokens.push_back(Token::sym(std::string(1, c.op)));
        for (double p : c.params) {
            seq2.tokens.push_back(Token::num());
            seq2.floats.push_back(p / 512.0);
        }
    }
    CHECK(consolidate(seq2, 3) == once);
}

TEST_CASE("gate-accepted files decompose into [-1,1]") {
    // what lands on disk after the pipeline: normalized, gated, serialized
    // at precision 3, re-parsed
    CanvasConfig cfg;
    Renderer renderer = [](const SvgDocument& d) { return rasterize(d, 128, 128); };
    for (const auto& f : testsup::corpus_files(10)) {
        auto doc = parse_svg(testsup::read_file(f));
        auto norm = normalize_to_canvas(doc, cfg);
        if (!filter_check(doc, norm.doc, cfg, renderer).accepted) continue;
        auto on_disk = parse_svg(serialize_svg(norm.doc, cfg.precision));
        auto seq = decompose(on_disk, cfg.canvas_bound);
        for (double v : seq.floats) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("jsonl round trip") {
    auto doc = testsup::golden_doc();
    auto seq = decompose(doc, 512.0);
    auto line = to_jsonl(seq);
    auto back = from_jsonl(line);
    CHECK(back.tokens == seq.tokens);
    CHECK(back.floats == seq.floats);
    CHECK(back.canvas_bound == seq.canvas_bound);
    CHECK(consolidate(back, 3) == consolidate(seq, 3));

    CHECK_THROWS_AS((void)from_jsonl("{\"floats\": []}"), Error);
    CHECK_THROWS_AS((void)from_jsonl("not json"), Error);
}

TEST_CASE("token_stats reproduces the tokenizer comparison row") {
    const std::string d = "M 123.456 234.567";
    CHECK(token_stats(d, TokenizerStrategy::DigitLevel) == 16);
    CHECK(token_stats(d, TokenizerStrategy::NumberAware) == 8);
    CHECK(token_stats(d, TokenizerStrategy::Placeholder) == 3);
}

TEST_CASE("token_stats corner cases") {
    CHECK(token_stats("z", TokenizerStrategy::DigitLevel) == 1);
    CHECK(token_stats("z", TokenizerStrategy::Placeholder) == 1);
    CHECK(token_stats("", TokenizerStrategy::DigitLevel) == 0);
    // negative number: sign is part of the literal
    CHECK(token_stats("h -96.128", TokenizerStrategy::DigitLevel) == 8);   // h + 7 chars
    CHECK(token_stats("h -96.128", TokenizerStrategy::NumberAware) == 4);  // h -96 . 128
    CHECK(token_stats("h -96.128", TokenizerStrategy::Placeholder) == 2);
    // integers have no fraction pieces
    CHECK(token_stats("L 10 20", TokenizerStrategy::NumberAware) == 4); // L 10 _ 20
}

TEST_CASE("monotone token counts across the corpus") {
    for (const auto& f : testsup::corpus_files(30)) {
        auto doc = parse_svg(testsup::read_file(f));
        auto ph = token_stats(doc, TokenizerStrategy::Placeholder, 3);
        auto na = token_stats(doc, TokenizerStrategy::NumberAware, 3);
        auto dl = token_stats(doc, TokenizerStrategy::DigitLevel, 3);
        CHECK(ph <= na);
        CHECK(na <= dl);
    }
}

TEST_CASE("compression_ratio") {
    auto docs = std::vector<SvgDocument>{single_path_doc("M 123.456 234.567")};
    CHECK(compression_ratio(docs, TokenizerStrategy::DigitLevel,
                            TokenizerStrategy::DigitLevel, 3) == 1.0);
    CHECK(compression_ratio(docs, TokenizerStrategy::DigitLevel,
                            TokenizerStrategy::Placeholder, 3) ==
          doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)compression_ratio({}, TokenizerStrategy::DigitLevel,
                                            TokenizerStrategy::Placeholder, 3),
                    Error);
}
