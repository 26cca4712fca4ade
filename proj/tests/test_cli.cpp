#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "svgnum/document.hpp"
#include "svgnum/svgfloat.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code;
    std::string out; // stdout only; stderr lands in err
    std::string err;
};

CliResult run_cli(const std::string& args) {
    auto out_file = fs::temp_directory_path() / "svgnum_cli_out.txt";
    auto err_file = fs::temp_directory_path() / "svgnum_cli_err.txt";
    std::string cmd = std::string(SVGNUM_CLI_PATH) + " " + args + " > " +
                      out_file.string() + " 2> " + err_file.string();
    int rc = std::system(cmd.c_str());
    auto read = [](const fs::path& p) {
        std::ifstream f(p);
        return std::string((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
    };
    return {WEXITSTATUS(rc), read(out_file), read(err_file)};
}

std::vector<json> jsonl(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE_MESSAGE(f.good(), "missing report " << p.string());
    std::vector<json> lines;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty()) lines.push_back(json::parse(line));
    return lines;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli: usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("stats").exit_code == 2); // missing inputs

    TempDir tmp("svgnum_cli_usage");
    std::ofstream(tmp.path / "weird.xyz") << "?";
    auto r = run_cli("convert " + (tmp.path / "weird.xyz").string() + " --out " +
                     (tmp.path / "out").string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: convert round trip through both directions") {
    TempDir tmp("svgnum_cli_convert");
    auto fixture = testsup::source_dir() / "data" / "fixtures" / "rect_icon.svg";
    auto report = tmp.path / "report.jsonl";

    auto r = run_cli("convert " + fixture.string() + " --out " + tmp.path.string() +
                     " --kind f32 --report " + report.string());
    CHECK(r.exit_code == 0);
    auto recs = jsonl(report);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["status"] == "ok");
    CHECK(recs[0]["action"] == "encode");
    CHECK(recs[0]["svgf_bytes"].get<std::size_t>() > 6);

    auto svgf = tmp.path / "rect_icon.svgf";
    REQUIRE(fs::exists(svgf));
    auto back_dir = tmp.path / "back";
    r = run_cli("convert " + svgf.string() + " --out " + back_dir.string());
    CHECK(r.exit_code == 0);
    auto round = svgnum::parse_svg(testsup::read_file(back_dir / "rect_icon.svg"));
    auto original = testsup::golden_doc();
    REQUIRE(round.paths.size() == 1);
    // f32 storage: parameters match to float precision after one round trip
    for (std::size_t i = 0; i < original.paths[0].commands.size(); ++i)
        for (std::size_t j = 0; j < original.paths[0].commands[i].params.size(); ++j) {
            double want = static_cast<double>(
                static_cast<float>(original.paths[0].commands[i].params[j]));
            // the decoded file was re-serialized at precision 3
            CHECK(std::fabs(round.paths[0].commands[i].params[j] - want) <= 5e-4);
        }
}

TEST_CASE("cli: convert surfaces per-file failures") {
    TempDir tmp("svgnum_cli_convert_err");
    std::ofstream(tmp.path / "broken.svg") << "<svg><circle/></svg>";
    auto fixture = testsup::source_dir() / "data" / "fixtures" / "rect_icon.svg";
    fs::copy_file(fixture, tmp.path / "ok.svg");
    auto report = tmp.path / "report.jsonl";
    auto r = run_cli("convert " + tmp.path.string() + " --out " + (tmp.path / "o").string() +
                     " --continue-on-error --report " + report.string());
    CHECK(r.exit_code == 1);
    auto recs = jsonl(report);
    REQUIRE(recs.size() == 2);
    int errors = 0, oks = 0;
    for (const auto& rec : recs) {
        if (rec["status"] == "error") ++errors;
        if (rec["status"] == "ok") ++oks;
    }
    CHECK(errors == 1);
    CHECK(oks == 1);
}

TEST_CASE("cli: normalize writes verdict report and accepted files") {
    TempDir tmp("svgnum_cli_norm");
    // 2 good corpus files + 1 out-of-bounds fixture
    auto files = testsup::corpus_files(2);
    for (const auto& f : files) fs::copy_file(f, tmp.path / f.filename());
    fs::copy_file(testsup::source_dir() / "data" / "fixtures" / "oob_relative.svg",
                  tmp.path / "oob_relative.svg");

    auto out = tmp.path / "accepted";
    auto report = tmp.path / "verdicts.jsonl";
    auto r = run_cli("normalize " + tmp.path.string() + " --out " + out.string() +
                     " --report " + report.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("accepted 2/3") != std::string::npos);

    auto recs = jsonl(report);
    REQUIRE(recs.size() == 3);
    int ok = 0, oob = 0;
    for (const auto& rec : recs) {
        if (rec["verdict"] == "Ok") {
            ++ok;
            CHECK(rec["ssim"].get<double>() >= 0.99);
            CHECK(rec.contains("scale"));
        }
        if (rec["verdict"] == "OutOfBounds") ++oob;
    }
    CHECK(ok == 2);
    CHECK(oob == 1);
    int accepted_files = 0;
    for (const auto& e : fs::directory_iterator(out)) {
        ++accepted_files;
        auto doc = svgnum::parse_svg(testsup::read_file(e.path()));
    }
    CHECK(accepted_files == 2);
}

TEST_CASE("cli: decompose then consolidate reconstructs the corpus") {
    TempDir tmp("svgnum_cli_dual");
    auto files = testsup::corpus_files(2);
    std::string args = "decompose";
    for (const auto& f : files) args += " " + f.string();
    auto seqs = tmp.path / "seqs.jsonl";
    args += " --out " + seqs.string() + " -M 1024";
    CHECK(run_cli(args).exit_code == 0);

    auto lines = jsonl(seqs);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].contains("tokens"));
    CHECK(lines[0].contains("floats"));
    CHECK(lines[0]["M"] == 1024.0);
    std::size_t placeholders = 0;
    for (const auto& t : lines[0]["tokens"])
        if (t.get<std::string>() == "[NUM]") ++placeholders;
    CHECK(placeholders == lines[0]["floats"].size());

    auto out = tmp.path / "rebuilt";
    CHECK(run_cli("consolidate " + seqs.string() + " --out " + out.string()).exit_code == 0);
    for (const auto& f : files) {
        auto rebuilt = out / f.filename();
        REQUIRE(fs::exists(rebuilt));
        auto doc = svgnum::parse_svg(testsup::read_file(rebuilt));
        auto want = svgnum::parse_svg(testsup::read_file(f));
        CHECK(doc.paths.size() == want.paths.size());
    }

    // tampered line: one float short -> CountMismatch in the report
    auto tampered = tmp.path / "tampered.jsonl";
    {
        auto rec = lines[0];
        rec["floats"].erase(rec["floats"].size() - 1);
        std::ofstream f(tampered);
        f << rec.dump() << "\n";
    }
    auto report = tmp.path / "consolidate_report.jsonl";
    auto r = run_cli("consolidate " + tampered.string() + " --out " + out.string() +
                     " --report " + report.string());
    CHECK(r.exit_code == 1);
    auto recs = jsonl(report);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["status"] == "error");
    CHECK(recs[0]["error"].get<std::string>().find("CountMismatch") != std::string::npos);
}

TEST_CASE("cli: stats on the worked example path") {
    TempDir tmp("svgnum_cli_stats");
    std::ofstream(tmp.path / "t.svg")
        << "<svg viewBox=\"0 0 512 512\"><path d=\"M 123.456 234.567\"/></svg>";
    auto r = run_cli("stats " + (tmp.path / "t.svg").string() + " --json");
    CHECK(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j["summary"]["digit-level"] == 16);
    CHECK(j["summary"]["number-aware"] == 8);
    CHECK(j["summary"]["placeholder"] == 3);

    // a directory with no svg files is a usage error
    auto empty = tmp.path / "empty";
    fs::create_directories(empty);
    CHECK(run_cli("stats " + empty.string()).exit_code == 2);
}

TEST_CASE("cli: verify passes on a clean build") {
    auto r = run_cli("verify --json");
    CHECK(r.exit_code == 0);
    auto j = json::parse(r.out);
    for (const auto& check : j) CHECK(check["ok"] == true);
}

TEST_CASE("cli: reward falls back to ssim-only and centers advantages") {
    TempDir tmp("svgnum_cli_reward");
    auto gt = testsup::source_dir() / "data" / "fixtures" / "rect_icon.svg";
    auto files = testsup::corpus_files(2);
    auto r = run_cli("reward --gt " + gt.string() + " " + gt.string() + " " +
                     files[0].string() + " " + files[1].string() + " --json");
    CHECK(r.exit_code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j["candidates"].size() == 3);
    CHECK(j["weights"]["beta"] == 1.0);
    CHECK(j["candidates"][0]["reward"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    double sum = 0;
    for (const auto& c : j["candidates"]) sum += c["advantage"].get<double>();
    CHECK(std::fabs(sum) <= 1e-12);

    // explicit neural weight without a provider is a usage error
    auto r2 = run_cli("reward --gt " + gt.string() + " " + files[0].string() + " " +
                      files[1].string() + " --alpha 0.4");
    CHECK(r2.exit_code == 2);

    // a fake provider supplies the missing components
    auto r3 = run_cli("reward --gt " + gt.string() + " " + files[0].string() + " " +
                      files[1].string() +
                      " --provider \"dinov2_sim=cat {a} {b} > /dev/null && echo 0.5\""
                      " --provider \"lpips_prime=echo 0.25\" --json");
    CHECK(r3.exit_code == 0);
    auto j3 = json::parse(r3.out);
    CHECK(j3["candidates"][0]["dinov2_sim"] == 0.5);
    CHECK(j3["candidates"][0]["lpips_prime"] == 0.25);
}

TEST_CASE("cli: bench compares serial and parallel kernels") {
    auto files = testsup::corpus_files(2);
    auto r = run_cli("bench " + files[0].string() + " " + files[1].string() +
                     " --compare-serial --json");
    CHECK(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j["totals"]["files"] == 2);
    for (const auto& row : j["per_file"]) {
        CHECK(row["parallel_matches_serial"] == true);
        CHECK(row["ssim"].get<double>() >= 0.97);
    }
}

TEST_CASE("cli: config file with flag and env precedence") {
    TempDir tmp("svgnum_cli_cfg");
    std::ofstream(tmp.path / "cfg.txt") << "# pipeline config\nM = 256\nprecision = 2\n";
    std::ofstream(tmp.path / "t.svg")
        << "<svg viewBox=\"0 0 512 512\"><path d=\"M 100 100 L 200 200\"/></svg>";

    // config M=256 applies
    auto seqs = tmp.path / "a.jsonl";
    CHECK(run_cli("decompose " + (tmp.path / "t.svg").string() + " --config " +
                  (tmp.path / "cfg.txt").string() + " --out " + seqs.string())
              .exit_code == 0);
    CHECK(jsonl(seqs)[0]["M"] == 256.0);

    // flag beats config
    auto seqs2 = tmp.path / "b.jsonl";
    CHECK(run_cli("decompose " + (tmp.path / "t.svg").string() + " --config " +
                  (tmp.path / "cfg.txt").string() + " -M 512 --out " + seqs2.string())
              .exit_code == 0);
    CHECK(jsonl(seqs2)[0]["M"] == 512.0);

    // bad config is a usage error
    std::ofstream(tmp.path / "bad.txt") << "nonsense\n";
    CHECK(run_cli("verify --config " + (tmp.path / "bad.txt").string()).exit_code == 2);
}
