// svgnum: batch front end for the SVG numeric toolkit.
//
// Subcommands: convert, normalize, decompose, consolidate, stats, verify,
// reward, bench. Exit codes: 0 success, 1 data failure, 2 usage error.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "svgnum/document.hpp"
#include "svgnum/dual_sequence.hpp"
#include "svgnum/errors.hpp"
#include "svgnum/number_codec.hpp"
#include "svgnum/preprocess.hpp"
#include "svgnum/raster.hpp"
#include "svgnum/reward.hpp"
#include "svgnum/ssim.hpp"
#include "svgnum/svgfloat.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace svgnum;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct PipelineConfig {
    double canvas_bound = 512.0;
    int precision = 3;
    FloatKind float_kind = FloatKind::F16;
    double ssim_threshold = 0.99;
    int fourier_k = 16;
    int embed_dim = 64;
    double lambda = 1e-5;
    double noise_sigma = 0.2; // normalized units
    double alpha = 0.4, beta = 0.3, gamma = 0.3;
    std::uint64_t seed = 0;
    int render_size = 256;
    int jobs = 0; // 0 = logical cores
    std::map<std::string, std::string> providers; // name -> command template
};

FloatKind parse_kind(const std::string& s) {
    if (s == "f32" || s == "F32" || s == "0") return FloatKind::F32;
    if (s == "f16" || s == "F16" || s == "1") return FloatKind::F16;
    if (s == "bf16" || s == "BF16" || s == "2") return FloatKind::BF16;
    throw CLI::ValidationError("--kind", "expected f32, f16 or bf16");
}

const char* kind_name(FloatKind k) {
    switch (k) {
    case FloatKind::F32: return "f32";
    case FloatKind::F16: return "f16";
    case FloatKind::BF16: return "bf16";
    }
    return "?";
}

// flat key=value file, '#' comments; flags override these values
void load_config_file(const std::string& path, PipelineConfig& cfg) {
    std::ifstream f(path);
    if (!f) fail(Errc::BadConfig, "cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            fail(Errc::BadConfig, path + ":" + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "M") cfg.canvas_bound = std::stod(value);
            else if (key == "precision") cfg.precision = std::stoi(value);
            else if (key == "float_kind") cfg.float_kind = parse_kind(value);
            else if (key == "ssim_threshold") cfg.ssim_threshold = std::stod(value);
            else if (key == "fourier_k") cfg.fourier_k = std::stoi(value);
            else if (key == "d") cfg.embed_dim = std::stoi(value);
            else if (key == "lambda") cfg.lambda = std::stod(value);
            else if (key == "noise_sigma") cfg.noise_sigma = std::stod(value);
            else if (key == "alpha") cfg.alpha = std::stod(value);
            else if (key == "beta") cfg.beta = std::stod(value);
            else if (key == "gamma") cfg.gamma = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "render_size") cfg.render_size = std::stoi(value);
            else if (key == "jobs") cfg.jobs = std::stoi(value);
            else if (key.rfind("provider_", 0) == 0) cfg.providers[key.substr(9)] = value;
            else fail(Errc::BadConfig, path + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            fail(Errc::BadConfig, path + ": bad value for '" + key + "'");
        }
    }
}

int effective_jobs(const PipelineConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Expands files, directories (every *.svg / *.svgf inside) and .txt manifests.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& inputs,
                                     bool svgf_too = false) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p)) {
                auto ext = e.path().extension();
                if (ext == ".svg" || (svgf_too && ext == ".svgf")) found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (p.extension() == ".txt") {
            std::ifstream manifest(p);
            if (!manifest) fail(Errc::IoError, "cannot read manifest " + in);
            std::string line;
            while (std::getline(manifest, line))
                if (!line.empty()) files.emplace_back(line);
        } else {
            files.push_back(p);
        }
    }
    return files;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot read " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& data) {
    std::ofstream f(p, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot write " + p.string());
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& data) {
    spit(p, std::string(data.begin(), data.end()));
}

class ReportWriter {
public:
    explicit ReportWriter(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) fail(Errc::IoError, "cannot write report " + path);
        }
    }
    void line(const json& j) {
        std::lock_guard lock(mu_);
        (file_.is_open() ? file_ : std::cout) << j.dump() << "\n";
    }

private:
    std::ofstream file_;
    std::mutex mu_;
};

// index-ordered parallel map over files; results land in slot order
template <typename Fn>
std::vector<json> parallel_over(const std::vector<fs::path>& files, int jobs, Fn&& fn) {
    std::vector<json> records(files.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (std::size_t i = 0; i < files.size(); ++i) records[i] = fn(files[i]);
    (void)jobs;
    return records;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& from) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
        .count();
}

// ---------------------------------------------------------------- convert

int cmd_convert(const PipelineConfig& cfg, const std::vector<std::string>& inputs,
                const std::string& out_dir, bool continue_on_error,
                const std::string& report_path) {
    auto files = collect_inputs(inputs, /*svgf_too=*/true);
    fs::create_directories(out_dir);
    ReportWriter report(report_path);

    for (const auto& f : files)
        if (f.extension() != ".svg" && f.extension() != ".svgf") {
            std::cerr << "convert: unknown extension on " << f << "\n";
            return kExitUsage;
        }

    std::atomic<int> failures{0};
    std::atomic<bool> stop{false};
    auto records = parallel_over(files, effective_jobs(cfg), [&](const fs::path& f) -> json {
        json rec{{"file", f.string()}};
        if (stop.load()) {
            rec["status"] = "skipped";
            return rec;
        }
        try {
            if (f.extension() == ".svg") {
                auto doc = parse_svg(slurp(f));
                auto bytes = encode(doc, cfg.float_kind);
                fs::path out = fs::path(out_dir) / f.filename().replace_extension(".svgf");
                spit(out, bytes);
                std::string raw = serialize_svg(doc, cfg.precision);
                rec["output"] = out.string();
                rec["action"] = "encode";
                rec["raw_bytes"] = raw.size();
                rec["svgf_bytes"] = bytes.size();
                rec["ratio"] = bytes.empty() ? 0.0
                                             : static_cast<double>(raw.size()) /
                                                   static_cast<double>(bytes.size());
            } else {
                auto text = slurp(f);
                auto doc = decode(std::vector<std::uint8_t>(text.begin(), text.end()));
                fs::path out = fs::path(out_dir) / f.filename().replace_extension(".svg");
                spit(out, serialize_svg(doc, cfg.precision));
                rec["output"] = out.string();
                rec["action"] = "decode";
                rec["svgf_bytes"] = text.size();
            }
            rec["status"] = "ok";
        } catch (const Error& e) {
            rec["status"] = "error";
            rec["error"] = e.what();
            ++failures;
            if (!continue_on_error) stop.store(true);
        }
        return rec;
    });
    for (const auto& rec : records) report.line(rec);
    std::cout << "converted " << (records.size() - failures) << "/" << files.size()
              << " files\n";
    return failures ? kExitData : kExitOk;
}

// --------------------------------------------------------------- normalize

int cmd_normalize(const PipelineConfig& cfg, const std::vector<std::string>& inputs,
                  const std::string& out_dir, const std::string& report_path) {
    auto files = collect_inputs(inputs);
    fs::create_directories(out_dir);
    ReportWriter report(report_path);
    CanvasConfig canvas{cfg.canvas_bound, cfg.ssim_threshold, cfg.precision};
    Renderer renderer = [&cfg](const SvgDocument& d) {
        return rasterize(d, cfg.render_size, cfg.render_size);
    };

    auto records = parallel_over(files, effective_jobs(cfg), [&](const fs::path& f) -> json {
        json rec{{"file", f.string()}};
        try {
            auto doc = parse_svg(slurp(f));
            auto norm = normalize_to_canvas(doc, canvas);
            auto verdict = filter_check(doc, norm.doc, canvas, renderer);
            rec["verdict"] = filter_reason_name(verdict.reason);
            rec["scale"] = norm.scale;
            if (verdict.ssim) rec["ssim"] = *verdict.ssim;
            if (verdict.max_abs_value) rec["max_abs"] = *verdict.max_abs_value;
            if (verdict.accepted) {
                fs::path out = fs::path(out_dir) / f.filename();
                spit(out, serialize_svg(norm.doc, cfg.precision));
                rec["output"] = out.string();
            }
        } catch (const Error& e) {
            rec["verdict"] = "ParseFailure";
            rec["error"] = e.what();
        }
        return rec;
    });

    std::size_t accepted = 0;
    double ssim_sum = 0;
    std::size_t ssim_count = 0;
    for (const auto& rec : records) {
        report.line(rec);
        if (rec.value("verdict", "") == "Ok") ++accepted;
        if (rec.contains("ssim")) {
            ssim_sum += rec["ssim"].get<double>();
            ++ssim_count;
        }
    }
    std::cout << "accepted " << accepted << "/" << files.size();
    if (!files.empty())
        std::cout << " (" << (100.0 * accepted / files.size()) << "%)";
    if (ssim_count) std::cout << ", mean ssim " << (ssim_sum / ssim_count);
    std::cout << "\n";
    return kExitOk;
}

// ---------------------------------------------------- decompose/consolidate

int cmd_decompose(const PipelineConfig& cfg, const std::vector<std::string>& inputs,
                  const std::string& out_path) {
    auto files = collect_inputs(inputs);
    std::ofstream out;
    if (!out_path.empty()) {
        out.open(out_path);
        if (!out) {
            std::cerr << "decompose: cannot write " << out_path << "\n";
            return kExitData;
        }
    }
    std::ostream& sink = out_path.empty() ? std::cout : out;

    int failures = 0;
    for (const auto& f : files) {
        try {
            auto doc = parse_svg(slurp(f));
            auto seq = decompose(doc, cfg.canvas_bound);
            json j = json::parse(to_jsonl(seq));
            j["file"] = f.string();
            sink << j.dump() << "\n";
        } catch (const Error& e) {
            json j{{"file", f.string()}, {"error", e.what()}};
            sink << j.dump() << "\n";
            ++failures;
        }
    }
    return failures ? kExitData : kExitOk;
}

int cmd_consolidate(const PipelineConfig& cfg, const std::string& input,
                    const std::string& out_dir, const std::string& report_path) {
    std::ifstream in(input);
    if (!in) {
        std::cerr << "consolidate: cannot read " << input << "\n";
        return kExitData;
    }
    fs::create_directories(out_dir);
    ReportWriter report(report_path);

    int failures = 0, index = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec{{"record", index}};
        try {
            auto seq = from_jsonl(line);
            auto text = consolidate(seq, cfg.precision);
            std::string name = "record_" + std::to_string(index) + ".svg";
            auto parsed = json::parse(line, nullptr, false);
            if (parsed.is_object() && parsed.contains("file"))
                name = fs::path(parsed["file"].get<std::string>()).stem().string() + ".svg";
            fs::path out = fs::path(out_dir) / name;
            spit(out, text);
            rec["output"] = out.string();
            rec["status"] = "ok";
        } catch (const Error& e) {
            rec["status"] = "error";
            rec["error"] = e.what();
            ++failures;
        }
        report.line(rec);
        ++index;
    }
    return failures ? kExitData : kExitOk;
}

// ------------------------------------------------------------------- stats

int cmd_stats(const PipelineConfig& cfg, const std::vector<std::string>& inputs,
              bool as_json) {
    auto files = collect_inputs(inputs);
    if (files.empty()) {
        std::cerr << "stats: no input files\n";
        return kExitUsage;
    }
    const TokenizerStrategy strategies[] = {TokenizerStrategy::DigitLevel,
                                            TokenizerStrategy::NumberAware,
                                            TokenizerStrategy::Placeholder};
    std::array<std::atomic<std::size_t>, 3> totals{};
    std::atomic<int> failures{0};

    auto records = parallel_over(files, effective_jobs(cfg), [&](const fs::path& f) -> json {
        json rec{{"file", f.string()}};
        try {
            auto doc = parse_svg(slurp(f));
            for (int s = 0; s < 3; ++s) {
                auto n = token_stats(doc, strategies[s], cfg.precision);
                rec[strategy_name(strategies[s])] = n;
                totals[s] += n;
            }
        } catch (const Error& e) {
            rec["error"] = e.what();
            ++failures;
        }
        return rec;
    });

    json summary{{"files", files.size()}};
    for (int s = 0; s < 3; ++s)
        summary[strategy_name(strategies[s])] = totals[s].load();
    if (totals[2] > 0) {
        summary["ratio_digit_vs_placeholder"] =
            static_cast<double>(totals[0]) / static_cast<double>(totals[2]);
        summary["ratio_numaware_vs_placeholder"] =
            static_cast<double>(totals[1]) / static_cast<double>(totals[2]);
    }

    if (as_json) {
        json out{{"per_file", records}, {"summary", summary}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "strategy        total tokens\n";
        for (int s = 0; s < 3; ++s)
            std::cout << std::left << std::setw(16) << strategy_name(strategies[s])
                      << totals[s].load() << "\n";
        if (totals[2] > 0)
            std::cout << "digit-level / placeholder ratio: "
                      << summary["ratio_digit_vs_placeholder"].get<double>() << "x\n"
                      << "number-aware / placeholder ratio: "
                      << summary["ratio_numaware_vs_placeholder"].get<double>() << "x\n";
    }
    return failures ? kExitData : kExitOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const PipelineConfig& cfg, bool as_json) {
    struct Check {
        std::string name;
        bool ok = false;
        std::string detail;
        double ms = 0;
    };
    std::vector<Check> checks;
    auto run = [&checks](const std::string& name, auto&& fn) {
        Check c{name};
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto [ok, detail] = fn();
            c.ok = ok;
            c.detail = detail;
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = e.what();
        }
        c.ms = elapsed_ms(t0);
        checks.push_back(c);
    };

    run("nan-box round trip (60 cases)", [] {
        const char* ops = "MLHVCSQTAZmlhvcsqtaz";
        for (FloatKind k : {FloatKind::F32, FloatKind::F16, FloatKind::BF16})
            for (const char* p = ops; *p; ++p) {
                Slot s = nan_unbox(nan_box(*p, k), k);
                if (!s.is_opcode || s.op != *p) return std::pair{false, std::string(1, *p)};
            }
        return std::pair{true, std::string("all opcodes x kinds")};
    });

    run("svgfloat round trip", [&] {
        SvgDocument doc;
        doc.width = doc.height = 512;
        doc.view_box = {0, 0, 512, 512};
        doc.paths.push_back({parse_path("M 288.453 128.219 L 736.109 384.556 h -96.128 z"),
                             {}, {}, {}, {}});
        for (FloatKind k : {FloatKind::F32, FloatKind::F16, FloatKind::BF16}) {
            auto round = decode(encode(doc, k));
            if (round.paths.size() != 1 ||
                round.paths[0].commands.size() != doc.paths[0].commands.size())
                return std::pair{false, std::string(kind_name(k))};
            if (k == FloatKind::F32)
                for (std::size_t i = 0; i < round.paths[0].commands.size(); ++i)
                    for (std::size_t j = 0; j < round.paths[0].commands[i].params.size(); ++j) {
                        float want = static_cast<float>(doc.paths[0].commands[i].params[j]);
                        if (round.paths[0].commands[i].params[j] != static_cast<double>(want))
                            return std::pair{false, std::string("f32 numeric drift")};
                    }
        }
        return std::pair{true, std::string("f32/f16/bf16")};
    });

    run("fourier exactness", [&] {
        auto z = fourier_features(0.0, {4});
        for (std::size_t i = 0; i < z.size(); i += 2)
            if (z[i] != 0.0 || z[i + 1] != 1.0) return std::pair{false, std::string("gamma(0)")};
        auto one = fourier_features(1.0, {2});
        if (std::fabs(one[0]) > 1e-12 || std::fabs(one[1] + 1) > 1e-12 ||
            std::fabs(one[2]) > 1e-12 || std::fabs(one[3] - 1) > 1e-12)
            return std::pair{false, std::string("gamma(1)")};
        return std::pair{true, std::string("gamma(0), gamma(1)")};
    });

    run("gradient check", [&] {
        auto params = make_codec(4, 12, cfg.canvas_bound, 0.0, cfg.seed + 1);
        double err = grad_check(params, {0.3, -0.8, 0.05}, 1e-5);
        return std::pair{err <= 1e-5, "max rel err " + std::to_string(err)};
    });

    run("NaN-injected checkpoint fails the grad check", [&] {
        auto params = make_codec(2, 4, cfg.canvas_bound, 0.0, 3);
        auto dir = std::filesystem::temp_directory_path();
        auto path = (dir / "svgnum_verify_ckpt.bin").string();
        save_checkpoint(params, path);
        {
            // corrupt the first weight in place
            std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
            double bad = std::nan("");
            f.write(reinterpret_cast<const char*>(&bad), sizeof bad);
        }
        auto loaded = load_checkpoint(path);
        double err = grad_check(loaded, {0.5}, 1e-5);
        std::filesystem::remove(path);
        std::filesystem::remove(path + ".json");
        return std::pair{!(err <= 1e-5), std::string("corrupted weight surfaces as err=") +
                                             std::to_string(err)};
    });

    run("ssim identity", [&] {
        RasterImage img;
        img.width = img.height = 64;
        img.pixels.assign(64 * 64, 0.0);
        for (int i = 0; i < 64 * 64; i += 7) img.pixels[i] = 1.0;
        double s = ssim(img, img);
        return std::pair{std::fabs(s - 1.0) <= 1e-9, "ssim(x,x) = " + std::to_string(s)};
    });

    run("advantage centering", [&] {
        Rng rng(cfg.seed + 7);
        for (int round = 0; round < 100; ++round) {
            std::vector<double> rewards;
            for (int i = 0; i < 8; ++i) rewards.push_back(rng.uniform());
            double sum = 0;
            for (double a : grpo_advantages(rewards)) sum += a;
            if (std::fabs(sum) > 1e-12) return std::pair{false, std::string("drift")};
        }
        return std::pair{true, std::string("100 groups of 8")};
    });

    bool all_ok = true;
    json out = json::array();
    for (const auto& c : checks) {
        all_ok = all_ok && c.ok;
        if (as_json) {
            out.push_back({{"check", c.name}, {"ok", c.ok}, {"detail", c.detail},
                           {"ms", c.ms}});
        } else {
            std::cout << (c.ok ? "PASS" : "FAIL") << "  " << c.name << " (" << c.detail
                      << ", " << c.ms << " ms)\n";
        }
        if (!c.ok && !as_json) {
            std::cout << "first failing check: " << c.name << "\n";
        }
    }
    if (as_json) std::cout << out.dump(2) << "\n";
    return all_ok ? kExitOk : kExitData;
}

// ------------------------------------------------------------------ reward

int cmd_reward(const PipelineConfig& cfg, bool weights_explicit, const std::string& gt,
               const std::vector<std::string>& candidates,
               const std::vector<std::string>& provider_specs, bool as_json) {
    auto load_image = [&cfg](const std::string& p) -> RasterImage {
        if (fs::path(p).extension() == ".pgm") return read_pgm(p);
        return rasterize(parse_svg(slurp(fs::path(p))), cfg.render_size, cfg.render_size);
    };

    std::map<std::string, MetricProvider> providers;
    providers[kScoreSsim] = native_ssim_provider();
    for (const auto& [name, tpl] : cfg.providers) { // config file first
        if (name != kScoreLpips && name != kScoreDino && name != kScoreSsim) {
            std::cerr << "reward: unknown provider '" << name << "' in config\n";
            return kExitUsage;
        }
        providers[name] = command_provider(name, tpl);
    }
    for (const auto& spec : provider_specs) { // flags override
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
            std::cerr << "reward: --provider expects name=command\n";
            return kExitUsage;
        }
        std::string name = spec.substr(0, eq);
        if (name != kScoreLpips && name != kScoreDino && name != kScoreSsim) {
            std::cerr << "reward: unknown provider '" << name << "'\n";
            return kExitUsage;
        }
        providers[name] = command_provider(name, spec.substr(eq + 1));
    }

    RewardWeights weights{cfg.alpha, cfg.beta, cfg.gamma};
    const bool have_neural = providers.count(kScoreDino) || providers.count(kScoreLpips);
    if (!have_neural && !weights_explicit) {
        weights = RewardWeights{0.0, 1.0, 0.0}; // ssim-only fallback
        std::cerr << "reward: no neural providers configured; scoring with ssim only\n";
    }

    try {
        RasterImage gt_img = load_image(gt);
        std::mutex provider_mu;
        std::vector<double> rewards;
        json per_candidate = json::array();
        for (const auto& c : candidates) {
            RasterImage img = load_image(c);
            std::map<std::string, double> scores;
            for (auto& [name, provider] : providers) {
                if (name == kScoreDino && weights.alpha == 0) continue;
                if (name == kScoreSsim && weights.beta == 0) continue;
                if (name == kScoreLpips && weights.gamma == 0) continue;
                double s;
                if (provider.thread_safe) {
                    s = provider.score(gt_img, img);
                } else {
                    std::lock_guard lock(provider_mu);
                    s = provider.score(gt_img, img);
                }
                scores[name] = std::clamp(s, 0.0, 1.0);
            }
            double r = composite_reward(scores, weights);
            rewards.push_back(r);
            json rec{{"candidate", c}, {"reward", r}};
            for (const auto& [name, s] : scores) rec[name] = s;
            per_candidate.push_back(rec);
        }
        if (rewards.size() >= 2) {
            auto adv = grpo_advantages(rewards);
            for (std::size_t i = 0; i < adv.size(); ++i)
                per_candidate[i]["advantage"] = adv[i];
        }
        if (as_json) {
            std::cout << json{{"weights",
                               {{"alpha", weights.alpha},
                                {"beta", weights.beta},
                                {"gamma", weights.gamma}}},
                              {"candidates", per_candidate}}
                             .dump(2)
                      << "\n";
        } else {
            for (const auto& rec : per_candidate) {
                std::cout << rec["candidate"].get<std::string>()
                          << "  reward=" << rec["reward"].get<double>();
                if (rec.contains("advantage"))
                    std::cout << "  advantage=" << rec["advantage"].get<double>();
                std::cout << "\n";
            }
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "reward: " << e.what() << "\n";
        return e.code() == Errc::MissingComponent ? kExitUsage : kExitData;
    }
}

// ------------------------------------------------------------------- bench

int cmd_bench(const PipelineConfig& cfg, const std::vector<std::string>& inputs,
              bool compare_serial, bool as_json) {
    auto files = collect_inputs(inputs);
    if (files.empty()) {
        std::cerr << "bench: no input files\n";
        return kExitUsage;
    }
    json rows = json::array();
    double sum_encode = 0, sum_decode = 0, sum_raster = 0, sum_raster_serial = 0,
           sum_ssim = 0, sum_ssim_serial = 0;
    for (const auto& f : files) {
        auto doc = parse_svg(slurp(f));
        json row{{"file", f.string()}};

        auto t0 = std::chrono::steady_clock::now();
        auto bytes = encode(doc, cfg.float_kind);
        row["encode_ms"] = elapsed_ms(t0);
        sum_encode += row["encode_ms"].get<double>();

        t0 = std::chrono::steady_clock::now();
        auto round = decode(bytes);
        row["decode_ms"] = elapsed_ms(t0);
        sum_decode += row["decode_ms"].get<double>();

        t0 = std::chrono::steady_clock::now();
        auto img = rasterize(doc, cfg.render_size, cfg.render_size);
        row["rasterize_ms"] = elapsed_ms(t0);
        sum_raster += row["rasterize_ms"].get<double>();

        auto img2 = rasterize(round, cfg.render_size, cfg.render_size);
        t0 = std::chrono::steady_clock::now();
        double s = ssim(img, img2);
        row["ssim_ms"] = elapsed_ms(t0);
        row["ssim"] = s;
        sum_ssim += row["ssim_ms"].get<double>();

        if (compare_serial) {
            t0 = std::chrono::steady_clock::now();
            auto imgs = rasterize_serial(doc, cfg.render_size, cfg.render_size);
            row["rasterize_serial_ms"] = elapsed_ms(t0);
            sum_raster_serial += row["rasterize_serial_ms"].get<double>();
            t0 = std::chrono::steady_clock::now();
            double s2 = ssim_serial(img, img2);
            row["ssim_serial_ms"] = elapsed_ms(t0);
            sum_ssim_serial += row["ssim_serial_ms"].get<double>();
            row["parallel_matches_serial"] = (imgs.pixels == img.pixels) && (s2 == s);
        }
        rows.push_back(row);
    }
    json totals{{"files", files.size()},
                {"encode_ms", sum_encode},
                {"decode_ms", sum_decode},
                {"rasterize_ms", sum_raster},
                {"ssim_ms", sum_ssim}};
    if (compare_serial) {
        totals["rasterize_serial_ms"] = sum_raster_serial;
        totals["ssim_serial_ms"] = sum_ssim_serial;
        if (sum_raster > 0) totals["rasterize_speedup"] = sum_raster_serial / sum_raster;
        if (sum_ssim > 0) totals["ssim_speedup"] = sum_ssim_serial / sum_ssim;
    }
    if (as_json) {
        std::cout << json{{"per_file", rows}, {"totals", totals}}.dump(2) << "\n";
    } else {
        std::cout << "files: " << files.size() << "\n"
                  << "encode: " << sum_encode << " ms, decode: " << sum_decode
                  << " ms, rasterize: " << sum_raster << " ms, ssim: " << sum_ssim
                  << " ms\n";
        if (compare_serial) {
            std::cout << "serial rasterize: " << sum_raster_serial << " ms ("
                      << totals.value("rasterize_speedup", 0.0) << "x parallel speedup)\n"
                      << "serial ssim: " << sum_ssim_serial << " ms ("
                      << totals.value("ssim_speedup", 0.0) << "x parallel speedup)\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SVG numeric toolkit: canvas normalization, dual-sequence "
                 "decomposition, SVGFloat codec, perceptual rewards"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::string config_path;

    // shared options, registered on every subcommand
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("-M,--canvas-bound", cfg.canvas_bound, "normalization constant M");
        sub->add_option("--precision", cfg.precision, "output decimals");
        sub->add_option("--ssim-threshold", cfg.ssim_threshold, "acceptance gate");
        sub->add_option("--fourier-k", cfg.fourier_k, "frequency bands");
        sub->add_option("--embed-dim", cfg.embed_dim, "embedding width d");
        sub->add_option("--lambda", cfg.lambda, "numeric loss weight");
        sub->add_option("--noise-sigma", cfg.noise_sigma, "gaussian noise std (normalized)");
        sub->add_option("--seed", cfg.seed, "rng seed (SVGF_SEED overrides)");
        sub->add_option("--render-size", cfg.render_size, "raster resolution");
        sub->add_option("--jobs", cfg.jobs, "worker pool size (0 = logical cores)");
        return sub;
    };

    std::vector<std::string> inputs;
    std::string out_dir = "out";
    std::string report_path;
    std::string kind_str;
    bool continue_on_error = false;
    bool as_json = false;
    bool compare_serial = false;
    std::string gt;
    std::vector<std::string> provider_specs;
    std::string consolidate_input;

    auto* convert = add_common(app.add_subcommand(
        "convert", "svg <-> svgf conversion with size report"));
    convert->add_option("inputs", inputs, "files or directories")->required();
    convert->add_option("--out", out_dir, "output directory");
    convert->add_option("--kind", kind_str, "f32 | f16 | bf16");
    convert->add_option("--report", report_path, "JSON-lines report path");
    convert->add_flag("--continue-on-error", continue_on_error);

    auto* normalize_cmd = add_common(app.add_subcommand(
        "normalize", "fit documents to the canvas and gate on fidelity"));
    normalize_cmd->add_option("inputs", inputs, "files, directories or .txt manifests")
        ->required();
    normalize_cmd->add_option("--out", out_dir, "accepted-file directory");
    normalize_cmd->add_option("--report", report_path, "JSON-lines verdict report");

    auto* decompose_cmd = add_common(app.add_subcommand(
        "decompose", "split documents into token/float streams (JSON lines)"));
    decompose_cmd->add_option("inputs", inputs)->required();
    decompose_cmd->add_option("--out", report_path, "output .jsonl (default stdout)");

    auto* consolidate_cmd = add_common(app.add_subcommand(
        "consolidate", "rebuild SVG files from token/float streams"));
    consolidate_cmd->add_option("input", consolidate_input, "input .jsonl")->required();
    consolidate_cmd->add_option("--out", out_dir, "output directory");
    consolidate_cmd->add_option("--report", report_path, "JSON-lines report path");

    auto* stats_cmd = add_common(app.add_subcommand(
        "stats", "token counts per tokenizer strategy with compression ratios"));
    stats_cmd->add_option("inputs", inputs)->required();
    stats_cmd->add_flag("--json", as_json, "machine-readable output");

    auto* verify_cmd = add_common(app.add_subcommand(
        "verify", "run the built-in self checks"));
    verify_cmd->add_flag("--json", as_json, "machine-readable output");

    auto* reward_cmd = add_common(app.add_subcommand(
        "reward", "score candidates against a ground truth; group advantages"));
    reward_cmd->add_option("--gt", gt, "ground truth (.svg or .pgm)")->required();
    reward_cmd->add_option("candidates", inputs, ".svg or .pgm candidates")->required();
    reward_cmd->add_option("--provider", provider_specs,
                           "external scorer: name={a}/{b} command template");
    auto* alpha_opt = reward_cmd->add_option("--alpha", cfg.alpha, "dinov2 weight");
    auto* beta_opt = reward_cmd->add_option("--beta", cfg.beta, "ssim weight");
    auto* gamma_opt = reward_cmd->add_option("--gamma", cfg.gamma, "lpips' weight");
    reward_cmd->add_flag("--json", as_json, "machine-readable output");

    auto* bench_cmd = add_common(app.add_subcommand(
        "bench", "per-file encode/decode/rasterize/ssim timings"));
    bench_cmd->add_option("inputs", inputs)->required();
    bench_cmd->add_flag("--compare-serial", compare_serial,
                        "time the serial reference kernels too");
    bench_cmd->add_flag("--json", as_json, "machine-readable output");

    // two passes: --config first, then flags override the file
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!config_path.empty()) {
            PipelineConfig file_cfg;
            load_config_file(config_path, file_cfg);
            cfg = file_cfg;
            // re-parse so command-line flags win over the file
            app.clear();
            inputs.clear();
            provider_specs.clear();
            try {
                app.parse(argc, argv);
            } catch (const CLI::ParseError& e) {
                int rc = app.exit(e);
                return rc == 0 ? kExitOk : kExitUsage;
            }
        }
        if (!kind_str.empty()) cfg.float_kind = parse_kind(kind_str);
        if (const char* env_seed = std::getenv("SVGF_SEED"))
            cfg.seed = std::strtoull(env_seed, nullptr, 10);

#ifdef _OPENMP
        omp_set_num_threads(effective_jobs(cfg));
#endif

        const bool weights_explicit =
            alpha_opt->count() || beta_opt->count() || gamma_opt->count();

        if (convert->parsed())
            return cmd_convert(cfg, inputs, out_dir, continue_on_error, report_path);
        if (normalize_cmd->parsed())
            return cmd_normalize(cfg, inputs, out_dir, report_path);
        if (decompose_cmd->parsed()) return cmd_decompose(cfg, inputs, report_path);
        if (consolidate_cmd->parsed())
            return cmd_consolidate(cfg, consolidate_input, out_dir, report_path);
        if (stats_cmd->parsed()) return cmd_stats(cfg, inputs, as_json);
        if (verify_cmd->parsed()) return cmd_verify(cfg, as_json);
        if (reward_cmd->parsed())
            return cmd_reward(cfg, weights_explicit, gt, inputs, provider_specs, as_json);
        if (bench_cmd->parsed()) return cmd_bench(cfg, inputs, compare_serial, as_json);
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "svgnum: " << e.what() << "\n";
        return e.code() == Errc::BadConfig ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "svgnum: " << e.what() << "\n";
        return kExitData;
    }
}
