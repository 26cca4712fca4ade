#include "svgnum/reward.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include <unistd.h>

#include "svgnum/errors.hpp"
#include "svgnum/numeric.hpp"
#include "svgnum/ssim.hpp"

namespace svgnum {

namespace {

double component(const std::map<std::string, double>& scores, const char* name,
                 double weight) {
    auto it = scores.find(name);
    if (it == scores.end()) {
        if (weight > 0)
            fail(Errc::MissingComponent, std::string(name) + " required by nonzero weight");
        return 0.0;
    }
    return weight * std::clamp(it->second, 0.0, 1.0);
}

} // namespace

double composite_reward(const std::map<std::string, double>& scores,
                        const RewardWeights& w) {
    if (w.alpha < 0 || w.beta < 0 || w.gamma < 0)
        fail(Errc::BadConfig, "reward weights must be nonnegative");
    return component(scores, kScoreDino, w.alpha) +
           component(scores, kScoreSsim, w.beta) +
           component(scores, kScoreLpips, w.gamma);
}

std::vector<double> grpo_advantages(const std::vector<double>& rewards) {
    if (rewards.size() < 2)
        fail(Errc::GroupTooSmall, "advantages need a group of at least 2");
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= static_cast<double>(rewards.size());
    std::vector<double> adv(rewards.size());
    for (std::size_t i = 0; i < rewards.size(); ++i) adv[i] = rewards[i] - mean;
    return adv;
}

MetricProvider native_ssim_provider() {
    return MetricProvider{kScoreSsim,
                          [](const RasterImage& a, const RasterImage& b) {
                              return ssim(a, b);
                          },
                          true};
}

MetricProvider command_provider(const std::string& name,
                                const std::string& command_template) {
    auto score = [command_template, name](const RasterImage& a, const RasterImage& b) {
        namespace fs = std::filesystem;
        const auto dir = fs::temp_directory_path();
        const auto pid = std::to_string(::getpid());
        const std::string pa = (dir / ("svgnum_" + name + "_" + pid + "_a.pgm")).string();
        const std::string pb = (dir / ("svgnum_" + name + "_" + pid + "_b.pgm")).string();
        write_pgm(a, pa);
        write_pgm(b, pb);

        std::string cmd = command_template;
        auto subst = [&cmd](const std::string& key, const std::string& value) {
            for (std::size_t at; (at = cmd.find(key)) != std::string::npos;)
                cmd.replace(at, key.size(), value);
        };
        subst("{a}", pa);
        subst("{b}", pb);

        FILE* pipe = ::popen(cmd.c_str(), "r");
        if (!pipe) fail(Errc::IoError, "cannot run provider: " + cmd);
        char buf[128];
        std::string out;
        while (std::fgets(buf, sizeof buf, pipe)) out += buf;
        int rc = ::pclose(pipe);
        fs::remove(pa);
        fs::remove(pb);
        if (rc != 0)
            fail(Errc::IoError, "provider " + name + " exited with " + std::to_string(rc));
        auto num = scan_number(out, out.find_first_not_of(" \t\r\n"));
        if (!num)
            fail(Errc::IoError, "provider " + name + " printed no score: \"" + out + "\"");
        return num->value;
    };
    // external processes own their own state; assume serialized use
    return MetricProvider{name, score, false};
}

} // namespace svgnum
