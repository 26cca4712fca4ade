#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "svgnum/raster.hpp"

namespace svgnum {

struct RewardWeights {
    double alpha = 0.4; // DINOv2 similarity
    double beta = 0.3;  // SSIM
    double gamma = 0.3; // LPIPS'
};

inline constexpr const char* kScoreDino = "dinov2_sim";
inline constexpr const char* kScoreSsim = "ssim";
inline constexpr const char* kScoreLpips = "lpips_prime";

// alpha*dino + beta*ssim + gamma*lpips', each component clamped to [0,1]
// first. A component may be absent only when its weight is zero; otherwise
// Error{MissingComponent}.
double composite_reward(const std::map<std::string, double>& scores,
                        const RewardWeights& w);

// A_i = R_i - mean(R). Throws Error{GroupTooSmall} for fewer than 2 samples.
std::vector<double> grpo_advantages(const std::vector<double>& rewards);

// A perceptual scorer: (ground truth, prediction) -> similarity, clamped to
// [0,1] by the harness before weighting. Providers that cannot run
// concurrently set thread_safe = false and the harness serializes them.
struct MetricProvider {
    std::string name; // ssim | lpips_prime | dinov2_sim
    std::function<double(const RasterImage&, const RasterImage&)> score;
    bool thread_safe = true;
};

MetricProvider native_ssim_provider();

// External scorer process: the command template is run per pair with {a} and
// {b} replaced by 8-bit PGM file paths; it must print one decimal in [0,1].
MetricProvider command_provider(const std::string& name, const std::string& command_template);

} // namespace svgnum
