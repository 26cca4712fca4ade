#pragma once

#include <functional>
#include <optional>

#include "svgnum/document.hpp"
#include "svgnum/raster.hpp"

namespace svgnum {

struct CanvasConfig {
    double canvas_bound = 512.0; // M
    double ssim_threshold = 0.99;
    int precision = 3;
};

enum class FilterReason { Ok, OutOfBounds, LowSsim, ParseFailure };

const char* filter_reason_name(FilterReason r);

struct FilterVerdict {
    bool accepted = false;
    FilterReason reason = FilterReason::ParseFailure;
    std::optional<double> ssim;
    std::optional<double> max_abs_value;
};

// Largest |value| over absolute-resolved path coordinates (control points
// included, relative commands resolved against the running current point),
// arc radii, stroke-widths and the four viewBox entries. Arc rotation angles
// and flags do not scale, so they do not participate.
double max_abs_numeric(const SvgDocument& doc);

// Largest |value| over every literal the canonical serialization emits
// (relative deltas stay relative here), each rounded to `precision` first.
// This is the quantity the canvas-bound gate inspects: a document whose
// absolute geometry fits can still emit an oversized relative delta.
double max_abs_emitted(const SvgDocument& doc, int precision);

// Multiplies every coordinate, length (arc radii included), stroke-width,
// width/height and viewBox entry by s; arc rotations and flags unchanged.
SvgDocument apply_scale(const SvgDocument& doc, double s);

struct NormalizeResult {
    SvgDocument doc;
    double scale = 1.0;
};

// Global scaling onto the [-M, M]^2 canvas: s = M / max_abs_numeric(doc).
// Throws Error{DegenerateDocument} when every scalable numeric is zero.
NormalizeResult normalize_to_canvas(const SvgDocument& doc, const CanvasConfig& cfg);

using Renderer = std::function<RasterImage(const SvgDocument&)>;

// Acceptance gate: OutOfBounds when any emitted literal still exceeds M
// after rounding, LowSsim when the renders of original and normalized score
// below the threshold, ParseFailure when either fails to render.
FilterVerdict filter_check(const SvgDocument& original, const SvgDocument& normalized,
                           const CanvasConfig& cfg, const Renderer& renderer);

} // namespace svgnum
