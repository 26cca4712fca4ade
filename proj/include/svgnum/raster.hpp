#pragma once

#include <array>
#include <string>
#include <vector>

#include "svgnum/document.hpp"

namespace svgnum {

// Grayscale image, row-major luminance in [0,1] (1 = white background).
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct Polyline {
    std::vector<std::array<double, 2>> points;
    bool closed = false;
};

// Resolves relative commands and curves into polylines: Beziers are split
// until the control polygon sits within `tolerance` of the chord, arcs are
// converted to cubic segments of at most 90 degrees first. Z closes the
// running subpath.
std::vector<Polyline> flatten_path(const std::vector<PathCommand>& commands,
                                   double tolerance);

// Scanline coverage fill of the viewBox onto a width x height grid.
// 4 subsample rows per pixel row with exact horizontal span coverage; fills
// honor per-path fill-rule; paths composite in document order over a white
// background. Deterministic for a given document and size.
// Throws Error{RenderFailure} for degenerate viewBox or sizes.
RasterImage rasterize(const SvgDocument& doc, int width, int height); // OpenMP rows
RasterImage rasterize_serial(const SvgDocument& doc, int width, int height);

// Luminance of a fill color (black/white/#rgb/#rrggbb); nullopt for "none".
// Unrecognized colors render as black ink (the dialect is monochrome).
std::optional<double> fill_luminance(const std::string& color);

// 8-bit binary PGM (P5).
void write_pgm(const RasterImage& img, const std::string& path);
RasterImage read_pgm(const std::string& path);

} // namespace svgnum
