#pragma once

#include "svgnum/raster.hpp"

namespace svgnum {

struct SsimConfig {
    int window = 11;
    double gaussian_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

// Mean local SSIM over Gaussian-weighted windows that lie fully inside both
// images (the classic Wang et al. setup: C1=(k1*L)^2, C2=(k2*L)^2, weighted
// moments without sample correction). Result is 1.0 for identical images.
// Throws DimensionMismatch / TooSmall.
double ssim(const RasterImage& a, const RasterImage& b, const SsimConfig& cfg = {});

// Reference implementation; bitwise identical to ssim() by construction.
double ssim_serial(const RasterImage& a, const RasterImage& b, const SsimConfig& cfg = {});

} // namespace svgnum
