#include "svgnum/ssim.hpp"

#include <cmath>
#include <vector>

#include "svgnum/errors.hpp"

namespace svgnum {

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(size);
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        w[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

double ssim_impl(const RasterImage& a, const RasterImage& b, const SsimConfig& cfg,
                 bool parallel) {
    if (a.width != b.width || a.height != b.height)
        fail(Errc::DimensionMismatch, "image sizes differ");
    if (cfg.window < 3 || cfg.window % 2 == 0)
        fail(Errc::TooSmall, "window must be odd and >= 3");
    if (a.width < cfg.window || a.height < cfg.window)
        fail(Errc::TooSmall, "images smaller than the SSIM window");

    const int W = a.width, H = a.height;
    const int r = cfg.window / 2;
    const auto win = gaussian_window(cfg.window, cfg.gaussian_sigma);
    const double c1 = (cfg.k1 * cfg.dynamic_range) * (cfg.k1 * cfg.dynamic_range);
    const double c2 = (cfg.k2 * cfg.dynamic_range) * (cfg.k2 * cfg.dynamic_range);

    // horizontal pass over the five moment planes
    const std::size_t plane = static_cast<std::size_t>(W) * H;
    std::vector<double> hx(plane), hy(plane), hxx(plane), hyy(plane), hxy(plane);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int y = 0; y < H; ++y) {
        const double* pa = a.pixels.data() + static_cast<std::size_t>(y) * W;
        const double* pb = b.pixels.data() + static_cast<std::size_t>(y) * W;
        for (int x = r; x < W - r; ++x) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (int j = -r; j <= r; ++j) {
                const double w = win[j + r];
                const double va = pa[x + j], vb = pb[x + j];
                sx += w * va;
                sy += w * vb;
                sxx += w * va * va;
                syy += w * vb * vb;
                sxy += w * va * vb;
            }
            const std::size_t i = static_cast<std::size_t>(y) * W + x;
            hx[i] = sx;
            hy[i] = sy;
            hxx[i] = sxx;
            hyy[i] = syy;
            hxy[i] = sxy;
        }
    }

    // vertical pass + local SSIM, one partial sum per row so the final
    // reduction order never depends on the thread count
    std::vector<double> row_sum(H, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int y = r; y < H - r; ++y) {
        double acc = 0.0;
        for (int x = r; x < W - r; ++x) {
            double ux = 0, uy = 0, uxx = 0, uyy = 0, uxy = 0;
            for (int j = -r; j <= r; ++j) {
                const double w = win[j + r];
                const std::size_t i = static_cast<std::size_t>(y + j) * W + x;
                ux += w * hx[i];
                uy += w * hy[i];
                uxx += w * hxx[i];
                uyy += w * hyy[i];
                uxy += w * hxy[i];
            }
            const double vx = uxx - ux * ux;
            const double vy = uyy - uy * uy;
            const double vxy = uxy - ux * uy;
            acc += ((2 * ux * uy + c1) * (2 * vxy + c2)) /
                   ((ux * ux + uy * uy + c1) * (vx + vy + c2));
        }
        row_sum[y] = acc;
    }
    (void)parallel;

    double total = 0.0;
    for (int y = r; y < H - r; ++y) total += row_sum[y];
    return total / (static_cast<double>(W - 2 * r) * (H - 2 * r));
}

} // namespace

double ssim(const RasterImage& a, const RasterImage& b, const SsimConfig& cfg) {
    return ssim_impl(a, b, cfg, true);
}

double ssim_serial(const RasterImage& a, const RasterImage& b, const SsimConfig& cfg) {
    return ssim_impl(a, b, cfg, false);
}

} // namespace svgnum
