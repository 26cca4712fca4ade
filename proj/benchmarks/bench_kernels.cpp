// Kernel benchmark: times the OpenMP rasterizer, SSIM and batch-gradient
// kernels against their serial reference implementations on the shipped
// corpus and verifies the outputs agree bitwise.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "svgnum/document.hpp"
#include "svgnum/number_codec.hpp"
#include "svgnum/raster.hpp"
#include "svgnum/ssim.hpp"
#include "svgnum/svgfloat.hpp"

using namespace svgnum;
namespace fs = std::filesystem;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::vector<SvgDocument> load_corpus(std::size_t limit) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(fs::path(SVGNUM_SOURCE_DIR) / "data" / "corpus"))
        if (e.path().extension() == ".svg") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.size() > limit) files.resize(limit);
    std::vector<SvgDocument> docs;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::ostringstream ss;
        ss << in.rdbuf();
        docs.push_back(parse_svg(ss.str()));
    }
    return docs;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    auto docs = load_corpus(40);
    std::printf("corpus: %zu documents\n\n", docs.size());

    // rasterize
    const int size = 512;
    double t0 = now_ms();
    std::vector<RasterImage> serial_imgs;
    for (const auto& d : docs) serial_imgs.push_back(rasterize_serial(d, size, size));
    double t_serial = now_ms() - t0;

    t0 = now_ms();
    std::vector<RasterImage> par_imgs;
    for (const auto& d : docs) par_imgs.push_back(rasterize(d, size, size));
    double t_par = now_ms() - t0;

    bool match = true;
    for (std::size_t i = 0; i < docs.size(); ++i)
        match = match && (serial_imgs[i].pixels == par_imgs[i].pixels);
    std::printf("rasterize %dx%d   serial %8.1f ms   parallel %8.1f ms   %.2fx   %s\n",
                size, size, t_serial, t_par, t_serial / t_par,
                match ? "bitwise equal" : "MISMATCH");

    // ssim over consecutive pairs
    t0 = now_ms();
    double acc_serial = 0;
    for (std::size_t i = 0; i + 1 < par_imgs.size(); ++i)
        acc_serial += ssim_serial(par_imgs[i], par_imgs[i + 1]);
    t_serial = now_ms() - t0;

    t0 = now_ms();
    double acc_par = 0;
    for (std::size_t i = 0; i + 1 < par_imgs.size(); ++i)
        acc_par += ssim(par_imgs[i], par_imgs[i + 1]);
    t_par = now_ms() - t0;
    std::printf("ssim %dx%d        serial %8.1f ms   parallel %8.1f ms   %.2fx   %s\n",
                size, size, t_serial, t_par, t_serial / t_par,
                acc_serial == acc_par ? "bitwise equal" : "MISMATCH");

    // autoencoder batch gradient (chunked accumulation keeps both paths
    // bitwise identical; compare one-thread vs all-thread wall time)
    std::vector<double> values;
    Rng rng(1);
    for (int i = 0; i < 512; ++i) values.push_back(rng.uniform(-1, 1));
    auto params = make_codec(16, 32, 512.0, 0.0, 7);

#ifdef _OPENMP
    int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    t0 = now_ms();
    BatchGrad g1;
    for (int r = 0; r < 20; ++r) g1 = autoencoder_batch_grad(params, values);
    t_serial = now_ms() - t0;
#ifdef _OPENMP
    omp_set_num_threads(max_threads);
#endif
    t0 = now_ms();
    BatchGrad g2;
    for (int r = 0; r < 20; ++r) g2 = autoencoder_batch_grad(params, values);
    t_par = now_ms() - t0;
    std::printf("batch gradient    serial %8.1f ms   parallel %8.1f ms   %.2fx   %s\n",
                t_serial, t_par, t_serial / t_par,
                (g1.loss == g2.loss && g1.grad == g2.grad) ? "bitwise equal" : "MISMATCH");

    // codec throughput for context
    t0 = now_ms();
    std::size_t bytes = 0;
    for (const auto& d : docs) bytes += encode(d, FloatKind::F16).size();
    double t_enc = now_ms() - t0;
    t0 = now_ms();
    for (const auto& d : docs) (void)decode(encode(d, FloatKind::F16));
    double t_dec = now_ms() - t0;
    std::printf("\nsvgfloat f16: %zu bytes, encode %.1f ms, encode+decode %.1f ms\n",
                bytes, t_enc, t_dec);
    return 0;
}
