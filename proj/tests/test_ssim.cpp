#include <cmath>

#include <doctest.h>
#include <json.hpp>

#include "svgnum/errors.hpp"
#include "svgnum/number_codec.hpp"
#include "svgnum/ssim.hpp"
#include "test_support.hpp"

using namespace svgnum;

namespace {

RasterImage noise_image(int w, int h, std::uint64_t seed) {
    RasterImage img;
    img.width = w;
    img.height = h;
    Rng rng(seed);
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (double& v : img.pixels) v = rng.uniform();
    return img;
}

} // namespace

TEST_CASE("ssim of an image with itself is 1") {
    auto img = noise_image(64, 48, 1);
    CHECK(std::fabs(ssim(img, img) - 1.0) <= 1e-9);

    RasterImage flat;
    flat.width = flat.height = 32;
    flat.pixels.assign(32 * 32, 0.37);
    CHECK(std::fabs(ssim(flat, flat) - 1.0) <= 1e-9);
}

TEST_CASE("ssim symmetry and range") {
    auto a = noise_image(48, 48, 2);
    auto b = noise_image(48, 48, 3);
    double s1 = ssim(a, b);
    double s2 = ssim(b, a);
    CHECK(std::fabs(s1 - s2) <= 1e-12);
    CHECK(s1 >= -1.0);
    CHECK(s1 <= 1.0);
    CHECK(s1 < 0.5); // unrelated noise scores low
}

TEST_CASE("ssim errors") {
    auto a = noise_image(32, 32, 4);
    auto b = noise_image(16, 32, 4);
    CHECK_THROWS_AS((void)ssim(a, b), Error);
    auto tiny = noise_image(8, 8, 5);
    CHECK_THROWS_AS((void)ssim(tiny, tiny), Error);
    SsimConfig even;
    even.window = 10;
    CHECK_THROWS_AS((void)ssim(a, a, even), Error);
}

TEST_CASE("ssim matches the scikit-image reference scores within 1e-4") {
    auto dir = testsup::source_dir() / "data" / "fixtures" / "ssim";
    auto scores = nlohmann::json::parse(testsup::read_file(dir / "scores.json"));
    REQUIRE(scores.size() == 10);
    for (const auto& rec : scores) {
        int i = rec.at("pair").get<int>();
        CAPTURE(i);
        char name[32];
        std::snprintf(name, sizeof name, "pair_%02d", i);
        auto a = read_pgm((dir / (std::string(name) + "_a.pgm")).string());
        auto b = read_pgm((dir / (std::string(name) + "_b.pgm")).string());
        double mine = ssim(a, b);
        CHECK(std::fabs(mine - rec.at("ssim").get<double>()) <= 1e-4);
    }
}

TEST_CASE("parallel ssim is bitwise identical to serial") {
    auto a = noise_image(96, 96, 6);
    auto b = noise_image(96, 96, 7);
    CHECK(ssim(a, b) == ssim_serial(a, b));

    auto dir = testsup::source_dir() / "data" / "fixtures" / "ssim";
    auto x = read_pgm((dir / "pair_01_a.pgm").string());
    auto y = read_pgm((dir / "pair_01_b.pgm").string());
    CHECK(ssim(x, y) == ssim_serial(x, y));
}
