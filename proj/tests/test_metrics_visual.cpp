#include <doctest.h>

#include <cmath>
#include <random>

#include "psd2code/metrics/metrics.hpp"
#include "support/test_support.hpp"

using namespace psd2code;
using metrics::MetricConfig;
using raster::RasterImage;

TEST_CASE("mse basics") {
  const auto black = RasterImage::solid(8, 8, 0, 0, 0);
  const auto white = RasterImage::solid(8, 8, 255, 255, 255);
  CHECK(metrics::mse(black, black) == 0.0);
  CHECK(metrics::mse(black, white) == doctest::Approx(65025.0));
  CHECK_THROWS_AS(metrics::mse(black, RasterImage::solid(4, 4, 0, 0, 0)), metrics::MetricError);
}

TEST_CASE("mse ignores alpha") {
  auto a = RasterImage::solid(4, 4, 10, 20, 30, 255);
  auto b = RasterImage::solid(4, 4, 10, 20, 30, 0);
  CHECK(metrics::mse(a, b) == 0.0);
}

TEST_CASE("psnr closed forms") {
  MetricConfig cfg;
  const auto black = RasterImage::solid(8, 8, 0, 0, 0);
  const auto white = RasterImage::solid(8, 8, 255, 255, 255);
  CHECK(metrics::psnr(black, black, cfg) == doctest::Approx(99.0));  // cap at zero error
  CHECK(metrics::psnr(black, white, cfg) == doctest::Approx(0.0));

  // Exactly 1% of the channel samples differ by 255: mse = 650.25 -> 20 dB.
  RasterImage a = RasterImage::solid(10, 10, 0, 0, 0);
  RasterImage b = a;
  b.at(0, 0)[0] = 255;
  b.at(0, 1)[0] = 255;
  b.at(0, 2)[0] = 255;
  CHECK(metrics::mse(a, b) == doctest::Approx(650.25));
  CHECK(metrics::psnr(a, b, cfg) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("psnr/mse consistency on random pairs") {
  std::mt19937_64 rng(7);
  MetricConfig cfg;
  for (int iter = 0; iter < 20; ++iter) {
    const auto a = test_support::random_image(rng, 16, 16);
    const auto b = test_support::random_image(rng, 16, 16);
    const double m = metrics::mse(a, b);
    CHECK(metrics::psnr(a, b, cfg) ==
          doctest::Approx(10.0 * std::log10(255.0 * 255.0 / m)).epsilon(1e-12));
  }
}

TEST_CASE("ssim identity and closed-form extremes") {
  MetricConfig cfg;
  std::mt19937_64 rng(9);
  const auto img = test_support::random_image(rng, 16, 16);
  CHECK(metrics::ssim(img, img, cfg) == doctest::Approx(1.0).epsilon(1e-9));

  const auto black = RasterImage::solid(16, 16, 0, 0, 0);
  const auto white = RasterImage::solid(16, 16, 255, 255, 255);
  const double c1 = cfg.ssim.c1();
  CHECK(metrics::ssim(black, white, cfg) ==
        doctest::Approx(c1 / (255.0 * 255.0 + c1)).epsilon(1e-9));

  CHECK_THROWS_AS(metrics::ssim(RasterImage::solid(8, 8, 0, 0, 0),
                                RasterImage::solid(8, 8, 0, 0, 0), cfg),
                  metrics::MetricError);
}

TEST_CASE("mse and ssim match the brute-force oracles on random pairs") {
  std::mt19937_64 rng(20260811);
  MetricConfig cfg;
  for (int iter = 0; iter < 30; ++iter) {
    const auto a = test_support::random_image(rng, 16, 16);
    const auto b = test_support::random_image(rng, 16, 16);
    CHECK(metrics::mse(a, b) == doctest::Approx(test_support::naive_mse(a, b)).epsilon(1e-12));
    CHECK(metrics::ssim(a, b, cfg) ==
          doctest::Approx(test_support::naive_ssim(a, b, cfg)).epsilon(1e-9));
  }
}

TEST_CASE("visual metrics are symmetric") {
  std::mt19937_64 rng(13);
  MetricConfig cfg;
  const auto a = test_support::random_image(rng, 16, 16);
  const auto b = test_support::random_image(rng, 16, 16);
  CHECK(metrics::mse(a, b) == metrics::mse(b, a));
  CHECK(metrics::ssim(a, b, cfg) == doctest::Approx(metrics::ssim(b, a, cfg)).epsilon(1e-12));
}

TEST_CASE("align_images leaves equal dimensions untouched") {
  std::mt19937_64 rng(15);
  const auto a = test_support::random_image(rng, 20, 30);
  const auto b = test_support::random_image(rng, 20, 30);
  const auto pair = metrics::align_images(a, b);
  CHECK_FALSE(pair.resized);
  CHECK(pair.generated == a);
}

TEST_CASE("align_images upsamples by integer factors as exact block replication") {
  std::mt19937_64 rng(16);
  const auto small = test_support::random_image(rng, 39, 88);
  const auto reference = RasterImage::solid(78, 176, 0, 0, 0);
  const auto pair = metrics::align_images(small, reference);
  CHECK(pair.resized);
  REQUIRE(pair.generated.width == 78);
  REQUIRE(pair.generated.height == 176);
  for (std::uint32_t y = 0; y < 176; ++y)
    for (std::uint32_t x = 0; x < 78; ++x)
      for (int c = 0; c < 4; ++c)
        CHECK(pair.generated.at(x, y)[c] == small.at(x / 2, y / 2)[c]);
}

TEST_CASE("align_images preserves constant images under non-integer scaling") {
  const auto small = RasterImage::solid(30, 31, 90, 60, 30);
  const auto reference = RasterImage::solid(101, 57, 0, 0, 0);
  const auto pair = metrics::align_images(small, reference);
  CHECK(pair.resized);
  for (std::uint32_t y = 0; y < pair.generated.height; ++y)
    for (std::uint32_t x = 0; x < pair.generated.width; ++x) {
      CHECK(pair.generated.at(x, y)[0] == 90);
      CHECK(pair.generated.at(x, y)[1] == 60);
      CHECK(pair.generated.at(x, y)[2] == 30);
    }
}
