#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "psd2code/codecheck/validate.hpp"
#include "psd2code/metrics/metrics.hpp"
#include "psd2code/pipeline/document.hpp"
#include "psd2code/raster/image.hpp"

namespace test_support {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

psd2code::raster::RasterImage random_image(std::mt19937_64& rng, std::uint32_t w, std::uint32_t h);

// Baseline JPEG bytes via libjpeg, for decoder and dimension-probe fixtures.
std::vector<std::uint8_t> encode_jpeg(const psd2code::raster::RasterImage& img, int quality = 90);

// Brute-force references, deliberately written as direct loops over the
// definitions rather than sharing any code with the implementations.
double naive_mse(const psd2code::raster::RasterImage& a, const psd2code::raster::RasterImage& b);
double naive_ssim(const psd2code::raster::RasterImage& a, const psd2code::raster::RasterImage& b,
                  const psd2code::metrics::MetricConfig& cfg);

// Simpson quadrature of the regularized incomplete beta (x strictly inside
// (0,1)); the independent route for p-value cross-checks.
double quadrature_incomplete_beta(double x, double a, double b);

// Converts the document's own leaf boxes into a ComputedLayout, for
// truth-vs-truth layout metric checks.
psd2code::codecheck::ComputedLayout layout_from_document(const psd2code::pipeline::DesignDocument& doc);

}  // namespace test_support
