#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psd2code/codecheck/validate.hpp"
#include "psd2code/pipeline/document.hpp"
#include "psd2code/raster/image.hpp"

namespace psd2code::metrics {

class MetricError : public std::runtime_error {
 public:
  explicit MetricError(const std::string& what) : std::runtime_error(what) {}
};

struct SsimConfig {
  int window = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

struct MetricConfig {
  SsimConfig ssim;
  double psnr_cap_db = 99.0;
  double codebleu_ngram_weight = 0.25;
  double codebleu_weighted_ngram_weight = 0.25;
  double codebleu_ast_weight = 0.25;
  double codebleu_dataflow_weight = 0.25;
  double keyword_weight = 5.0;
  std::vector<std::string> keyword_list = {
      "position", "absolute", "background-image", "background-color", "z-index", "className",
      "div",      "span",     "img",              "p",                "width",   "height",
      "top",      "left",     "url",              "font-size",        "color",   "opacity"};
  std::vector<double> iou_thresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                        0.75, 0.80, 0.85, 0.90, 0.95};
  double area_small = 32.0 * 32.0;
  double area_medium = 96.0 * 96.0;
};

// --- Visual metrics (alpha ignored; images must share dimensions) ---

double mse(const raster::RasterImage& a, const raster::RasterImage& b);
double psnr(const raster::RasterImage& a, const raster::RasterImage& b,
            const MetricConfig& cfg = {});
double ssim(const raster::RasterImage& a, const raster::RasterImage& b,
            const MetricConfig& cfg = {});

struct AlignedPair {
  raster::RasterImage generated;
  raster::RasterImage reference;
  bool resized = false;
};

// Resamples generated to the reference dimensions when they differ: exact
// block replication for integer upscale factors, bilinear otherwise.
AlignedPair align_images(const raster::RasterImage& generated, const raster::RasterImage& reference);

raster::RasterImage resample(const raster::RasterImage& src, std::uint32_t w, std::uint32_t h);

// --- Code metrics ---

// Weighted combination of token n-gram precision, keyword-weighted n-grams,
// shallow AST subtree overlap and className->selector edge overlap; computed
// on the jsx and scss sides separately and averaged. Non-parsing candidates
// score the n-gram terms only.
double codebleu(const codecheck::GeneratedCode& candidate, const codecheck::GeneratedCode& reference,
                const MetricConfig& cfg = {});

// Line-based similarity 2M/(|A|+|B|) where M is the total length of matched
// blocks found by recursive longest-common-block matching after trimming.
double traditional_similarity(const std::string& candidate, const std::string& reference);

// --- Layout metrics ---

struct LayoutMetrics {
  double map = 0.0;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
  std::map<double, double> per_threshold;
};

// F-measure-form average precision (all detections share confidence 1.0) with
// greedy one-to-one IoU matching, averaged over IoU thresholds and element
// classes; the area strata restrict ground truth and report only when populated.
LayoutMetrics layout_map(const codecheck::ComputedLayout& predicted,
                         const pipeline::DesignDocument& truth, const MetricConfig& cfg = {});

}  // namespace psd2code::metrics
