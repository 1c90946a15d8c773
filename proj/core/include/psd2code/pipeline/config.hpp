#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace psd2code::pipeline {

// Layer filtering / classification thresholds. The numeric defaults are the
// shipped configuration; everything is overridable from the run config file.
struct FilterConfig {
  double min_opacity = 0.05;      // below this a layer counts as transparent
  double min_area = 16.0;         // px^2
  std::int64_t min_side = 2;      // px
  std::vector<std::string> default_name_patterns = {
      "^Layer \\d+$", "^Group \\d+$", "^图层 \\d+$", "^组 \\d+$", "copy$"};
  double fold_coverage = 0.85;
  double fold_coverage_strict = 0.95;
  int max_pixel_candidates = 2;
  std::vector<std::string> background_keywords = {"bg", "background", "背景", "底"};
  std::vector<std::string> structural_keywords = {"mask", "overlay", "蒙版", "遮罩"};
  std::vector<std::string> container_keywords = {"group", "container", "list", "模块", "栏"};
  int max_depth = 6;
  // Text of this shape with <= 10 characters is routed through the preset
  // library even when longer than the 3-character short-text bound.
  std::string special_format_pattern = "^[[:digit:][:punct:][:space:]]+$";
};

// Semantic resource library: text content -> asset filename. Loaded from a
// UTF-8 JSON object file; the shipped default is empty.
using PresetLibrary = std::map<std::string, std::string>;

PresetLibrary load_preset_library(const std::string& json_text);

}  // namespace psd2code::pipeline
