#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psd2code/assets/assets.hpp"
#include "psd2code/pipeline/config.hpp"
#include "psd2code/pipeline/document.hpp"
#include "psd2code/psd/types.hpp"

namespace psd2code::pipeline {

struct Removal {
  std::string layer_name;
  std::string reason;
};

// Drops hidden, near-transparent, undersized and default-named layers,
// recursively; groups left without children are dropped too.
psd::RawDesignInput filter_layers(const psd::RawDesignInput& input, const FilterConfig& cfg,
                                  std::vector<Removal>* removal_log = nullptr);

// Clips every bounds rectangle to the page, removes layers whose clipped area
// is zero, and recomputes group bounds from surviving children.
psd::RawDesignInput normalize_coordinates(const psd::RawDesignInput& input,
                                          std::vector<Removal>* removal_log = nullptr);

struct GroupStats {
  int pixel_count = 0;
  int text_count = 0;
  int group_count = 0;
  Rect union_bbox;      // union of direct pixel children, clipped to the group bbox
  double coverage = 0.0;
  std::optional<std::size_t> best_candidate;  // index of largest-area pixel child
};

GroupStats compute_group_stats(const psd::LayerNode& group);

struct FoldDecision {
  bool fold = false;
  Rect adopted;  // best candidate's bounds when fold is true
};

// The dual-layer group decision: fold into an image iff
//  (a) pixel_count >= 1 and coverage >= fold_coverage,
//  (b) no text children,
//  (c) the name carries no structural keyword,
//  (d) pixel_count <= max_pixel_candidates or coverage >= fold_coverage_strict,
//  (e) if the name carries a container keyword or there are nested groups,
//      coverage >= fold_coverage_strict and the name carries a background keyword.
FoldDecision classify_group(const psd::LayerNode& group, const GroupStats& stats,
                            const FilterConfig& cfg);

struct TextDecision {
  bool as_image = false;
  std::string asset;  // filename when as_image
};

// Resource-oriented text classification: exact asset-stem match first, then
// preset lookup for short (<=3 chars) or specially formatted (<=10 chars) text.
TextDecision classify_text(const psd::LayerNode& layer,
                           const std::vector<assets::AssetRecord>& assets,
                           const PresetLibrary& preset, const FilterConfig& cfg);

// Applies classification in container -> text -> image priority, assigns ids
// and z hints, removes empty containers and enforces the depth bound.
// Expects filtered + normalized input. Throws DocumentError when nothing survives.
DesignDocument build_document(const psd::RawDesignInput& input, const FilterConfig& cfg,
                              const std::vector<assets::AssetRecord>& assets,
                              const PresetLibrary& preset);

enum class FindingSeverity { error, warning };

struct Finding {
  std::string code;  // "empty-container" | "out-of-bound" | "overlap"
  FindingSeverity severity = FindingSeverity::warning;
  std::string message;
  std::string element_id;
};

std::vector<Finding> consistency_check(const DesignDocument& doc);

}  // namespace psd2code::pipeline
