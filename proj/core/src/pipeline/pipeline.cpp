#include "psd2code/pipeline/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>

#include "psd2code/text.hpp"

namespace psd2code::pipeline {

using psd::LayerKind;
using psd::LayerNode;
using psd::RawDesignInput;

PresetLibrary load_preset_library(const std::string& json_text) {
  PresetLibrary lib;
  const auto j = nlohmann::json::parse(json_text);
  if (!j.is_object()) throw DocumentError("preset library must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) lib[it.key()] = it.value().get<std::string>();
  return lib;
}

// ---------------------------------------------------------------------------
// Filtering

namespace {

std::vector<std::regex> compile_patterns(const std::vector<std::string>& patterns) {
  std::vector<std::regex> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
  return out;
}

bool matches_any(const std::string& s, const std::vector<std::regex>& res) {
  for (const auto& re : res)
    if (std::regex_search(s, re)) return true;
  return false;
}

bool contains_keyword(const std::string& name, const std::vector<std::string>& keywords) {
  for (const auto& k : keywords)
    if (contains_ci(name, k)) return true;
  return false;
}

void log_removal(std::vector<Removal>* log, const std::string& name, const char* reason) {
  if (log) log->push_back({name, reason});
}

void log_subtree(std::vector<Removal>* log, const LayerNode& node, const char* reason) {
  log_removal(log, node.name, reason);
  for (const auto& c : node.children) log_subtree(log, c, reason);
}

std::vector<LayerNode> filter_nodes(const std::vector<LayerNode>& nodes, const FilterConfig& cfg,
                                    const std::vector<std::regex>& name_res,
                                    std::vector<Removal>* log) {
  std::vector<LayerNode> out;
  for (const auto& node : nodes) {
    if (!node.visible) {
      log_subtree(log, node, "hidden");
      continue;
    }
    if (node.opacity < cfg.min_opacity) {
      log_subtree(log, node, "near-transparent");
      continue;
    }
    if (node.kind != LayerKind::group &&
        (node.bounds.area() < cfg.min_area || node.bounds.width() < cfg.min_side ||
         node.bounds.height() < cfg.min_side)) {
      log_removal(log, node.name, "too-small");
      continue;
    }
    if (matches_any(node.name, name_res)) {
      log_subtree(log, node, "system-default name");
      continue;
    }
    LayerNode kept = node;
    if (node.kind == LayerKind::group) {
      kept.children = filter_nodes(node.children, cfg, name_res, log);
      if (kept.children.empty()) {
        log_removal(log, node.name, "empty group");
        continue;
      }
    }
    out.push_back(std::move(kept));
  }
  return out;
}

}  // namespace

RawDesignInput filter_layers(const RawDesignInput& input, const FilterConfig& cfg,
                             std::vector<Removal>* removal_log) {
  RawDesignInput out = input;
  const auto name_res = compile_patterns(cfg.default_name_patterns);
  out.roots = filter_nodes(input.roots, cfg, name_res, removal_log);
  return out;
}

// ---------------------------------------------------------------------------
// Coordinate normalization

namespace {

std::vector<LayerNode> normalize_nodes(const std::vector<LayerNode>& nodes, const Rect& page,
                                       std::vector<Removal>* log) {
  std::vector<LayerNode> out;
  for (const auto& node : nodes) {
    LayerNode kept = node;
    kept.bounds = node.bounds.intersect(page);
    if (node.kind == LayerKind::group) {
      kept.children = normalize_nodes(node.children, page, log);
      if (kept.children.empty()) {
        log_removal(log, node.name, "fully out of bounds");
        continue;
      }
      Rect u = kept.children.front().bounds;
      for (const auto& c : kept.children) u = u.union_with(c.bounds);
      kept.bounds = u;
    } else if (kept.bounds.empty()) {
      log_removal(log, node.name, "fully out of bounds");
      continue;
    }
    out.push_back(std::move(kept));
  }
  return out;
}

}  // namespace

RawDesignInput normalize_coordinates(const RawDesignInput& input, std::vector<Removal>* removal_log) {
  RawDesignInput out = input;
  const Rect page{0, 0, std::int64_t(input.header.height), std::int64_t(input.header.width)};
  out.roots = normalize_nodes(input.roots, page, removal_log);
  return out;
}

// ---------------------------------------------------------------------------
// Group classification

GroupStats compute_group_stats(const LayerNode& group) {
  GroupStats stats;
  Rect uni{0, 0, 0, 0};
  bool first = true;
  double best_area = -1.0;
  for (std::size_t i = 0; i < group.children.size(); ++i) {
    const auto& c = group.children[i];
    switch (c.kind) {
      case LayerKind::pixel: {
        ++stats.pixel_count;
        uni = first ? c.bounds : uni.union_with(c.bounds);
        first = false;
        if (c.bounds.area() > best_area) {
          best_area = c.bounds.area();
          stats.best_candidate = i;
        }
        break;
      }
      case LayerKind::text: ++stats.text_count; break;
      case LayerKind::group: ++stats.group_count; break;
    }
  }
  stats.union_bbox = uni.intersect(group.bounds);
  const double group_area = group.bounds.area();
  stats.coverage =
      (stats.pixel_count == 0 || group_area <= 0.0) ? 0.0 : stats.union_bbox.area() / group_area;
  return stats;
}

FoldDecision classify_group(const LayerNode& group, const GroupStats& stats,
                            const FilterConfig& cfg) {
  FoldDecision decision;
  const bool a = stats.pixel_count >= 1 && stats.coverage >= cfg.fold_coverage;
  const bool b = stats.text_count == 0;
  const bool c = !contains_keyword(group.name, cfg.structural_keywords);
  const bool d =
      stats.pixel_count <= cfg.max_pixel_candidates || stats.coverage >= cfg.fold_coverage_strict;
  const bool container_semantics =
      contains_keyword(group.name, cfg.container_keywords) || stats.group_count >= 1;
  const bool e = !container_semantics ||
                 (stats.coverage >= cfg.fold_coverage_strict &&
                  contains_keyword(group.name, cfg.background_keywords));
  if (a && b && c && d && e && stats.best_candidate) {
    decision.fold = true;
    decision.adopted = group.children[*stats.best_candidate].bounds;
  }
  return decision;
}

TextDecision classify_text(const LayerNode& layer, const std::vector<assets::AssetRecord>& assets,
                           const PresetLibrary& preset, const FilterConfig& cfg) {
  for (const auto& a : assets) {
    if (file_stem(a.file) == layer.name) return {true, a.file};
  }
  const std::size_t len = utf8_length(layer.text_content);
  bool preset_eligible = len > 0 && len <= 3;
  if (!preset_eligible && len <= 10 && !layer.text_content.empty()) {
    const std::regex special(cfg.special_format_pattern, std::regex::ECMAScript);
    preset_eligible = std::regex_match(layer.text_content, special);
  }
  if (preset_eligible) {
    const auto it = preset.find(layer.text_content);
    if (it != preset.end()) return {true, it->second};
  }
  return {false, ""};
}

// ---------------------------------------------------------------------------
// Document construction

namespace {

struct Builder {
  const FilterConfig& cfg;
  const std::vector<assets::AssetRecord>& assets;
  const PresetLibrary& preset;

  std::vector<ElementNode> transform(const std::vector<LayerNode>& nodes) {
    std::vector<ElementNode> out;
    for (const auto& node : nodes) {
      auto e = transform_one(node);
      if (e) out.push_back(std::move(*e));
    }
    return out;
  }

  std::optional<ElementNode> transform_one(const LayerNode& node) {
    ElementNode e;
    e.name = node.name;
    e.opacity = node.opacity;
    set_rect(e, node.bounds);
    switch (node.kind) {
      case LayerKind::group: {
        const GroupStats stats = compute_group_stats(node);
        const FoldDecision decision = classify_group(node, stats, cfg);
        if (decision.fold) {
          e.type = ElementType::image;
          set_rect(e, decision.adopted);
          return e;
        }
        e.type = ElementType::container;
        e.children = transform(node.children);
        if (e.children.empty()) return std::nullopt;
        return e;
      }
      case LayerKind::text: {
        const TextDecision decision = classify_text(node, assets, preset, cfg);
        if (decision.as_image) {
          e.type = ElementType::image;
          e.asset_ref = decision.asset;
        } else {
          e.type = ElementType::text;
          e.text_content = node.text_content;
        }
        return e;
      }
      case LayerKind::pixel: {
        e.type = ElementType::image;
        return e;
      }
    }
    return std::nullopt;
  }

  static void set_rect(ElementNode& e, const Rect& r) {
    e.x = r.left;
    e.y = r.top;
    e.width = r.width();
    e.height = r.height();
  }
};

// Containers at the depth limit dissolve: their children are re-parented one
// level up, keeping absolute positions, so no node ends up deeper than max_depth.
std::vector<ElementNode> enforce_depth(std::vector<ElementNode> nodes, int depth, int max_depth) {
  std::vector<ElementNode> out;
  for (auto& node : nodes) {
    if (node.type == ElementType::container) {
      if (depth >= max_depth) {
        auto hoisted = enforce_depth(std::move(node.children), depth, max_depth);
        for (auto& h : hoisted) out.push_back(std::move(h));
        continue;
      }
      node.children = enforce_depth(std::move(node.children), depth + 1, max_depth);
      if (node.children.empty()) continue;
    }
    out.push_back(std::move(node));
  }
  return out;
}

void assign_ids(std::vector<ElementNode>& nodes, int& counter) {
  for (auto& n : nodes) {
    n.z_hint = counter;
    n.id = "e" + std::to_string(counter + 1);
    ++counter;
    assign_ids(n.children, counter);
  }
}

}  // namespace

DesignDocument build_document(const RawDesignInput& input, const FilterConfig& cfg,
                              const std::vector<assets::AssetRecord>& assets,
                              const PresetLibrary& preset) {
  DesignDocument doc;
  doc.page_width = std::int64_t(input.header.width);
  doc.page_height = std::int64_t(input.header.height);

  Builder builder{cfg, assets, preset};
  doc.elements = builder.transform(input.roots);
  doc.elements = enforce_depth(std::move(doc.elements), 1, cfg.max_depth);
  if (doc.elements.empty()) throw DocumentError("degenerate document: no elements survive");

  int counter = 0;
  assign_ids(doc.elements, counter);
  return doc;
}

// ---------------------------------------------------------------------------
// Consistency checks

namespace {

void check_node(const ElementNode& e, const DesignDocument& doc, std::vector<Finding>& findings) {
  if (e.type == ElementType::container && e.children.empty())
    findings.push_back({"empty-container", FindingSeverity::error,
                        "container '" + e.id + "' has no children", e.id});
  if (e.x < 0 || e.y < 0 || e.width < 0 || e.height < 0 || e.x + e.width > doc.page_width ||
      e.y + e.height > doc.page_height)
    findings.push_back({"out-of-bound", FindingSeverity::error,
                        "element '" + e.id + "' extends outside the page", e.id});

  for (std::size_t i = 0; i < e.children.size(); ++i) {
    for (std::size_t j = i + 1; j < e.children.size(); ++j) {
      const auto& a = e.children[i];
      const auto& b = e.children[j];
      if (a.type == ElementType::container || b.type == ElementType::container) continue;
      const double v = iou(a.rect(), b.rect());
      if (v > 0.5)
        findings.push_back({"overlap", FindingSeverity::warning,
                            "elements '" + a.id + "' and '" + b.id + "' overlap (IoU " +
                                format_double(v) + ")",
                            a.id});
    }
  }
  for (const auto& c : e.children) check_node(c, doc, findings);
}

}  // namespace

std::vector<Finding> consistency_check(const DesignDocument& doc) {
  std::vector<Finding> findings;
  for (const auto& e : doc.elements) check_node(e, doc, findings);
  // Root siblings get the same leaf-overlap treatment as container children.
  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.elements.size(); ++j) {
      const auto& a = doc.elements[i];
      const auto& b = doc.elements[j];
      if (a.type == ElementType::container || b.type == ElementType::container) continue;
      const double v = iou(a.rect(), b.rect());
      if (v > 0.5)
        findings.push_back({"overlap", FindingSeverity::warning,
                            "elements '" + a.id + "' and '" + b.id + "' overlap (IoU " +
                                format_double(v) + ")",
                            a.id});
    }
  }
  return findings;
}

}  // namespace psd2code::pipeline
