#include "psd2code/codecheck/validate.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

#include "psd2code/text.hpp"

namespace psd2code::codecheck {

const char* to_string(BoxKind k) {
  switch (k) {
    case BoxKind::image: return "image";
    case BoxKind::text: return "text";
    case BoxKind::container: return "container";
  }
  return "container";
}

// ---------------------------------------------------------------------------
// Dual-code-block extraction

Extraction extract_blocks(const std::string& response) {
  Extraction out;
  struct Block {
    std::string label;
    std::string body;
  };
  std::vector<Block> blocks;
  std::string outside;

  const auto lines = split_lines(response);
  bool in_block = false;
  Block current;
  for (const auto& line : lines) {
    const std::string t = trim(line);
    if (t.rfind("```", 0) == 0) {
      if (!in_block) {
        in_block = true;
        current.label = to_lower_ascii(trim(t.substr(3)));
        current.body.clear();
      } else {
        in_block = false;
        blocks.push_back(current);
      }
      continue;
    }
    if (in_block) {
      current.body += line;
      current.body += '\n';
    } else {
      outside += t;
    }
  }
  if (in_block)
    throw CodeCheckError(CheckErrorKind::syntax, "unterminated fenced code block");

  if (!trim(outside).empty())
    out.violations.push_back({"extra-text", false,
                              "extra explanatory text outside the code blocks", ""});

  bool have_jsx = false;
  bool have_scss = false;
  for (const auto& b : blocks) {
    if (b.label == "jsx") {
      if (have_jsx)
        throw CodeCheckError(CheckErrorKind::protocol_duplicate_block, "duplicate jsx block");
      have_jsx = true;
      out.code.jsx = b.body;
    } else if (b.label == "scss") {
      if (have_scss)
        throw CodeCheckError(CheckErrorKind::protocol_duplicate_block, "duplicate scss block");
      have_scss = true;
      out.code.scss = b.body;
    } else {
      out.violations.push_back({"unexpected-block", false,
                                "unexpected fenced block '" + b.label + "'", b.label});
    }
  }
  if (!have_jsx)
    throw CodeCheckError(CheckErrorKind::protocol_missing_jsx, "response has no jsx block");
  if (!have_scss)
    throw CodeCheckError(CheckErrorKind::protocol_missing_scss, "response has no scss block");
  return out;
}

// ---------------------------------------------------------------------------
// Layout computation

namespace {

std::vector<std::string> normalized_classes(const JsxNode& node) {
  std::vector<std::string> out;
  for (const auto& c : node.class_list()) {
    const std::string k = kebab_case(c);
    out.push_back(k.empty() ? c : k);
  }
  return out;
}

bool segments_match_ancestry(const std::vector<std::string>& path,
                             const std::vector<std::vector<std::string>>& ancestry,
                             const std::vector<std::string>& self) {
  if (path.empty()) return false;
  const auto has = [](const std::vector<std::string>& classes, const std::string& s) {
    return std::find(classes.begin(), classes.end(), s) != classes.end();
  };
  if (!has(self, path.back())) return false;
  // Remaining segments must match distinct ancestors in order (subsequence).
  std::size_t seg = 0;
  const std::size_t need = path.size() - 1;
  for (const auto& anc : ancestry) {
    if (seg == need) break;
    if (has(anc, path[seg])) ++seg;
  }
  return seg == need;
}

struct LayoutWalker {
  const StyleSheet& styles;
  std::vector<LayoutBox> boxes;
  int counter = 0;

  // parent_rect by value: boxes reallocates during recursion.
  void walk(const JsxNode& node, Rect parent_rect,
            std::vector<std::vector<std::string>>& ancestry, int parent_order) {
    const auto classes = normalized_classes(node);

    // Matched rules apply in ascending specificity (selector length), ties in
    // lexicographic path order, so rule-file order never affects the result.
    std::vector<const StyleRule*> matched;
    for (const auto& rule : styles.rules)
      if (segments_match_ancestry(rule.path, ancestry, classes)) matched.push_back(&rule);
    std::sort(matched.begin(), matched.end(), [](const StyleRule* a, const StyleRule* b) {
      if (a->path.size() != b->path.size()) return a->path.size() < b->path.size();
      return a->path < b->path;
    });
    if (!classes.empty() && matched.empty())
      throw CodeCheckError(CheckErrorKind::missing_rule,
                           "no style rule for class '" + classes.front() + "'", node.line,
                           node.column);

    Declarations decls;
    for (const StyleRule* r : matched) decls.merge_from(r->decls);

    const std::int64_t left = decls.left.value_or(0);
    const std::int64_t top = decls.top.value_or(0);
    const std::int64_t width = decls.width.value_or(std::max<std::int64_t>(0, parent_rect.width() - left));
    const std::int64_t height =
        decls.height.value_or(std::max<std::int64_t>(0, parent_rect.height() - top));

    LayoutBox box;
    box.cls = classes.empty() ? "" : classes.front();
    box.rect = make_rect_xywh(parent_rect.left + left, parent_rect.top + top, width, height);
    box.z = decls.z_index.value_or(0);
    box.doc_order = counter++;
    box.parent_order = parent_order;
    box.opacity = decls.opacity.value_or(1.0);
    box.background_color = decls.background_color;
    box.text_color = decls.color.value_or(Color{0, 0, 0, 255});
    box.font_size = decls.font_size.value_or(16);

    std::string asset;
    if (decls.background_image) asset = *decls.background_image;
    if (node.tag == "img") {
      const std::string src = node.attribute("src");
      const std::size_t slash = src.find_last_of("/\\");
      asset = slash == std::string::npos ? src : src.substr(slash + 1);
    }
    if (!asset.empty() || node.tag == "img") {
      box.kind = BoxKind::image;
      box.asset = asset;
    } else if (!node.text.empty()) {
      box.kind = BoxKind::text;
      box.text = node.text;
    } else {
      box.kind = BoxKind::container;
    }

    const int self_order = box.doc_order;
    const Rect self_rect = box.rect;
    boxes.push_back(box);

    ancestry.push_back(classes);
    for (const auto& child : node.children) walk(child, self_rect, ancestry, self_order);
    ancestry.pop_back();
  }
};

}  // namespace

std::vector<LayoutBox> ComputedLayout::leaves() const {
  std::vector<LayoutBox> out;
  for (const auto& b : boxes)
    if (b.kind != BoxKind::container) out.push_back(b);
  return out;
}

ComputedLayout compute_layout(const JsxTree& tree, const StyleSheet& styles,
                              std::int64_t page_width, std::int64_t page_height) {
  LayoutWalker walker{styles, {}, 0};
  std::vector<std::vector<std::string>> ancestry;
  walker.walk(tree.root, make_rect_xywh(0, 0, page_width, page_height), ancestry, -1);
  return ComputedLayout{std::move(walker.boxes)};
}

// ---------------------------------------------------------------------------
// Validation against the design document

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& v : violations)
    if (v.is_error) ++n;
  return n;
}

bool ValidationReport::has_error(const std::string& code) const {
  for (const auto& v : violations)
    if (v.is_error && v.code == code) return true;
  return false;
}

bool ValidationReport::resources_ok() const {
  return syntax_ok && !has_error("unknown-asset") && !has_error("size-drift");
}

namespace {

const char* error_code_for(CheckErrorKind kind) {
  switch (kind) {
    case CheckErrorKind::protocol_missing_jsx: return "missing-jsx";
    case CheckErrorKind::protocol_missing_scss: return "missing-scss";
    case CheckErrorKind::protocol_duplicate_block: return "duplicate-block";
    case CheckErrorKind::syntax: return "syntax";
    case CheckErrorKind::disallowed_attribute: return "disallowed-attribute";
    case CheckErrorKind::disallowed_tag: return "disallowed-tag";
    case CheckErrorKind::missing_rule: return "missing-rule";
  }
  return "syntax";
}

}  // namespace

ValidationReport validate(const GeneratedCode& code, const pipeline::DesignDocument& doc) {
  ValidationReport report;
  report.syntax_ok = true;

  std::optional<JsxTree> tree;
  try {
    tree = parse_jsx(code.jsx);
  } catch (const CodeCheckError& e) {
    report.syntax_ok = false;
    report.violations.push_back({error_code_for(e.kind()), true, e.what(), ""});
  }

  StyleSheet styles;
  try {
    styles = parse_scss(code.scss);
    for (const auto& v : styles.violations) report.violations.push_back(v);
  } catch (const CodeCheckError& e) {
    report.syntax_ok = false;
    report.violations.push_back({error_code_for(e.kind()), true, e.what(), ""});
  }

  if (report.syntax_ok) {
    try {
      report.layout = compute_layout(*tree, styles, doc.page_width, doc.page_height);
    } catch (const CodeCheckError& e) {
      report.syntax_ok = false;
      report.violations.push_back({error_code_for(e.kind()), true, e.what(), ""});
    }
  }
  if (!report.syntax_ok) return report;

  const ComputedLayout& layout = *report.layout;
  std::map<std::string, const assets::AssetRecord*> asset_index;
  for (const auto& a : doc.assets) asset_index[a.file] = &a;

  // Text content is legitimate only where the document has type=text.
  std::map<std::string, int> text_budget;
  const auto doc_leaves = pipeline::leaf_boxes(doc);
  for (const auto& leaf : doc_leaves)
    if (leaf.type == pipeline::ElementType::text) ++text_budget[leaf.text];

  const Rect page = make_rect_xywh(0, 0, doc.page_width, doc.page_height);
  for (const auto& box : layout.boxes) {
    if (!page.contains(box.rect))
      report.violations.push_back({"out-of-bound", true,
                                   "box '" + box.cls + "' extends outside the page", box.cls});
    if (box.kind == BoxKind::image) {
      const auto it = asset_index.find(box.asset);
      if (it == asset_index.end()) {
        report.violations.push_back({"unknown-asset", true,
                                     "image '" + box.cls + "' references unknown asset '" +
                                         box.asset + "'",
                                     box.cls});
      } else if (box.rect.width() != std::int64_t(it->second->width) ||
                 box.rect.height() != std::int64_t(it->second->height)) {
        report.violations.push_back(
            {"size-drift", true,
             "image '" + box.cls + "' is " + std::to_string(box.rect.width()) + "x" +
                 std::to_string(box.rect.height()) + " but asset '" + box.asset + "' is " +
                 std::to_string(it->second->width) + "x" + std::to_string(it->second->height),
             box.cls});
      }
    }
    if (box.kind == BoxKind::text) {
      auto it = text_budget.find(box.text);
      if (it == text_budget.end() || it->second == 0) {
        report.violations.push_back({"hallucinated-text", true,
                                     "text '" + box.text + "' does not appear in the design",
                                     box.cls});
      } else {
        --it->second;
      }
    }
  }

  // Sibling overlap at equal z is suspicious; layered designs with distinct
  // z-index values are fine.
  for (std::size_t i = 0; i < layout.boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.boxes.size(); ++j) {
      const auto& a = layout.boxes[i];
      const auto& b = layout.boxes[j];
      if (a.parent_order != b.parent_order) continue;
      if (a.kind == BoxKind::container || b.kind == BoxKind::container) continue;
      if (a.z != b.z) continue;
      const double v = iou(a.rect, b.rect);
      if (v > 0.5)
        report.violations.push_back({"overlap", false,
                                     "boxes '" + a.cls + "' and '" + b.cls + "' overlap (IoU " +
                                         format_double(v) + ") at equal z",
                                     a.cls});
    }
  }

  // Position deviation per document leaf: greedy best-IoU matching per kind.
  const auto predicted = layout.leaves();
  std::vector<bool> leaf_used(predicted.size(), false);
  struct Pair {
    double iou_v;
    std::size_t doc_i;
    std::size_t pred_i;
  };
  std::vector<Pair> pairs;
  for (std::size_t d = 0; d < doc_leaves.size(); ++d) {
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      const bool doc_is_text = doc_leaves[d].type == pipeline::ElementType::text;
      const bool pred_is_text = predicted[p].kind == BoxKind::text;
      if (doc_is_text != pred_is_text) continue;
      const double v = iou(doc_leaves[d].rect, predicted[p].rect);
      if (v > 0.0) pairs.push_back({v, d, p});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou_v != b.iou_v) return a.iou_v > b.iou_v;
    if (a.doc_i != b.doc_i) return a.doc_i < b.doc_i;
    return a.pred_i < b.pred_i;
  });
  std::vector<bool> doc_used(doc_leaves.size(), false);
  double total_dev = 0.0;
  std::size_t matched = 0;
  for (const auto& pr : pairs) {
    if (doc_used[pr.doc_i] || leaf_used[pr.pred_i]) continue;
    doc_used[pr.doc_i] = true;
    leaf_used[pr.pred_i] = true;
    const std::int64_t dev = std::llabs(doc_leaves[pr.doc_i].rect.left - predicted[pr.pred_i].rect.left) +
                             std::llabs(doc_leaves[pr.doc_i].rect.top - predicted[pr.pred_i].rect.top);
    report.position_deviation[doc_leaves[pr.doc_i].id] = dev;
    total_dev += double(dev);
    ++matched;
  }
  report.mean_position_deviation = matched == 0 ? 0.0 : total_dev / double(matched);
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

std::string validation_report_to_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["syntax_ok"] = report.syntax_ok;
  j["error_count"] = report.error_count();
  j["resources_ok"] = report.resources_ok();
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json jv;
    jv["code"] = v.code;
    jv["severity"] = v.is_error ? "error" : "warning";
    jv["message"] = v.message;
    if (!v.element.empty()) jv["element"] = v.element;
    violations.push_back(std::move(jv));
  }
  j["violations"] = std::move(violations);
  if (report.layout) {
    auto boxes = nlohmann::ordered_json::array();
    for (const auto& b : report.layout->boxes) {
      nlohmann::ordered_json jb;
      jb["class"] = b.cls;
      jb["x"] = b.rect.left;
      jb["y"] = b.rect.top;
      jb["width"] = b.rect.width();
      jb["height"] = b.rect.height();
      jb["z"] = b.z;
      jb["kind"] = to_string(b.kind);
      if (!b.asset.empty()) jb["asset"] = b.asset;
      if (b.kind == BoxKind::text) jb["text"] = b.text;
      boxes.push_back(std::move(jb));
    }
    j["layout"] = std::move(boxes);
  }
  auto dev = nlohmann::ordered_json::object();
  for (const auto& [id, v] : report.position_deviation) dev[id] = v;
  j["position_deviation"] = std::move(dev);
  j["mean_position_deviation"] = report.mean_position_deviation;
  j["used_fallback_glyph"] = report.used_fallback_glyph;
  return j.dump(2) + "\n";
}

}  // namespace psd2code::codecheck
