#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psd2code/codecheck/jsx.hpp"
#include "psd2code/codecheck/scss.hpp"
#include "psd2code/geometry.hpp"
#include "psd2code/pipeline/document.hpp"

namespace psd2code::codecheck {

struct GeneratedCode {
  std::string jsx;
  std::string scss;
  std::string source_digest;  // prompt digest
  std::string backend;        // backend label
};

struct Extraction {
  GeneratedCode code;
  std::vector<Violation> violations;  // protocol warnings (extra text, stray blocks)
};

// Enforces the dual-code-block protocol: exactly one fenced jsx block and one
// fenced scss block. Content outside the fences is a warning; a missing or
// duplicated block throws CodeCheckError.
Extraction extract_blocks(const std::string& response);

enum class BoxKind { image, text, container };

const char* to_string(BoxKind k);

struct LayoutBox {
  std::string cls;  // primary (first) class, empty for classless elements
  Rect rect;        // absolute page coordinates
  int z = 0;
  BoxKind kind = BoxKind::container;
  std::string asset;  // background-image / img src filename
  std::string text;
  int doc_order = 0;
  int parent_order = -1;
  // Style carried through for the renderer.
  double opacity = 1.0;
  std::optional<Color> background_color;
  Color text_color{0, 0, 0, 255};
  std::int64_t font_size = 16;
};

struct ComputedLayout {
  std::vector<LayoutBox> boxes;  // pre-order

  std::vector<LayoutBox> leaves() const;  // image/text boxes only
};

// Absolute-positioning layout model: every box is offset from its parent's
// origin by (left, top); a box without declared size spans the remainder of
// its parent. Throws CodeCheckError(missing_rule) when a classed element
// matches no rule.
ComputedLayout compute_layout(const JsxTree& tree, const StyleSheet& styles,
                              std::int64_t page_width, std::int64_t page_height);

struct ValidationReport {
  bool syntax_ok = false;
  std::vector<Violation> violations;
  std::optional<ComputedLayout> layout;  // present iff syntax_ok
  std::map<std::string, std::int64_t> position_deviation;  // doc element id -> |dx|+|dy|
  double mean_position_deviation = 0.0;
  bool used_fallback_glyph = false;  // filled by the renderer, carried in reports

  std::size_t error_count() const;
  bool has_error(const std::string& code) const;
  bool resources_ok() const;  // no unknown-asset / size-drift errors
};

// Runs parse + layout and the hard-constraint checks against the aligned
// document. Total: all failures are report entries.
ValidationReport validate(const GeneratedCode& code, const pipeline::DesignDocument& doc);

// Stable-field-order JSON for validation.json.
std::string validation_report_to_json(const ValidationReport& report);

}  // namespace psd2code::codecheck
