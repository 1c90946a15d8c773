#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psd2code::codecheck {

struct Violation {
  std::string code;          // stable identifier, e.g. "non-integer-coordinate"
  bool is_error = false;     // false => warning
  std::string message;
  std::string element;       // class or element id when known
};

struct Color {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  bool operator==(const Color&) const = default;
};

std::optional<Color> parse_css_color(const std::string& value);

// The layout-relevant declaration subset; unknown properties are reported as
// warnings and dropped.
struct Declarations {
  std::optional<std::string> position;
  std::optional<std::int64_t> top;
  std::optional<std::int64_t> left;
  std::optional<std::int64_t> width;
  std::optional<std::int64_t> height;
  std::optional<int> z_index;
  std::optional<std::string> background_image;  // asset filename (basename)
  std::optional<Color> background_color;
  std::optional<Color> color;
  std::optional<std::int64_t> font_size;
  std::optional<double> opacity;

  void merge_from(const Declarations& other);  // other's set fields win
};

struct StyleRule {
  std::vector<std::string> path;  // kebab-normalized class segments, outermost first
  Declarations decls;
  int order = 0;  // appearance order after flattening
};

struct StyleSheet {
  std::vector<StyleRule> rules;
  std::vector<Violation> violations;

  const StyleRule* find_exact(const std::vector<std::string>& path) const;
};

// Parses class rules with nesting, flattening `.a { .b { ... } }` into the
// descendant selector [a, b]. Class names are normalized to kebab-case (with a
// warning when that changes the spelling). Pixel lengths must be integers;
// fractional values are rounded and reported.
StyleSheet parse_scss(const std::string& text);

}  // namespace psd2code::codecheck
