#include "psd2code/codecheck/scss.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "psd2code/codecheck/jsx.hpp"
#include "psd2code/text.hpp"

namespace psd2code::codecheck {

void Declarations::merge_from(const Declarations& other) {
  if (other.position) position = other.position;
  if (other.top) top = other.top;
  if (other.left) left = other.left;
  if (other.width) width = other.width;
  if (other.height) height = other.height;
  if (other.z_index) z_index = other.z_index;
  if (other.background_image) background_image = other.background_image;
  if (other.background_color) background_color = other.background_color;
  if (other.color) color = other.color;
  if (other.font_size) font_size = other.font_size;
  if (other.opacity) opacity = other.opacity;
}

const StyleRule* StyleSheet::find_exact(const std::vector<std::string>& path) const {
  for (const auto& r : rules)
    if (r.path == path) return &r;
  return nullptr;
}

namespace {

std::optional<int> hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return std::nullopt;
}

std::optional<Color> parse_hex_color(const std::string& s) {
  const std::string h = s.substr(1);
  auto byte_at = [&](std::size_t i) -> std::optional<std::uint8_t> {
    const auto hi = hex_nibble(h[i]);
    const auto lo = hex_nibble(h[i + 1]);
    if (!hi || !lo) return std::nullopt;
    return std::uint8_t((*hi << 4) | *lo);
  };
  if (h.size() == 3 || h.size() == 4) {
    Color c;
    std::uint8_t v[4] = {0, 0, 0, 255};
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto n = hex_nibble(h[i]);
      if (!n) return std::nullopt;
      v[i] = std::uint8_t(*n * 17);
    }
    c.r = v[0]; c.g = v[1]; c.b = v[2]; c.a = v[3];
    return c;
  }
  if (h.size() == 6 || h.size() == 8) {
    Color c;
    auto r = byte_at(0), g = byte_at(2), b = byte_at(4);
    if (!r || !g || !b) return std::nullopt;
    c.r = *r; c.g = *g; c.b = *b;
    if (h.size() == 8) {
      auto a = byte_at(6);
      if (!a) return std::nullopt;
      c.a = *a;
    }
    return c;
  }
  return std::nullopt;
}

std::optional<Color> parse_rgb_func(const std::string& s) {
  const std::size_t open = s.find('(');
  const std::size_t close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close <= open) return std::nullopt;
  std::vector<double> parts;
  std::string cur;
  for (std::size_t i = open + 1; i <= close; ++i) {
    const char c = s[i];
    if (c == ',' || c == ')') {
      const std::string t = trim(cur);
      if (t.empty()) return std::nullopt;
      char* end = nullptr;
      parts.push_back(std::strtod(t.c_str(), &end));
      if (end == t.c_str()) return std::nullopt;
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
  auto clamp_byte = [](double v) {
    return std::uint8_t(std::min(255.0, std::max(0.0, std::round(v))));
  };
  Color c;
  c.r = clamp_byte(parts[0]);
  c.g = clamp_byte(parts[1]);
  c.b = clamp_byte(parts[2]);
  c.a = parts.size() == 4 ? std::uint8_t(std::min(255.0, std::max(0.0, std::round(parts[3] * 255.0))))
                          : 255;
  return c;
}

const std::map<std::string, Color>& named_colors() {
  static const std::map<std::string, Color> colors = {
      {"transparent", {0, 0, 0, 0}}, {"white", {255, 255, 255, 255}}, {"black", {0, 0, 0, 255}},
      {"red", {255, 0, 0, 255}},     {"green", {0, 128, 0, 255}},     {"blue", {0, 0, 255, 255}},
      {"yellow", {255, 255, 0, 255}}, {"gray", {128, 128, 128, 255}}, {"grey", {128, 128, 128, 255}},
      {"orange", {255, 165, 0, 255}}, {"purple", {128, 0, 128, 255}}, {"pink", {255, 192, 203, 255}},
      {"cyan", {0, 255, 255, 255}},  {"magenta", {255, 0, 255, 255}},
  };
  return colors;
}

}  // namespace

std::optional<Color> parse_css_color(const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) return std::nullopt;
  if (v[0] == '#') return parse_hex_color(v);
  const std::string lower = to_lower_ascii(v);
  if (lower.rfind("rgb", 0) == 0) return parse_rgb_func(v);
  const auto it = named_colors().find(lower);
  if (it != named_colors().end()) return it->second;
  return std::nullopt;
}

namespace {

std::string normalize_class(const std::string& s, std::vector<Violation>& violations) {
  const std::string kebab = kebab_case(s);
  if (kebab.empty()) return s;
  if (kebab != s)
    violations.push_back({"class-normalized", false,
                          "class '" + s + "' normalized to '" + kebab + "'", s});
  return kebab;
}

class ScssParser {
 public:
  ScssParser(const std::string& s, StyleSheet& sheet) : s_(s), sheet_(sheet) {}

  void run() {
    parse_block({{}}, /*top_level=*/true, /*discard=*/false);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw CodeCheckError(CheckErrorKind::syntax, "scss:" + std::to_string(line_) + ":" +
                                                     std::to_string(col_) + ": " + msg,
                         line_, col_);
  }

  void warn(const std::string& code, const std::string& msg, const std::string& element = "") {
    sheet_.violations.push_back({code, false, msg, element});
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }

  char advance() {
    const char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!eof() && peek() != '\n') advance();
        continue;
      }
      if (peek() == '/' && peek(1) == '*') {
        advance();
        advance();
        while (!eof() && !(peek() == '*' && peek(1) == '/')) advance();
        if (eof()) fail("unterminated comment");
        advance();
        advance();
        continue;
      }
      return;
    }
  }

  // Reads raw text until one of '{', ';', '}' at nesting level 0 of parens.
  // Returns the stop character without consuming it.
  char read_prelude(std::string& out) {
    int parens = 0;
    bool in_string = false;
    char quote = 0;
    for (;;) {
      if (eof()) return '\0';
      const char c = peek();
      if (in_string) {
        out.push_back(advance());
        if (c == '\\' && !eof()) {
          out.push_back(advance());
          continue;
        }
        if (c == quote) in_string = false;
        continue;
      }
      if (c == '"' || c == '\'') {
        in_string = true;
        quote = c;
        out.push_back(advance());
        continue;
      }
      if (c == '(') ++parens;
      if (c == ')') --parens;
      if (parens == 0 && (c == '{' || c == ';' || c == '}')) return c;
      if (c == '/' && (peek(1) == '/' || peek(1) == '*')) {
        skip_ws_and_comments();
        out.push_back(' ');
        continue;
      }
      out.push_back(advance());
    }
  }

  // Splits a selector prelude on commas into class-segment paths. Unsupported
  // parts (element selectors, pseudo-classes, '&', ids) produce a warning and
  // are dropped.
  std::vector<std::vector<std::string>> parse_selector(const std::string& prelude) {
    std::vector<std::vector<std::string>> out;
    std::string part;
    std::vector<std::string> parts;
    for (char c : prelude + ",") {
      if (c == ',') {
        const std::string t = trim(part);
        if (!t.empty()) parts.push_back(t);
        part.clear();
      } else {
        part.push_back(c);
      }
    }
    for (const auto& sel : parts) {
      std::vector<std::string> segments;
      bool ok = true;
      std::string token;
      for (std::size_t i = 0; i <= sel.size(); ++i) {
        const char c = i < sel.size() ? sel[i] : ' ';
        if (std::isspace(static_cast<unsigned char>(c))) {
          if (!token.empty()) {
            if (token[0] != '.' || token.size() < 2) {
              ok = false;
              break;
            }
            const std::string body = token.substr(1);
            if (body.find_first_of(".:#&>+~[") != std::string::npos) {
              ok = false;
              break;
            }
            segments.push_back(normalize_class(body, sheet_.violations));
            token.clear();
          }
        } else {
          token.push_back(c);
        }
      }
      if (ok && !segments.empty()) {
        out.push_back(std::move(segments));
      } else {
        warn("unsupported-selector", "selector '" + sel + "' is outside the supported dialect", sel);
      }
    }
    return out;
  }

  void parse_block(const std::vector<std::vector<std::string>>& parents, bool top_level,
                   bool discard) {
    for (;;) {
      skip_ws_and_comments();
      if (eof()) {
        if (!top_level) fail("unexpected end of input inside a block");
        return;
      }
      if (peek() == '}') {
        if (top_level) fail("unmatched '}'");
        advance();
        return;
      }
      std::string prelude;
      const char stop = read_prelude(prelude);
      if (stop == '\0') {
        if (trim(prelude).empty() && top_level) return;
        fail("unexpected end of input");
      }
      if (stop == '{') {
        advance();  // consume '{'
        std::vector<std::vector<std::string>> child_paths;
        const std::string p = trim(prelude);
        if (!p.empty() && p[0] == '@') {
          warn("unsupported-selector", "at-rule '" + p + "' ignored", p);
        } else {
          for (const auto& own : parse_selector(p))
            for (const auto& parent : parents.empty() ? std::vector<std::vector<std::string>>{{}}
                                                      : parents) {
              std::vector<std::string> joined = parent;
              joined.insert(joined.end(), own.begin(), own.end());
              child_paths.push_back(std::move(joined));
            }
        }
        parse_block(child_paths, false, discard || child_paths.empty());
        continue;
      }
      // Declaration (stop is ';' or '}')
      if (stop == ';') advance();
      const std::string decl = trim(prelude);
      if (decl.empty()) continue;
      if (!discard) handle_declaration(decl, parents);
    }
  }

  void handle_declaration(const std::string& decl, const std::vector<std::vector<std::string>>& paths) {
    const std::size_t colon = decl.find(':');
    if (colon == std::string::npos) {
      warn("bad-declaration", "declaration without ':': '" + decl + "'");
      return;
    }
    const std::string prop = to_lower_ascii(trim(decl.substr(0, colon)));
    const std::string value = trim(decl.substr(colon + 1));
    if (prop.empty() || value.empty()) {
      warn("bad-declaration", "malformed declaration '" + decl + "'");
      return;
    }
    if (prop[0] == '$') {
      warn("scss-variable", "variable '" + prop + "' ignored");
      return;
    }

    Declarations d;
    if (prop == "position") {
      d.position = to_lower_ascii(value);
      if (*d.position != "absolute")
        warn("non-absolute", "position '" + value + "' breaks the absolute layout model");
    } else if (prop == "top") {
      d.top = parse_px(value, prop);
    } else if (prop == "left") {
      d.left = parse_px(value, prop);
    } else if (prop == "width") {
      d.width = parse_px(value, prop);
    } else if (prop == "height") {
      d.height = parse_px(value, prop);
    } else if (prop == "font-size") {
      d.font_size = parse_px(value, prop);
    } else if (prop == "z-index") {
      char* end = nullptr;
      const long v = std::strtol(value.c_str(), &end, 10);
      if (end == value.c_str()) {
        warn("bad-value", "z-index '" + value + "' is not an integer");
      } else {
        d.z_index = int(v);
      }
    } else if (prop == "opacity") {
      char* end = nullptr;
      const double v = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || v < 0.0 || v > 1.0) {
        warn("bad-value", "opacity '" + value + "' is outside [0,1]");
      } else {
        d.opacity = v;
      }
    } else if (prop == "background-image") {
      auto url = extract_url(value);
      if (!url) {
        warn("bad-value", "background-image '" + value + "' is not a url()");
      } else {
        d.background_image = *url;
      }
    } else if (prop == "background-color" || prop == "color") {
      const auto c = parse_css_color(value);
      if (!c) {
        warn("bad-color", prop + " '" + value + "' is not a recognized color");
      } else if (prop == "color") {
        d.color = c;
      } else {
        d.background_color = c;
      }
    } else {
      warn("unknown-property", "property '" + prop + "' is not part of the layout model");
      return;
    }

    for (const auto& path : paths) {
      if (path.empty()) {
        warn("top-level-declaration", "declaration '" + prop + "' outside any rule");
        continue;
      }
      StyleRule* rule = find_or_add(path);
      rule->decls.merge_from(d);
    }
  }

  std::optional<std::int64_t> parse_px(const std::string& value, const std::string& prop) {
    std::string v = to_lower_ascii(trim(value));
    if (v.size() > 2 && v.substr(v.size() - 2) == "px") v = trim(v.substr(0, v.size() - 2));
    char* end = nullptr;
    const double num = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
      warn("non-pixel-length", prop + " '" + value + "' is not a pixel length");
      return std::nullopt;
    }
    if (num != std::floor(num)) {
      warn("non-integer-coordinate", prop + " '" + value + "' is not an integer pixel value");
      return std::int64_t(std::llround(num));
    }
    return std::int64_t(num);
  }

  std::optional<std::string> extract_url(const std::string& value) {
    const std::string lower = to_lower_ascii(value);
    const std::size_t at = lower.find("url(");
    if (at == std::string::npos) return std::nullopt;
    const std::size_t close = value.find(')', at);
    if (close == std::string::npos) return std::nullopt;
    std::string inner = trim(value.substr(at + 4, close - at - 4));
    if (inner.size() >= 2 && (inner.front() == '"' || inner.front() == '\'')) {
      const char q = inner.front();
      if (inner.back() != q) return std::nullopt;
      std::string raw = inner.substr(1, inner.size() - 2);
      std::string unescaped;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
        unescaped.push_back(raw[i]);
      }
      inner = unescaped;
    }
    const std::size_t slash = inner.find_last_of("/\\");
    if (slash != std::string::npos) inner = inner.substr(slash + 1);
    if (inner.empty()) return std::nullopt;
    return inner;
  }

  StyleRule* find_or_add(const std::vector<std::string>& path) {
    for (auto& r : sheet_.rules)
      if (r.path == path) return &r;
    StyleRule rule;
    rule.path = path;
    rule.order = int(sheet_.rules.size());
    sheet_.rules.push_back(std::move(rule));
    return &sheet_.rules.back();
  }

  const std::string& s_;
  StyleSheet& sheet_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

StyleSheet parse_scss(const std::string& text) {
  StyleSheet sheet;
  ScssParser parser(text, sheet);
  parser.run();
  return sheet;
}

}  // namespace psd2code::codecheck
