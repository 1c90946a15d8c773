#include "psd2code/codecheck/jsx.hpp"

#include <array>
#include <cctype>
#include <cstdlib>

#include "psd2code/text.hpp"

namespace psd2code::codecheck {

namespace {

const std::array<const char*, 10> kAllowedTags = {"div", "span", "img", "p",  "h1",
                                                  "h2",  "h3",   "h4",  "h5", "h6"};
const std::array<const char*, 3> kAllowedAttributes = {"className", "src", "alt"};

bool tag_allowed(const std::string& tag) {
  for (const char* t : kAllowedTags)
    if (tag == t) return true;
  return false;
}

bool attribute_allowed(const std::string& name) {
  for (const char* a : kAllowedAttributes)
    if (name == a) return true;
  return false;
}

std::string decode_entities(const std::string& s, int line, int col) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string::npos || semi - i > 12)
      throw CodeCheckError(CheckErrorKind::syntax, "unterminated entity", line, col);
    const std::string name = s.substr(i + 1, semi - i - 1);
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (!name.empty() && name[0] == '#') {
      const long cp = std::strtol(name.c_str() + 1, nullptr, 10);
      if (cp <= 0 || cp > 0x10FFFF)
        throw CodeCheckError(CheckErrorKind::syntax, "bad numeric entity &" + name + ";", line, col);
      out += codepoints_to_utf8({std::uint32_t(cp)});
    } else {
      throw CodeCheckError(CheckErrorKind::syntax, "unknown entity &" + name + ";", line, col);
    }
    i = semi;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  JsxNode parse_document() {
    skip_ws();
    if (eof() || peek() != '<') fail("expected an element");
    JsxNode root = parse_element();
    skip_ws();
    if (!eof()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw CodeCheckError(CheckErrorKind::syntax, "jsx:" + std::to_string(line_) + ":" +
                                                     std::to_string(col_) + ": " + msg,
                         line_, col_);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

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

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool consume(char c) {
    if (eof() || peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) fail(std::string("expected '") + c + "' (" + what + ")");
  }

  std::string identifier() {
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-' || peek() == '_'))
      out.push_back(advance());
    if (out.empty()) fail("expected an identifier");
    return out;
  }

  JsxNode parse_element() {
    const int el_line = line_;
    const int el_col = col_;
    expect('<', "element open");
    JsxNode node;
    node.line = el_line;
    node.column = el_col;
    node.tag = identifier();
    if (!tag_allowed(node.tag))
      throw CodeCheckError(CheckErrorKind::disallowed_tag, "tag <" + node.tag + "> is not allowed",
                           el_line, el_col);

    // Attributes
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated element");
      if (peek() == '/' || peek() == '>') break;
      const int at_line = line_;
      const int at_col = col_;
      const std::string name = identifier();
      skip_ws();
      expect('=', "attribute value");
      skip_ws();
      if (!eof() && peek() == '{')
        throw CodeCheckError(CheckErrorKind::disallowed_attribute,
                             "expression value for attribute '" + name + "'", at_line, at_col);
      if (eof() || (peek() != '"' && peek() != '\'')) fail("attribute value must be quoted");
      const char quote = advance();
      std::string raw;
      while (!eof() && peek() != quote) {
        if (peek() == '<') fail("'<' inside attribute value");
        raw.push_back(advance());
      }
      if (eof()) fail("unterminated attribute value");
      advance();  // closing quote
      if (!attribute_allowed(name))
        throw CodeCheckError(CheckErrorKind::disallowed_attribute,
                             "attribute '" + name + "' is not allowed", at_line, at_col);
      node.attributes.emplace_back(name, decode_entities(raw, at_line, at_col));
    }

    if (consume('/')) {
      expect('>', "self-closing element");
      return node;
    }
    expect('>', "element open");

    // Content: text runs and child elements until the matching close tag.
    for (;;) {
      if (eof()) fail("missing </" + node.tag + ">");
      if (peek() == '<') {
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
          advance();  // <
          advance();  // /
          const std::string closing = identifier();
          if (closing != node.tag) fail("mismatched closing tag </" + closing + ">");
          skip_ws();
          expect('>', "closing tag");
          return node;
        }
        node.children.push_back(parse_element());
        continue;
      }
      const int t_line = line_;
      const int t_col = col_;
      std::string run;
      while (!eof() && peek() != '<') {
        if (peek() == '{')
          throw CodeCheckError(CheckErrorKind::syntax, "expressions in text are not allowed",
                               line_, col_);
        if (peek() == '}')
          throw CodeCheckError(CheckErrorKind::syntax, "stray '}' in text", line_, col_);
        run.push_back(advance());
      }
      const std::string cleaned = trim(decode_entities(run, t_line, t_col));
      if (!cleaned.empty()) {
        if (!node.text.empty()) node.text.push_back(' ');
        node.text += cleaned;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string JsxNode::attribute(const std::string& name) const {
  for (const auto& [k, v] : attributes)
    if (k == name) return v;
  return "";
}

std::vector<std::string> JsxNode::class_list() const {
  std::vector<std::string> out;
  const std::string cls = attribute("className");
  std::string cur;
  for (char c : cls) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

JsxTree parse_jsx(const std::string& text) {
  Parser p(text);
  return JsxTree{p.parse_document()};
}

std::string encode_jsx_text(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '{': out += "&#123;"; break;
      case '}': out += "&#125;"; break;
      default: out.push_back(c); break;
    }
  }
  return out;
}

}  // namespace psd2code::codecheck
