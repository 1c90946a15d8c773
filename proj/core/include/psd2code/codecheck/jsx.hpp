#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psd2code::codecheck {

enum class CheckErrorKind {
  protocol_missing_jsx,
  protocol_missing_scss,
  protocol_duplicate_block,
  syntax,
  disallowed_attribute,
  disallowed_tag,
  missing_rule,
};

class CodeCheckError : public std::runtime_error {
 public:
  CodeCheckError(CheckErrorKind kind, const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(message), kind_(kind), line_(line), column_(column) {}

  CheckErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  CheckErrorKind kind_;
  int line_;
  int column_;
};

// Restricted JSX dialect: div/span/img/p/h1-h6, string attributes drawn from
// {className, src, alt}, entity-encoded text, no expressions or handlers.
struct JsxNode {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // concatenated non-whitespace text runs, entities decoded
  std::vector<JsxNode> children;
  int line = 0;
  int column = 0;

  std::string attribute(const std::string& name) const;
  std::vector<std::string> class_list() const;  // className split on whitespace
};

struct JsxTree {
  JsxNode root;
};

JsxTree parse_jsx(const std::string& text);

// Escapes &, <, >, { and } so arbitrary text survives the dialect.
std::string encode_jsx_text(const std::string& text);

}  // namespace psd2code::codecheck
