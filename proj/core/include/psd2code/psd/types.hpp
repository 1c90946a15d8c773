#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "psd2code/geometry.hpp"

namespace psd2code::psd {

struct PsdHeader {
  std::uint32_t width = 0;   // 1..30000
  std::uint32_t height = 0;  // 1..30000
  std::uint16_t channels = 4;
  std::uint16_t bit_depth = 8;
  std::uint16_t color_mode = 3;  // 3 = RGB
};

enum class LayerKind { pixel, text, group };

const char* to_string(LayerKind k);

struct LayerNode {
  std::string name;
  Rect bounds;          // signed pixel coordinates, bottom >= top, right >= left
  double opacity = 1.0; // raw byte / 255
  bool visible = true;
  LayerKind kind = LayerKind::pixel;
  std::string text_content;        // kind == text only; may be empty if unrecoverable
  std::vector<LayerNode> children; // kind == group only, bottom-most first
};

enum class SourceKind { psd_binary, layer_dump };

struct RawDesignInput {
  PsdHeader header;
  std::vector<LayerNode> roots;  // document z-order, bottom-most first
  std::string source_path;
  SourceKind source_kind = SourceKind::psd_binary;
  std::vector<std::string> notes;  // parse log: skipped blocks, oddities
};

enum class PsdErrorCode {
  bad_signature,
  unsupported_version,
  unsupported_mode,
  truncated,
  malformed_dividers,
  malformed,
  parse_error,  // layer-dump text format
  io_error,
};

class PsdError : public std::runtime_error {
 public:
  PsdError(PsdErrorCode code, const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(message), code_(code), line_(line), column_(column) {}

  PsdErrorCode code() const { return code_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  PsdErrorCode code_;
  int line_;
  int column_;
};

std::size_t count_layers(const std::vector<LayerNode>& roots);
std::size_t max_depth(const std::vector<LayerNode>& roots);

}  // namespace psd2code::psd
