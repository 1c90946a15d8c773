#include "psd2code/psd/reader.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include "psd2code/bytes.hpp"
#include "psd2code/io.hpp"
#include "psd2code/text.hpp"

namespace psd2code::psd {

namespace {

constexpr std::uint8_t kHiddenFlag = 0x02;  // flags bit 1

struct RawRecord {
  LayerNode node;
  int divider = 0;  // lsct value: 0 none, 1/2 folder open/closed, 3 bounding divider
  bool bounds_zero = false;
};

[[noreturn]] void fail(PsdErrorCode code, const std::string& msg) { throw PsdError(code, msg); }

Rect union_of_children(const std::vector<LayerNode>& children) {
  Rect u{0, 0, 0, 0};
  bool first = true;
  for (const auto& c : children) {
    if (first) {
      u = c.bounds;
      first = false;
    } else {
      u = u.union_with(c.bounds);
    }
  }
  return u;
}

// Best-effort text extraction from a type-tool block: looks for the
// descriptor item  00 00 00 00 'Txt ' 'TEXT' <u32 units> <UTF-16BE>.
std::string extract_type_tool_text(const std::string& block) {
  static const std::string marker = std::string("\0\0\0\0", 4) + "Txt TEXT";
  const std::size_t at = block.find(marker);
  if (at == std::string::npos) return "";
  std::size_t p = at + marker.size();
  if (p + 4 > block.size()) return "";
  const auto* b = reinterpret_cast<const std::uint8_t*>(block.data());
  const std::uint32_t units = (std::uint32_t(b[p]) << 24) | (std::uint32_t(b[p + 1]) << 16) |
                              (std::uint32_t(b[p + 2]) << 8) | b[p + 3];
  p += 4;
  if (p + std::size_t(units) * 2 > block.size()) return "";
  return utf16be_to_utf8(b + p, std::size_t(units) * 2);
}

RawRecord read_layer_record(ByteReader& r, std::vector<std::string>& notes) {
  RawRecord rec;
  const std::int32_t top = r.i32();
  const std::int32_t left = r.i32();
  const std::int32_t bottom = r.i32();
  const std::int32_t right = r.i32();
  if (bottom < top || right < left)
    fail(PsdErrorCode::malformed, "layer record with inverted bounds");
  rec.node.bounds = Rect{top, left, bottom, right};
  rec.bounds_zero = (top == 0 && left == 0 && bottom == 0 && right == 0);

  const std::uint16_t channel_count = r.u16();
  if (channel_count > 64) fail(PsdErrorCode::malformed, "implausible channel count");
  for (std::uint16_t c = 0; c < channel_count; ++c) {
    r.i16();  // channel id
    r.u32();  // channel data length (consumed later with the image data section)
  }

  if (r.bytes(4) != "8BIM") fail(PsdErrorCode::malformed, "bad blend-mode signature");
  r.bytes(4);  // blend key
  rec.node.opacity = double(r.u8()) / 255.0;
  r.u8();  // clipping
  const std::uint8_t flags = r.u8();
  rec.node.visible = (flags & kHiddenFlag) == 0;
  r.u8();  // filler

  const std::uint32_t extra_len = r.u32();
  ByteReader extra = r.window(extra_len);

  const std::uint32_t mask_len = extra.u32();
  extra.skip(mask_len);
  const std::uint32_t ranges_len = extra.u32();
  extra.skip(ranges_len);

  const std::uint8_t name_len = extra.u8();
  std::string legacy_name = extra.bytes(name_len);
  const std::size_t name_total = std::size_t(name_len) + 1;
  extra.skip((4 - name_total % 4) % 4);
  rec.node.name = legacy_name;

  std::string unicode_name;
  bool is_text = false;
  while (extra.remaining() >= 12) {
    const std::string sig = extra.bytes(4);
    if (sig != "8BIM" && sig != "8B64") {
      notes.push_back("unrecognized info-block signature, remaining extra data skipped");
      break;
    }
    const std::string key = extra.bytes(4);
    const std::uint32_t len = extra.u32();
    const std::uint32_t padded = len + (len & 1);
    ByteReader block = extra.window(std::min<std::size_t>(padded, extra.remaining()));
    if (key == "luni") {
      const std::uint32_t units = block.u32();
      if (std::size_t(units) * 2 <= block.remaining()) {
        const std::string raw = block.bytes(std::size_t(units) * 2);
        unicode_name = utf16be_to_utf8(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size());
      }
    } else if (key == "lsct") {
      rec.divider = int(block.u32());
    } else if (key == "TySh") {
      is_text = true;
      rec.node.text_content = extract_type_tool_text(block.bytes(block.remaining()));
    } else {
      notes.push_back("skipped info block '" + key + "'");
    }
  }

  if (!unicode_name.empty()) rec.node.name = unicode_name;
  if (is_text && rec.divider == 0) rec.node.kind = LayerKind::text;
  return rec;
}

std::vector<LayerNode> build_tree(std::vector<RawRecord>& records) {
  // File order is bottom-most first; a group is bracketed by a bounding
  // divider (type 3) below its members and a folder record (type 1/2) above.
  std::vector<std::vector<LayerNode>> stack;
  stack.emplace_back();

  for (auto& rec : records) {
    if (rec.divider == 3) {
      stack.emplace_back();
    } else if (rec.divider == 1 || rec.divider == 2) {
      if (stack.size() < 2)
        fail(PsdErrorCode::malformed_dividers, "folder record without matching bounding divider");
      LayerNode group;
      group.kind = LayerKind::group;
      group.name = rec.node.name;
      group.bounds = rec.node.bounds;
      group.opacity = rec.node.opacity;
      group.visible = rec.node.visible;
      group.children = std::move(stack.back());
      stack.pop_back();
      if (rec.bounds_zero && !group.children.empty()) group.bounds = union_of_children(group.children);
      stack.back().push_back(std::move(group));
    } else {
      stack.back().push_back(std::move(rec.node));
    }
  }
  if (stack.size() != 1)
    fail(PsdErrorCode::malformed_dividers, "unbalanced group dividers: " +
                                               std::to_string(stack.size() - 1) + " unclosed group(s)");
  return std::move(stack.front());
}

}  // namespace

RawDesignInput read_psd_bytes(const std::vector<std::uint8_t>& bytes, const std::string& source_path) {
  RawDesignInput out;
  out.source_path = source_path;
  out.source_kind = SourceKind::psd_binary;
  try {
    ByteReader r(bytes);
    if (r.remaining() < 4 || r.bytes(4) != "8BPS") fail(PsdErrorCode::bad_signature, "not a PSD file");
    const std::uint16_t version = r.u16();
    if (version != 1) fail(PsdErrorCode::unsupported_version, "unsupported PSD version " + std::to_string(version));
    r.skip(6);
    out.header.channels = r.u16();
    out.header.height = r.u32();
    out.header.width = r.u32();
    out.header.bit_depth = r.u16();
    out.header.color_mode = r.u16();
    if (out.header.width < 1 || out.header.width > 30000 || out.header.height < 1 ||
        out.header.height > 30000)
      fail(PsdErrorCode::malformed, "page dimensions out of range");
    if (out.header.bit_depth != 8)
      fail(PsdErrorCode::unsupported_mode, "only 8-bit depth is supported");
    if (out.header.color_mode != 3)
      fail(PsdErrorCode::unsupported_mode, "only RGB color mode is supported");

    const std::uint32_t color_mode_len = r.u32();
    if (color_mode_len > 0) out.notes.push_back("color mode data skipped");
    r.skip(color_mode_len);

    const std::uint32_t resources_len = r.u32();
    if (resources_len > 0) out.notes.push_back("image resources skipped");
    r.skip(resources_len);

    const std::uint32_t section_len = r.u32();
    ByteReader section = r.window(section_len);
    if (section_len == 0) return out;  // no layers

    const std::uint32_t layer_info_len = section.u32();
    if (layer_info_len == 0) return out;
    ByteReader info = section.window(layer_info_len);

    std::int16_t count = info.i16();
    if (count < 0) {
      out.notes.push_back("first alpha channel marks transparency");
      count = static_cast<std::int16_t>(-count);
    }
    std::vector<RawRecord> records;
    records.reserve(std::size_t(count));
    for (std::int16_t i = 0; i < count; ++i) records.push_back(read_layer_record(info, out.notes));
    if (info.remaining() > 0) out.notes.push_back("channel image data skipped");

    out.roots = build_tree(records);
  } catch (const ByteRangeError& e) {
    fail(PsdErrorCode::truncated, std::string("truncated PSD: ") + e.what());
  }
  return out;
}

RawDesignInput read_psd(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const IoError& e) {
    throw PsdError(PsdErrorCode::io_error, e.what());
  }
  return read_psd_bytes(bytes, path.string());
}

// ---------------------------------------------------------------------------
// Layer-dump text format

namespace {

struct DumpItem {
  int level = 0;
  int line = 0;
  LayerNode node;
};

[[noreturn]] void dump_fail(const std::string& msg, int line, int col = 1) {
  throw PsdError(PsdErrorCode::parse_error,
                 "layer dump:" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg, line, col);
}

class LineScanner {
 public:
  LineScanner(std::string s, int line) : s_(std::move(s)), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

  int column() const { return int(pos_) + 1; }

  std::string token() {
    skip_ws();
    if (pos_ >= s_.size()) dump_fail("unexpected end of line", line_, column());
    if (s_[pos_] == '"') return quoted();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
    return s_.substr(start, pos_ - start);
  }

  // Reads a `key=` prefix; the cursor stops right after the '='.
  std::string key() {
    skip_ws();
    const int col = column();
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '=' && s_[pos_] != ' ' && s_[pos_] != '\t')
      out.push_back(s_[pos_++]);
    if (pos_ >= s_.size() || s_[pos_] != '=')
      dump_fail("expected key=value field, got '" + out + "'", line_, col);
    ++pos_;
    return out;
  }

  // Field value immediately after '=': quoted string or bare token.
  std::string value() {
    if (pos_ < s_.size() && s_[pos_] == '"') return quoted();
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') out.push_back(s_[pos_++]);
    return out;
  }

  std::string quoted() {
    const int col = column();
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        ++pos_;
        switch (s_[pos_]) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(s_[pos_]); break;
        }
      } else {
        out.push_back(s_[pos_]);
      }
      ++pos_;
    }
    if (pos_ >= s_.size()) dump_fail("unterminated quoted string", line_, col);
    ++pos_;  // closing quote
    return out;
  }

  std::int64_t integer() {
    const int col = column();
    const std::string t = token();
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (end == t.c_str() || *end != '\0') dump_fail("expected integer, got '" + t + "'", line_, col);
    return v;
  }

  double number() {
    const int col = column();
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') dump_fail("expected number, got '" + t + "'", line_, col);
    return v;
  }

 private:
  std::string s_;
  int line_;
  std::size_t pos_ = 0;
};

std::vector<LayerNode> assemble(const std::vector<DumpItem>& items, std::size_t& pos, int level) {
  std::vector<LayerNode> out;
  while (pos < items.size() && items[pos].level == level) {
    LayerNode node = items[pos].node;
    const std::size_t self = pos;
    ++pos;
    if (pos < items.size() && items[pos].level > level) {
      if (items[pos].level != level + 1)
        dump_fail("indentation jumps more than one level", items[pos].line);
      if (node.kind != LayerKind::group)
        dump_fail("child indented under non-group node '" + items[self].node.name + "'", items[pos].line);
      node.children = assemble(items, pos, level + 1);
    }
    out.push_back(std::move(node));
  }
  return out;
}

}  // namespace

RawDesignInput read_layer_dump_text(const std::string& text, const std::string& source_path) {
  RawDesignInput out;
  out.source_path = source_path;
  out.source_kind = SourceKind::layer_dump;

  const auto lines = split_lines(text);
  std::vector<DumpItem> items;
  bool saw_header = false;

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& raw = lines[li];
    const int line_no = int(li) + 1;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') continue;

    if (!saw_header) {
      LineScanner sc(stripped, line_no);
      if (sc.token() != "page") dump_fail("expected 'page W H' header", line_no);
      const std::int64_t w = sc.integer();
      const std::int64_t h = sc.integer();
      if (w < 1 || w > 30000 || h < 1 || h > 30000) dump_fail("page dimensions out of range", line_no);
      out.header.width = std::uint32_t(w);
      out.header.height = std::uint32_t(h);
      if (!sc.at_end()) dump_fail("trailing content after page header", line_no);
      saw_header = true;
      continue;
    }

    std::size_t indent = 0;
    while (indent < raw.size() && raw[indent] == ' ') ++indent;
    if (indent < raw.size() && raw[indent] == '\t') dump_fail("tabs are not allowed for indentation", line_no);
    if (indent % 2 != 0) dump_fail("indentation must be a multiple of two spaces", line_no);

    DumpItem item;
    item.level = int(indent / 2);
    item.line = line_no;

    LineScanner sc(raw.substr(indent), line_no);
    const std::string kind = sc.token();
    if (kind == "pixel") item.node.kind = LayerKind::pixel;
    else if (kind == "text") item.node.kind = LayerKind::text;
    else if (kind == "group") item.node.kind = LayerKind::group;
    else dump_fail("unknown layer kind '" + kind + "'", line_no);

    item.node.name = sc.token();
    const std::int64_t top = sc.integer();
    const std::int64_t left = sc.integer();
    const std::int64_t bottom = sc.integer();
    const std::int64_t right = sc.integer();
    if (bottom < top || right < left) dump_fail("inverted bounds", line_no);
    item.node.bounds = Rect{top, left, bottom, right};
    item.node.opacity = sc.number();
    if (item.node.opacity < 0.0 || item.node.opacity > 1.0) dump_fail("opacity outside [0,1]", line_no);

    const std::string vis = sc.token();
    if (vis == "true" || vis == "1") item.node.visible = true;
    else if (vis == "false" || vis == "0") item.node.visible = false;
    else dump_fail("expected visible flag true/false, got '" + vis + "'", line_no);

    while (!sc.at_end()) {
      const int col = sc.column();
      const std::string field = sc.key();
      if (field == "text") {
        if (item.node.kind != LayerKind::text) dump_fail("text= on non-text node", line_no, col);
        item.node.text_content = sc.value();
      } else {
        dump_fail("unknown field '" + field + "'", line_no, col);
      }
    }
    items.push_back(std::move(item));
  }

  if (!saw_header) dump_fail("missing 'page W H' header", int(lines.size()) + 1);
  std::size_t pos = 0;
  if (!items.empty() && items[0].level != 0) dump_fail("first node must not be indented", items[0].line);
  out.roots = assemble(items, pos, 0);
  if (pos != items.size()) dump_fail("inconsistent indentation", items[pos].line);
  return out;
}

RawDesignInput read_layer_dump(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file_text(path);
  } catch (const IoError& e) {
    throw PsdError(PsdErrorCode::io_error, e.what());
  }
  return read_layer_dump_text(text, path.string());
}

namespace {

std::string quote_if_needed(const std::string& s) {
  const bool needs = s.empty() || s.find_first_of(" \t\"") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void dump_node(const LayerNode& n, int level, std::string& out) {
  out.append(std::size_t(level) * 2, ' ');
  out += to_string(n.kind);
  out += ' ';
  out += quote_if_needed(n.name);
  out += ' ' + std::to_string(n.bounds.top) + ' ' + std::to_string(n.bounds.left) + ' ' +
         std::to_string(n.bounds.bottom) + ' ' + std::to_string(n.bounds.right);
  out += ' ' + format_double_exact(n.opacity);
  out += n.visible ? " true" : " false";
  if (n.kind == LayerKind::text && !n.text_content.empty()) {
    std::string quoted = "\"";
    for (char c : n.text_content) {
      if (c == '"' || c == '\\') quoted.push_back('\\');
      if (c == '\n') {
        quoted += "\\n";
        continue;
      }
      quoted.push_back(c);
    }
    quoted.push_back('"');
    out += " text=" + quoted;
  }
  out += '\n';
  for (const auto& c : n.children) dump_node(c, level + 1, out);
}

}  // namespace

std::string write_layer_dump_text(const RawDesignInput& input) {
  std::string out = "page " + std::to_string(input.header.width) + " " +
                    std::to_string(input.header.height) + "\n";
  for (const auto& n : input.roots) dump_node(n, 0, out);
  return out;
}

}  // namespace psd2code::psd
