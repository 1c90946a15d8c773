#include "psd2code/psd/writer.hpp"

#include <cmath>
#include <limits>

#include "psd2code/bytes.hpp"
#include "psd2code/io.hpp"
#include "psd2code/text.hpp"

namespace psd2code::psd {

namespace {

std::uint8_t opacity_byte(double opacity) {
  const long v = std::lround(opacity * 255.0);
  return std::uint8_t(std::min(255L, std::max(0L, v)));
}

void write_info_block(ByteWriter& w, const char* key, const std::vector<std::uint8_t>& data) {
  w.bytes("8BIM");
  w.bytes(key);
  w.u32(std::uint32_t(data.size()));
  w.bytes(data);
  if (data.size() & 1) w.u8(0);
}

std::vector<std::uint8_t> luni_payload(const std::string& name) {
  ByteWriter w;
  const auto units = utf8_to_utf16be(name);
  w.u32(std::uint32_t(units.size() / 2));
  w.bytes(units);
  return w.take();
}

std::vector<std::uint8_t> lsct_payload(std::uint32_t type) {
  ByteWriter w;
  w.u32(type);
  return w.take();
}

std::vector<std::uint8_t> tysh_payload(const std::string& text) {
  ByteWriter w;
  w.u16(1);                              // type tool version
  for (int i = 0; i < 6; ++i) w.f64(0);  // transform
  w.u16(50);                             // text data version
  w.u32(16);                             // descriptor version
  w.zeros(4);                            // descriptor key length 0 => 4-char key follows
  w.bytes("Txt ");
  w.bytes("TEXT");
  const auto units = utf8_to_utf16be(text);
  w.u32(std::uint32_t(units.size() / 2));
  w.bytes(units);
  return w.take();
}

enum class RecordRole { plain, text, bounding_divider, folder };

void write_record(ByteWriter& w, const LayerNode& node, RecordRole role) {
  w.i32(std::int32_t(node.bounds.top));
  w.i32(std::int32_t(node.bounds.left));
  w.i32(std::int32_t(node.bounds.bottom));
  w.i32(std::int32_t(node.bounds.right));
  w.u16(1);  // one channel
  w.i16(0);  // channel id
  w.u32(2);  // channel data: just the compression field
  w.bytes("8BIM");
  w.bytes("norm");
  w.u8(opacity_byte(node.opacity));
  w.u8(0);  // clipping
  w.u8(node.visible ? 0x00 : 0x02);
  w.u8(0);  // filler

  ByteWriter extra;
  extra.u32(0);  // no mask data
  extra.u32(0);  // no blending ranges
  const std::string& name = node.name;
  const std::size_t legacy_len = std::min<std::size_t>(name.size(), 255);
  extra.u8(std::uint8_t(legacy_len));
  extra.bytes(name.substr(0, legacy_len));
  extra.zeros((4 - (legacy_len + 1) % 4) % 4);
  write_info_block(extra, "luni", luni_payload(name));
  if (role == RecordRole::bounding_divider) write_info_block(extra, "lsct", lsct_payload(3));
  if (role == RecordRole::folder) write_info_block(extra, "lsct", lsct_payload(1));
  if (role == RecordRole::text) write_info_block(extra, "TySh", tysh_payload(node.text_content));

  w.u32(std::uint32_t(extra.size()));
  w.bytes(extra.data());
}

void emit_layer(ByteWriter& w, const LayerNode& node, std::size_t& record_count) {
  if (node.kind == LayerKind::group) {
    LayerNode divider;
    divider.name = "</Layer group>";
    write_record(w, divider, RecordRole::bounding_divider);
    ++record_count;
    for (const auto& c : node.children) emit_layer(w, c, record_count);
    write_record(w, node, RecordRole::folder);
    ++record_count;
  } else {
    write_record(w, node, node.kind == LayerKind::text ? RecordRole::text : RecordRole::plain);
    ++record_count;
  }
}

void check_bounds(const LayerNode& node) {
  const auto in_i32 = [](std::int64_t v) {
    return v >= std::numeric_limits<std::int32_t>::min() && v <= std::numeric_limits<std::int32_t>::max();
  };
  if (!in_i32(node.bounds.top) || !in_i32(node.bounds.left) || !in_i32(node.bounds.bottom) ||
      !in_i32(node.bounds.right))
    throw PsdError(PsdErrorCode::malformed, "bounds outside signed 32-bit range");
  for (const auto& c : node.children) check_bounds(c);
}

}  // namespace

std::vector<std::uint8_t> write_synthetic_psd_bytes(const RawDesignInput& input) {
  for (const auto& r : input.roots) check_bounds(r);

  ByteWriter records;
  std::size_t record_count = 0;
  for (const auto& r : input.roots) emit_layer(records, r, record_count);
  if (record_count > 32767) throw PsdError(PsdErrorCode::malformed, "too many layer records");

  ByteWriter info;
  info.i16(std::int16_t(record_count));
  info.bytes(records.data());
  for (std::size_t i = 0; i < record_count; ++i) info.u16(0);  // raw compression, no rows
  if (info.size() & 1) info.u8(0);

  ByteWriter w;
  w.bytes("8BPS");
  w.u16(1);
  w.zeros(6);
  w.u16(input.header.channels == 0 ? 4 : input.header.channels);
  w.u32(input.header.height);
  w.u32(input.header.width);
  w.u16(8);
  w.u16(3);
  w.u32(0);  // color mode data
  w.u32(0);  // image resources

  const std::uint32_t section_len = record_count == 0 ? 0 : std::uint32_t(4 + info.size() + 4);
  w.u32(section_len);
  if (record_count > 0) {
    w.u32(std::uint32_t(info.size()));
    w.bytes(info.data());
    w.u32(0);  // global layer mask info
  }
  return w.take();
}

void write_synthetic_psd(const RawDesignInput& input, const std::filesystem::path& path) {
  const auto bytes = write_synthetic_psd_bytes(input);
  try {
    write_file_bytes(path, bytes.data(), bytes.size());
  } catch (const IoError& e) {
    throw PsdError(PsdErrorCode::io_error, e.what());
  }
}

}  // namespace psd2code::psd
