#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace psd2code {

// Thrown by ByteReader on any out-of-range access; callers wrap it into
// their own error domain (e.g. the PSD reader's Truncated).
class ByteRangeError : public std::runtime_error {
 public:
  explicit ByteRangeError(const std::string& what) : std::runtime_error(what) {}
};

// Bounds-checked big-endian cursor over an immutable byte buffer.
class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<std::uint8_t>& buf) : ByteReader(buf.data(), buf.size()) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return size_ - pos_; }
  bool eof() const { return pos_ >= size_; }

  void require(std::size_t n) const {
    if (n > remaining()) throw ByteRangeError("unexpected end of data at offset " + std::to_string(pos_));
  }

  void skip(std::size_t n) {
    require(n);
    pos_ += n;
  }

  void seek(std::size_t abs) {
    if (abs > size_) throw ByteRangeError("seek past end");
    pos_ = abs;
  }

  std::uint8_t u8() {
    require(1);
    return data_[pos_++];
  }

  std::uint16_t u16() {
    require(2);
    std::uint16_t v = (std::uint16_t(data_[pos_]) << 8) | data_[pos_ + 1];
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = (std::uint32_t(data_[pos_]) << 24) | (std::uint32_t(data_[pos_ + 1]) << 16) |
                      (std::uint32_t(data_[pos_ + 2]) << 8) | data_[pos_ + 3];
    pos_ += 4;
    return v;
  }

  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  std::string bytes(std::size_t n) {
    require(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }

  // Sub-reader spanning the next n bytes; advances this reader past them.
  ByteReader window(std::size_t n) {
    require(n);
    ByteReader sub(data_ + pos_, n);
    pos_ += n;
    return sub;
  }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

// Big-endian append-only buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }

  void u16(std::uint16_t v) {
    buf_.push_back(std::uint8_t(v >> 8));
    buf_.push_back(std::uint8_t(v));
  }

  void u32(std::uint32_t v) {
    buf_.push_back(std::uint8_t(v >> 24));
    buf_.push_back(std::uint8_t(v >> 16));
    buf_.push_back(std::uint8_t(v >> 8));
    buf_.push_back(std::uint8_t(v));
  }

  void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(std::uint8_t(bits >> shift));
  }

  void bytes(const std::string& s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void bytes(const std::vector<std::uint8_t>& v) { buf_.insert(buf_.end(), v.begin(), v.end()); }
  void zeros(std::size_t n) { buf_.insert(buf_.end(), n, 0); }

  // Overwrites a previously written u32 (for back-patching section lengths).
  void patch_u32(std::size_t at, std::uint32_t v) {
    buf_[at] = std::uint8_t(v >> 24);
    buf_[at + 1] = std::uint8_t(v >> 16);
    buf_[at + 2] = std::uint8_t(v >> 8);
    buf_[at + 3] = std::uint8_t(v);
  }

  std::size_t size() const { return buf_.size(); }
  const std::vector<std::uint8_t>& data() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

}  // namespace psd2code
