#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace psd2code::raster {

class AssetDecodeError : public std::runtime_error {
 public:
  AssetDecodeError(const std::string& file, const std::string& message)
      : std::runtime_error(message), file_(file) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

struct RasterImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGBA, 8-bit per channel

  static RasterImage solid(std::uint32_t w, std::uint32_t h, std::uint8_t r, std::uint8_t g,
                           std::uint8_t b, std::uint8_t a = 255);

  std::uint8_t* at(std::uint32_t x, std::uint32_t y) {
    return pixels.data() + (std::size_t(y) * width + x) * 4;
  }
  const std::uint8_t* at(std::uint32_t x, std::uint32_t y) const {
    return pixels.data() + (std::size_t(y) * width + x) * 4;
  }

  bool operator==(const RasterImage&) const = default;
};

// PNG: 8-bit depth, color types 0/2/3/4/6, non-interlaced; palette and
// grayscale inputs are expanded to RGBA, missing alpha becomes 255.
RasterImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name);
std::vector<std::uint8_t> encode_png(const RasterImage& img);

// Baseline/progressive JPEG via libjpeg; alpha filled with 255.
RasterImage decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::string& name);

// Dispatches on magic bytes. Throws AssetDecodeError.
RasterImage decode_image(const std::filesystem::path& path);

// 8-bit RGBA non-interlaced PNG; decode_image(write_png(img)) == img.
void write_png(const RasterImage& img, const std::filesystem::path& path);

}  // namespace psd2code::raster
