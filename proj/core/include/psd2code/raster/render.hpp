#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "psd2code/codecheck/validate.hpp"
#include "psd2code/raster/image.hpp"

namespace psd2code::raster {

// Pixel source for background-image fills. Implementations may cache decodes.
class AssetSource {
 public:
  virtual ~AssetSource() = default;
  virtual const RasterImage& get(const std::string& file) = 0;  // throws AssetDecodeError
};

class DirectoryAssets : public AssetSource {
 public:
  explicit DirectoryAssets(std::filesystem::path dir) : dir_(std::move(dir)) {}
  const RasterImage& get(const std::string& file) override;

 private:
  std::filesystem::path dir_;
  std::map<std::string, RasterImage> cache_;
};

class MemoryAssets : public AssetSource {
 public:
  void put(const std::string& file, RasterImage img) { images_[file] = std::move(img); }
  const RasterImage& get(const std::string& file) override;

 private:
  std::map<std::string, RasterImage> images_;
};

// Paints boxes in ascending z (document order on ties): background-color fill,
// then the background image stretched nearest-neighbor to the box, then text
// from the embedded 8x16 bitmap font at an integer scale. Source-over alpha
// compositing with the element opacity throughout; output bytes are
// deterministic for identical inputs. Code points outside the font table draw
// the fallback box glyph and set *used_fallback_glyph.
RasterImage render(const codecheck::ComputedLayout& layout, AssetSource& assets,
                   std::int64_t page_width, std::int64_t page_height,
                   codecheck::Color background = {255, 255, 255, 255},
                   bool* used_fallback_glyph = nullptr);

}  // namespace psd2code::raster
