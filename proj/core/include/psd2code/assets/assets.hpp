#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psd2code::pipeline {
struct DesignDocument;
}

namespace psd2code::assets {

enum class AssetFormat { png, jpeg };

struct AssetRecord {
  std::string file;  // filename with extension, unique within a sample
  std::string path;  // absolute or sample-relative
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  AssetFormat format = AssetFormat::png;
};

struct AlignmentReport {
  std::size_t bound = 0;
  std::size_t resized = 0;
  std::vector<std::string> unmatched_elements;  // element ids
  std::vector<std::string> orphan_assets;       // filenames referenced by nothing
};

class AssetError : public std::runtime_error {
 public:
  explicit AssetError(const std::string& file, const std::string& message)
      : std::runtime_error(message), file_(file) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

// Header-only dimension probes; no pixel decoding.
// PNG: IHDR width/height at bytes 16..23. JPEG: first SOF0/SOF2 frame header.
std::optional<std::pair<std::uint32_t, std::uint32_t>> png_dimensions(const std::uint8_t* data,
                                                                      std::size_t size);
std::optional<std::pair<std::uint32_t, std::uint32_t>> jpeg_dimensions(const std::uint8_t* data,
                                                                       std::size_t size);

// One record per *.png / *.jpg / *.jpeg in dir, deterministic filename order.
// Stem collisions prefer PNG over JPEG and are logged into notes.
// Throws AssetError (CorruptImage) when a header is unreadable.
std::vector<AssetRecord> scan_assets(const std::filesystem::path& dir,
                                     std::vector<std::string>* notes = nullptr);

// Binds image elements to assets by filename stem (an existing resolvable
// asset reference wins, then case-sensitive stem match, then case-insensitive),
// overwrites bound element sizes with the asset's true dimensions, and fills
// doc.assets with the full scanned list. Positions are never modified.
AlignmentReport align(pipeline::DesignDocument& doc, const std::vector<AssetRecord>& assets);

// Bound image elements / total image elements; 1.0 when the document has none.
double resource_traceability(const pipeline::DesignDocument& doc);

}  // namespace psd2code::assets
