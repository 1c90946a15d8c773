#include "psd2code/assets/assets.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "psd2code/io.hpp"
#include "psd2code/pipeline/document.hpp"
#include "psd2code/text.hpp"

namespace psd2code::assets {

std::optional<std::pair<std::uint32_t, std::uint32_t>> png_dimensions(const std::uint8_t* data,
                                                                      std::size_t size) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (size < 24 || !std::equal(sig, sig + 8, data)) return std::nullopt;
  // 8-byte signature, 4-byte length, "IHDR", then width/height at 16..23.
  if (!(data[12] == 'I' && data[13] == 'H' && data[14] == 'D' && data[15] == 'R')) return std::nullopt;
  const auto be32 = [&](std::size_t at) {
    return (std::uint32_t(data[at]) << 24) | (std::uint32_t(data[at + 1]) << 16) |
           (std::uint32_t(data[at + 2]) << 8) | data[at + 3];
  };
  const std::uint32_t w = be32(16);
  const std::uint32_t h = be32(20);
  if (w == 0 || h == 0) return std::nullopt;
  return std::make_pair(w, h);
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> jpeg_dimensions(const std::uint8_t* data,
                                                                       std::size_t size) {
  if (size < 4 || data[0] != 0xFF || data[1] != 0xD8) return std::nullopt;
  std::size_t p = 2;
  while (p + 3 < size) {
    if (data[p] != 0xFF) return std::nullopt;
    const std::uint8_t marker = data[p + 1];
    if (marker == 0xFF) {  // fill byte
      ++p;
      continue;
    }
    if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) {
      p += 2;  // standalone marker, no length
      continue;
    }
    if (p + 4 > size) return std::nullopt;
    const std::size_t seg_len = (std::size_t(data[p + 2]) << 8) | data[p + 3];
    if (seg_len < 2) return std::nullopt;
    if (marker == 0xC0 || marker == 0xC2) {  // SOF0 baseline / SOF2 progressive
      // Segment layout from the marker byte: FF Cx len(2) precision(1) height(2) width(2).
      if (p + 9 > size) return std::nullopt;
      const std::uint32_t h = (std::uint32_t(data[p + 5]) << 8) | data[p + 6];
      const std::uint32_t w = (std::uint32_t(data[p + 7]) << 8) | data[p + 8];
      if (w == 0 || h == 0) return std::nullopt;
      return std::make_pair(w, h);
    }
    p += 2 + seg_len;
  }
  return std::nullopt;
}

std::vector<AssetRecord> scan_assets(const std::filesystem::path& dir,
                                     std::vector<std::string>* notes) {
  std::vector<std::filesystem::path> files;
  try {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string ext = file_extension_lower(entry.path().filename().string());
      if (ext == "png" || ext == "jpg" || ext == "jpeg") files.push_back(entry.path());
    }
  } catch (const std::filesystem::filesystem_error& e) {
    throw AssetError(dir.string(), e.what());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  std::vector<AssetRecord> records;
  std::map<std::string, std::size_t> by_stem;
  for (const auto& path : files) {
    const std::string filename = path.filename().string();
    const std::string ext = file_extension_lower(filename);
    AssetRecord rec;
    rec.file = filename;
    rec.path = path.string();
    rec.format = ext == "png" ? AssetFormat::png : AssetFormat::jpeg;

    const auto bytes = read_file_bytes(path);
    const auto dims = rec.format == AssetFormat::png ? png_dimensions(bytes.data(), bytes.size())
                                                     : jpeg_dimensions(bytes.data(), bytes.size());
    if (!dims) throw AssetError(filename, "corrupt image header: " + filename);
    rec.width = dims->first;
    rec.height = dims->second;

    const std::string stem = file_stem(filename);
    const auto it = by_stem.find(stem);
    if (it != by_stem.end()) {
      auto& existing = records[it->second];
      if (notes)
        notes->push_back("stem collision: " + existing.file + " vs " + filename +
                         " (PNG preferred)");
      if (existing.format == AssetFormat::jpeg && rec.format == AssetFormat::png)
        existing = std::move(rec);
      continue;
    }
    by_stem[stem] = records.size();
    records.push_back(std::move(rec));
  }
  return records;
}

AlignmentReport align(pipeline::DesignDocument& doc, const std::vector<AssetRecord>& assets) {
  AlignmentReport report;
  std::map<std::string, const AssetRecord*> by_file;
  std::map<std::string, const AssetRecord*> by_stem;
  std::map<std::string, const AssetRecord*> by_stem_ci;
  for (const auto& a : assets) {
    by_file.emplace(a.file, &a);
    by_stem.emplace(file_stem(a.file), &a);
    by_stem_ci.emplace(to_lower_ascii(file_stem(a.file)), &a);
  }

  std::set<std::string> used;
  pipeline::for_each_element(doc, [&](pipeline::ElementNode& e, int) {
    if (e.type != pipeline::ElementType::image) return;
    const AssetRecord* match = nullptr;
    if (!e.asset_ref.empty()) {
      const auto it = by_file.find(e.asset_ref);
      if (it != by_file.end()) match = it->second;
    }
    if (!match) {
      const auto it = by_stem.find(e.name);
      if (it != by_stem.end()) match = it->second;
    }
    if (!match) {
      const auto it = by_stem_ci.find(to_lower_ascii(e.name));
      if (it != by_stem_ci.end()) match = it->second;
    }
    if (!match) {
      report.unmatched_elements.push_back(e.id);
      return;
    }
    e.asset_ref = match->file;
    if (e.width != std::int64_t(match->width) || e.height != std::int64_t(match->height)) {
      e.width = std::int64_t(match->width);
      e.height = std::int64_t(match->height);
      ++report.resized;
    }
    ++report.bound;
    used.insert(match->file);
  });

  doc.assets = assets;
  for (const auto& a : assets)
    if (!used.count(a.file)) report.orphan_assets.push_back(a.file);
  return report;
}

double resource_traceability(const pipeline::DesignDocument& doc) {
  std::size_t total = 0;
  std::size_t bound = 0;
  std::set<std::string> files;
  for (const auto& a : doc.assets) files.insert(a.file);
  pipeline::for_each_element(doc, [&](const pipeline::ElementNode& e, int) {
    if (e.type != pipeline::ElementType::image) return;
    ++total;
    if (!e.asset_ref.empty() && files.count(e.asset_ref)) ++bound;
  });
  if (total == 0) return 1.0;
  return double(bound) / double(total);
}

}  // namespace psd2code::assets
