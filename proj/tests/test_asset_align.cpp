#include <doctest.h>

#include <random>

#include "psd2code/assets/assets.hpp"
#include "psd2code/io.hpp"
#include "psd2code/pipeline/document.hpp"
#include "psd2code/raster/image.hpp"
#include "support/test_support.hpp"

using namespace psd2code;
using assets::AssetError;
using assets::AssetRecord;
using pipeline::DesignDocument;
using pipeline::ElementNode;
using pipeline::ElementType;
using test_support::TempDir;

namespace {

ElementNode image_element(const std::string& id, const std::string& name, std::int64_t x,
                          std::int64_t y, std::int64_t w, std::int64_t h) {
  ElementNode e;
  e.id = id;
  e.name = name;
  e.type = ElementType::image;
  e.x = x;
  e.y = y;
  e.width = w;
  e.height = h;
  return e;
}

}  // namespace

TEST_CASE("scan_assets reads PNG and JPEG header dimensions") {
  TempDir dir("scan");
  raster::write_png(raster::RasterImage::solid(120, 40, 10, 20, 30), dir / "btn.png");
  std::mt19937_64 rng(3);
  const auto jpg = test_support::encode_jpeg(test_support::random_image(rng, 64, 48));
  write_file_bytes(dir / "photo.jpg", jpg.data(), jpg.size());
  write_file_text(dir / "notes.txt", "ignored");

  const auto records = assets::scan_assets(dir.path());
  REQUIRE(records.size() == 2);
  CHECK(records[0].file == "btn.png");
  CHECK(records[0].width == 120);
  CHECK(records[0].height == 40);
  CHECK(records[1].file == "photo.jpg");
  CHECK(records[1].width == 64);
  CHECK(records[1].height == 48);
}

TEST_CASE("scan_assets: empty directory yields an empty list") {
  TempDir dir("scan_empty");
  CHECK(assets::scan_assets(dir.path()).empty());
}

TEST_CASE("scan_assets: truncated PNG header is a corrupt-image error") {
  TempDir dir("scan_bad");
  const std::uint8_t partial[] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A, 0, 0};
  write_file_bytes(dir / "bad.png", partial, sizeof(partial));
  CHECK_THROWS_AS(assets::scan_assets(dir.path()), AssetError);
}

TEST_CASE("scan_assets: stem collisions prefer PNG and are logged") {
  TempDir dir("scan_collide");
  raster::write_png(raster::RasterImage::solid(10, 10, 0, 0, 0), dir / "logo.png");
  std::mt19937_64 rng(4);
  const auto jpg = test_support::encode_jpeg(test_support::random_image(rng, 8, 8));
  write_file_bytes(dir / "logo.jpg", jpg.data(), jpg.size());

  std::vector<std::string> notes;
  const auto records = assets::scan_assets(dir.path(), &notes);
  REQUIRE(records.size() == 1);
  CHECK(records[0].file == "logo.png");
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("collision") != std::string::npos);
}

TEST_CASE("align binds by stem and enforces asset dimensions") {
  DesignDocument doc;
  doc.page_width = 780;
  doc.page_height = 1760;
  doc.elements = {image_element("e1", "btn", 10, 20, 118, 39),
                  image_element("e2", "hero", 0, 100, 300, 200)};
  const std::vector<AssetRecord> files = {{"btn.png", "", 120, 40, assets::AssetFormat::png},
                                          {"unused.png", "", 5, 5, assets::AssetFormat::png}};

  const auto report = assets::align(doc, files);
  CHECK(report.bound == 1);
  CHECK(report.resized == 1);
  REQUIRE(report.unmatched_elements.size() == 1);
  CHECK(report.unmatched_elements[0] == "e2");
  REQUIRE(report.orphan_assets.size() == 1);
  CHECK(report.orphan_assets[0] == "unused.png");

  CHECK(doc.elements[0].width == 120);
  CHECK(doc.elements[0].height == 40);
  CHECK(doc.elements[0].x == 10);   // position untouched
  CHECK(doc.elements[0].y == 20);
  CHECK(doc.elements[0].asset_ref == "btn.png");
  CHECK(doc.elements[1].width == 300);  // unmatched size untouched
  CHECK(doc.assets.size() == 2);

  CHECK(assets::resource_traceability(doc) == doctest::Approx(0.5));
}

TEST_CASE("align falls back to case-insensitive stems and honors preset bindings") {
  DesignDocument doc;
  doc.page_width = 100;
  doc.page_height = 100;
  auto mapped = image_element("e1", "GO", 0, 0, 10, 10);
  mapped.asset_ref = "go_badge.png";  // bound earlier by text classification
  doc.elements = {mapped, image_element("e2", "Hero", 0, 50, 10, 10)};
  const std::vector<AssetRecord> files = {{"go_badge.png", "", 24, 24, assets::AssetFormat::png},
                                          {"hero.png", "", 30, 20, assets::AssetFormat::png}};
  const auto report = assets::align(doc, files);
  CHECK(report.bound == 2);
  CHECK(doc.elements[0].asset_ref == "go_badge.png");
  CHECK(doc.elements[0].width == 24);
  CHECK(doc.elements[1].asset_ref == "hero.png");
  CHECK(assets::resource_traceability(doc) == doctest::Approx(1.0));
}

TEST_CASE("align idempotence and position immutability over random documents") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    DesignDocument doc;
    doc.page_width = 780;
    doc.page_height = 1760;
    std::vector<AssetRecord> files;
    const int n = 2 + int(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const std::string name = "img" + std::to_string(i);
      doc.elements.push_back(image_element("e" + std::to_string(i + 1), name,
                                           std::int64_t(rng() % 700), std::int64_t(rng() % 1700),
                                           1 + std::int64_t(rng() % 80), 1 + std::int64_t(rng() % 60)));
      if (rng() % 4 != 0)
        files.push_back({name + ".png", "", std::uint32_t(1 + rng() % 100),
                         std::uint32_t(1 + rng() % 100), assets::AssetFormat::png});
    }

    auto once = doc;
    const auto report1 = assets::align(once, files);
    auto twice = once;
    const auto report2 = assets::align(twice, files);

    CHECK(pipeline::document_to_json(once) == pipeline::document_to_json(twice));
    CHECK(report1.bound == report2.bound);
    CHECK(report2.resized == 0);  // second pass changes nothing

    for (std::size_t i = 0; i < doc.elements.size(); ++i) {
      CHECK(once.elements[i].x == doc.elements[i].x);
      CHECK(once.elements[i].y == doc.elements[i].y);
    }
    // Size authority: every bound element matches its asset exactly.
    for (const auto& e : once.elements) {
      if (e.asset_ref.empty()) continue;
      for (const auto& a : files)
        if (a.file == e.asset_ref) {
          CHECK(e.width == std::int64_t(a.width));
          CHECK(e.height == std::int64_t(a.height));
        }
    }
  }
}
