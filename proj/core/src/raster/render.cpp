#include "psd2code/raster/render.hpp"

#include <algorithm>
#include <cmath>

#include "psd2code/raster/font8x16.hpp"
#include "psd2code/text.hpp"

namespace psd2code::raster {

const RasterImage& DirectoryAssets::get(const std::string& file) {
  const auto it = cache_.find(file);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(file, decode_image(dir_ / file)).first->second;
}

const RasterImage& MemoryAssets::get(const std::string& file) {
  const auto it = images_.find(file);
  if (it == images_.end()) throw AssetDecodeError(file, "asset not found: " + file);
  return it->second;
}

namespace {

using codecheck::BoxKind;
using codecheck::Color;
using codecheck::LayoutBox;

void blend_pixel(std::uint8_t* dst, std::uint8_t r, std::uint8_t g, std::uint8_t b, double alpha) {
  if (alpha <= 0.0) return;
  if (alpha >= 1.0) {
    dst[0] = r;
    dst[1] = g;
    dst[2] = b;
    dst[3] = 255;
    return;
  }
  const double inv = 1.0 - alpha;
  dst[0] = std::uint8_t(std::lround(r * alpha + dst[0] * inv));
  dst[1] = std::uint8_t(std::lround(g * alpha + dst[1] * inv));
  dst[2] = std::uint8_t(std::lround(b * alpha + dst[2] * inv));
  dst[3] = std::uint8_t(std::lround(255.0 * alpha + dst[3] * inv));
}

struct Clip {
  std::int64_t x0, y0, x1, y1;  // half-open, in page coordinates
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

Clip clip_to(const Rect& r, std::int64_t w, std::int64_t h) {
  return Clip{std::max<std::int64_t>(0, r.left), std::max<std::int64_t>(0, r.top),
              std::min<std::int64_t>(w, r.right), std::min<std::int64_t>(h, r.bottom)};
}

void fill_rect(RasterImage& img, const Clip& c, Color color, double opacity) {
  const double alpha = (color.a / 255.0) * opacity;
  for (std::int64_t y = c.y0; y < c.y1; ++y)
    for (std::int64_t x = c.x0; x < c.x1; ++x)
      blend_pixel(img.at(std::uint32_t(x), std::uint32_t(y)), color.r, color.g, color.b, alpha);
}

void draw_image(RasterImage& img, const LayoutBox& box, const RasterImage& src, const Clip& c,
                double opacity) {
  const std::int64_t bw = box.rect.width();
  const std::int64_t bh = box.rect.height();
  if (bw <= 0 || bh <= 0 || src.width == 0 || src.height == 0) return;
  for (std::int64_t y = c.y0; y < c.y1; ++y) {
    const std::int64_t ly = y - box.rect.top;
    const std::uint32_t sy = std::uint32_t(ly * std::int64_t(src.height) / bh);
    for (std::int64_t x = c.x0; x < c.x1; ++x) {
      const std::int64_t lx = x - box.rect.left;
      const std::uint32_t sx = std::uint32_t(lx * std::int64_t(src.width) / bw);
      const std::uint8_t* sp = src.at(sx, sy);
      blend_pixel(img.at(std::uint32_t(x), std::uint32_t(y)), sp[0], sp[1], sp[2],
                  (sp[3] / 255.0) * opacity);
    }
  }
}

void draw_glyph(RasterImage& img, const Clip& c, std::int64_t pen_x, std::int64_t pen_y,
                int glyph_index, int scale, Color color, double opacity) {
  const double alpha = (color.a / 255.0) * opacity;
  for (int row = 0; row < kFontGlyphHeight; ++row) {
    const std::uint8_t bits = kFontGlyphs[glyph_index][row];
    if (bits == 0) continue;
    for (int col = 0; col < kFontGlyphWidth; ++col) {
      if (!(bits & (0x80 >> col))) continue;
      for (int dy = 0; dy < scale; ++dy) {
        for (int dx = 0; dx < scale; ++dx) {
          const std::int64_t px = pen_x + std::int64_t(col) * scale + dx;
          const std::int64_t py = pen_y + std::int64_t(row) * scale + dy;
          if (px < c.x0 || px >= c.x1 || py < c.y0 || py >= c.y1) continue;
          blend_pixel(img.at(std::uint32_t(px), std::uint32_t(py)), color.r, color.g, color.b,
                      alpha);
        }
      }
    }
  }
}

void draw_text(RasterImage& img, const LayoutBox& box, const Clip& c, bool* used_fallback) {
  const int scale = std::max(1, int(std::lround(double(box.font_size) / kFontGlyphHeight)));
  const std::int64_t advance = std::int64_t(kFontGlyphWidth) * scale;
  const std::int64_t line_height = std::int64_t(kFontGlyphHeight) * scale;
  std::int64_t pen_x = box.rect.left;
  std::int64_t pen_y = box.rect.top;
  for (const std::uint32_t cp : utf8_to_codepoints(box.text)) {
    if (cp == '\n') {
      pen_x = box.rect.left;
      pen_y += line_height;
      continue;
    }
    if (pen_x + advance > box.rect.right && pen_x != box.rect.left) {
      pen_x = box.rect.left;
      pen_y += line_height;
    }
    if (pen_y >= box.rect.bottom) break;
    int glyph = kFontFallbackIndex;
    if (cp >= std::uint32_t(kFontFirstChar) && cp <= std::uint32_t(kFontLastChar)) {
      glyph = int(cp) - kFontFirstChar;
    } else if (used_fallback) {
      *used_fallback = true;
    }
    draw_glyph(img, c, pen_x, pen_y, glyph, scale, box.text_color, box.opacity);
    pen_x += advance;
  }
}

}  // namespace

RasterImage render(const codecheck::ComputedLayout& layout, AssetSource& assets,
                   std::int64_t page_width, std::int64_t page_height, codecheck::Color background,
                   bool* used_fallback_glyph) {
  if (page_width <= 0 || page_height <= 0)
    throw AssetDecodeError("", "render: page dimensions must be positive");
  RasterImage img = RasterImage::solid(std::uint32_t(page_width), std::uint32_t(page_height),
                                       background.r, background.g, background.b, background.a);

  std::vector<const LayoutBox*> order;
  order.reserve(layout.boxes.size());
  for (const auto& b : layout.boxes) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(),
                   [](const LayoutBox* a, const LayoutBox* b) { return a->z < b->z; });

  for (const LayoutBox* box : order) {
    const Clip c = clip_to(box->rect, page_width, page_height);
    if (c.empty()) continue;
    if (box->background_color) fill_rect(img, c, *box->background_color, box->opacity);
    if (box->kind == BoxKind::image && !box->asset.empty())
      draw_image(img, *box, assets.get(box->asset), c, box->opacity);
    if (box->kind == BoxKind::text && !box->text.empty())
      draw_text(img, *box, c, used_fallback_glyph);
  }
  return img;
}

}  // namespace psd2code::raster
