#pragma once

#include <algorithm>
#include <cstdint>

namespace psd2code {

// Axis-aligned pixel rectangle with half-open edges: [left,right) x [top,bottom).
// Degenerate (zero-area) rectangles are legal.
struct Rect {
  std::int64_t top = 0;
  std::int64_t left = 0;
  std::int64_t bottom = 0;
  std::int64_t right = 0;

  std::int64_t width() const { return right - left; }
  std::int64_t height() const { return bottom - top; }
  double area() const { return static_cast<double>(width()) * static_cast<double>(height()); }
  bool empty() const { return right <= left || bottom <= top; }

  bool operator==(const Rect&) const = default;

  Rect intersect(const Rect& o) const {
    Rect r{std::max(top, o.top), std::max(left, o.left),
           std::min(bottom, o.bottom), std::min(right, o.right)};
    if (r.empty()) return Rect{r.top, r.left, r.top, r.left};
    return r;
  }

  Rect union_with(const Rect& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    return Rect{std::min(top, o.top), std::min(left, o.left),
                std::max(bottom, o.bottom), std::max(right, o.right)};
  }

  bool contains(const Rect& o) const {
    return o.left >= left && o.right <= right && o.top >= top && o.bottom <= bottom;
  }
};

inline Rect make_rect_xywh(std::int64_t x, std::int64_t y, std::int64_t w, std::int64_t h) {
  return Rect{y, x, y + h, x + w};
}

inline double intersection_area(const Rect& a, const Rect& b) {
  const double w = static_cast<double>(std::min(a.right, b.right) - std::max(a.left, b.left));
  const double h = static_cast<double>(std::min(a.bottom, b.bottom) - std::max(a.top, b.top));
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

inline double iou(const Rect& a, const Rect& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

}  // namespace psd2code
