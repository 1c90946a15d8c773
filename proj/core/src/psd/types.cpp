#include "psd2code/psd/types.hpp"

#include <algorithm>

namespace psd2code::psd {

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::pixel: return "pixel";
    case LayerKind::text: return "text";
    case LayerKind::group: return "group";
  }
  return "pixel";
}

std::size_t count_layers(const std::vector<LayerNode>& roots) {
  std::size_t n = 0;
  for (const auto& r : roots) n += 1 + count_layers(r.children);
  return n;
}

std::size_t max_depth(const std::vector<LayerNode>& roots) {
  std::size_t d = 0;
  for (const auto& r : roots) d = std::max(d, 1 + max_depth(r.children));
  return d;
}

}  // namespace psd2code::psd
