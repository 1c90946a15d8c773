#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psd2code/assets/assets.hpp"
#include "psd2code/geometry.hpp"

namespace psd2code::pipeline {

enum class ElementType { container, text, image };

const char* to_string(ElementType t);

// One node of the design.json element tree. Positions are absolute page
// coordinates; text/image nodes are leaves.
struct ElementNode {
  std::string id;    // "e1", "e2", ... in pre-order
  std::string name;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t width = 0;
  std::int64_t height = 0;
  ElementType type = ElementType::image;
  std::string text_content;  // type == text only
  std::string asset_ref;     // type == image only; asset filename
  double opacity = 1.0;
  int z_hint = 0;  // document z-order index (pre-order, bottom-most first)
  std::vector<ElementNode> children;  // type == container only

  Rect rect() const { return make_rect_xywh(x, y, width, height); }
};

struct DesignDocument {
  std::int64_t page_width = 0;
  std::int64_t page_height = 0;
  std::vector<ElementNode> elements;
  std::vector<assets::AssetRecord> assets;  // filled by align
};

class DocumentError : public std::runtime_error {
 public:
  explicit DocumentError(const std::string& what) : std::runtime_error(what) {}
};

void for_each_element(const DesignDocument& doc, const std::function<void(const ElementNode&, int depth)>& fn);
void for_each_element(DesignDocument& doc, const std::function<void(ElementNode&, int depth)>& fn);
std::size_t element_count(const DesignDocument& doc);
int document_depth(const DesignDocument& doc);

// Leaf boxes (image/text) in pre-order; used by metrics and validation.
struct LeafBox {
  std::string id;
  std::string name;
  Rect rect;
  ElementType type = ElementType::image;
  std::string asset_ref;
  std::string text;
  int z = 0;
  double opacity = 1.0;
};
std::vector<LeafBox> leaf_boxes(const DesignDocument& doc);

// design.json serialization; field names and order are part of the on-disk
// contract. Reading fills missing optional fields with safe defaults
// (position/size 0, opacity 1.0).
std::string document_to_json(const DesignDocument& doc);
DesignDocument document_from_json(const std::string& json_text);
void save_document(const DesignDocument& doc, const std::filesystem::path& path);
DesignDocument load_document(const std::filesystem::path& path);

}  // namespace psd2code::pipeline
