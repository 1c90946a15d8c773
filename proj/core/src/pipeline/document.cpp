#include "psd2code/pipeline/document.hpp"

#include <json.hpp>

#include "psd2code/io.hpp"
#include "psd2code/text.hpp"

namespace psd2code::pipeline {

using ordered_json = nlohmann::ordered_json;

const char* to_string(ElementType t) {
  switch (t) {
    case ElementType::container: return "container";
    case ElementType::text: return "text";
    case ElementType::image: return "image";
  }
  return "image";
}

namespace {

void walk(const ElementNode& e, int depth, const std::function<void(const ElementNode&, int)>& fn) {
  fn(e, depth);
  for (const auto& c : e.children) walk(c, depth + 1, fn);
}

void walk(ElementNode& e, int depth, const std::function<void(ElementNode&, int)>& fn) {
  fn(e, depth);
  for (auto& c : e.children) walk(c, depth + 1, fn);
}

}  // namespace

void for_each_element(const DesignDocument& doc,
                      const std::function<void(const ElementNode&, int)>& fn) {
  for (const auto& e : doc.elements) walk(e, 1, fn);
}

void for_each_element(DesignDocument& doc, const std::function<void(ElementNode&, int)>& fn) {
  for (auto& e : doc.elements) walk(e, 1, fn);
}

std::size_t element_count(const DesignDocument& doc) {
  std::size_t n = 0;
  for_each_element(doc, [&](const ElementNode&, int) { ++n; });
  return n;
}

int document_depth(const DesignDocument& doc) {
  int d = 0;
  for_each_element(doc, [&](const ElementNode&, int depth) { d = std::max(d, depth); });
  return d;
}

std::vector<LeafBox> leaf_boxes(const DesignDocument& doc) {
  std::vector<LeafBox> out;
  for_each_element(doc, [&](const ElementNode& e, int) {
    if (e.type == ElementType::container) return;
    LeafBox b;
    b.id = e.id;
    b.name = e.name;
    b.rect = e.rect();
    b.type = e.type;
    b.asset_ref = e.asset_ref;
    b.text = e.text_content;
    b.z = e.z_hint;
    b.opacity = e.opacity;
    out.push_back(std::move(b));
  });
  return out;
}

namespace {

ordered_json element_to_json(const ElementNode& e) {
  ordered_json j;
  j["id"] = e.id;
  j["name"] = e.name;
  j["position"] = {{"x", e.x}, {"y", e.y}};
  j["size"] = {{"width", e.width}, {"height", e.height}};
  j["type"] = to_string(e.type);
  if (e.type == ElementType::text) j["text"] = e.text_content;
  if (e.type == ElementType::image && !e.asset_ref.empty()) j["asset"] = e.asset_ref;
  if (e.opacity != 1.0) j["opacity"] = e.opacity;
  if (e.type == ElementType::container) {
    ordered_json kids = ordered_json::array();
    for (const auto& c : e.children) kids.push_back(element_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

ElementNode element_from_json(const ordered_json& j, int& z_counter) {
  ElementNode e;
  e.id = j.value("id", "");
  e.name = j.value("name", "");
  if (j.contains("position")) {
    e.x = j["position"].value("x", std::int64_t(0));
    e.y = j["position"].value("y", std::int64_t(0));
  }
  if (j.contains("size")) {
    e.width = j["size"].value("width", std::int64_t(0));
    e.height = j["size"].value("height", std::int64_t(0));
  }
  const std::string type = j.value("type", "image");
  if (type == "container") e.type = ElementType::container;
  else if (type == "text") e.type = ElementType::text;
  else e.type = ElementType::image;
  e.text_content = j.value("text", "");
  e.asset_ref = j.value("asset", "");
  e.opacity = j.value("opacity", 1.0);
  e.z_hint = z_counter++;
  if (j.contains("children")) {
    for (const auto& c : j["children"]) e.children.push_back(element_from_json(c, z_counter));
  }
  return e;
}

}  // namespace

std::string document_to_json(const DesignDocument& doc) {
  ordered_json j;
  j["dimensions"] = {{"width", doc.page_width}, {"height", doc.page_height}};
  ordered_json elems = ordered_json::array();
  for (const auto& e : doc.elements) elems.push_back(element_to_json(e));
  j["elements"] = std::move(elems);
  ordered_json assets = ordered_json::array();
  for (const auto& a : doc.assets)
    assets.push_back(ordered_json{{"file", a.file}, {"width", a.width}, {"height", a.height}});
  j["assets"] = std::move(assets);
  return j.dump(2) + "\n";
}

DesignDocument document_from_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DocumentError(std::string("invalid design.json: ") + e.what());
  }
  DesignDocument doc;
  if (j.contains("dimensions")) {
    doc.page_width = j["dimensions"].value("width", std::int64_t(0));
    doc.page_height = j["dimensions"].value("height", std::int64_t(0));
  }
  int z_counter = 0;
  if (j.contains("elements"))
    for (const auto& e : j["elements"]) doc.elements.push_back(element_from_json(e, z_counter));
  if (j.contains("assets")) {
    for (const auto& a : j["assets"]) {
      assets::AssetRecord rec;
      rec.file = a.value("file", "");
      rec.width = a.value("width", 0u);
      rec.height = a.value("height", 0u);
      rec.format = file_extension_lower(rec.file) == "png" ? assets::AssetFormat::png
                                                           : assets::AssetFormat::jpeg;
      doc.assets.push_back(std::move(rec));
    }
  }
  return doc;
}

void save_document(const DesignDocument& doc, const std::filesystem::path& path) {
  write_file_text(path, document_to_json(doc));
}

DesignDocument load_document(const std::filesystem::path& path) {
  return document_from_json(read_file_text(path));
}

}  // namespace psd2code::pipeline
