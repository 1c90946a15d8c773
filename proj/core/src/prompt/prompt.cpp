#include "psd2code/prompt/prompt.hpp"

#include <json.hpp>

#include <map>

#include "psd2code/io.hpp"
#include "psd2code/text.hpp"

namespace psd2code::prompt {

using pipeline::DesignDocument;
using pipeline::ElementNode;
using pipeline::ElementType;

std::string class_for_element(const std::string& name, const std::string& id) {
  const std::string stem = kebab_case(name);
  if (stem.empty()) return id;
  return stem + "-" + id;
}

namespace {

const char* kSystemText =
    "You are a senior front-end engineer converting a structured page design into code.\n"
    "Respond with exactly two fenced code blocks and nothing else: first a ```jsx block\n"
    "with the React markup, then a ```scss block with the styles. Any additional\n"
    "explanatory text is a protocol violation.\n"
    "\n"
    "Engineering rules:\n"
    "- Use only div, span, img, p and h1-h6 elements with className attributes.\n"
    "- One kebab-case class per element; style everything through the SCSS block.\n"
    "- Position every element with position: absolute and integer pixel top/left.\n"
    "- Reference images via background-image: url(\"<asset file>\"); never inline data.\n"
    "- Plan z-index values so stacking follows the documented order.\n"
    "- Do not add elements, text or styles that the design data does not call for.\n";

const char* kSimpleSystemText = "Convert this design to React+SCSS code.\n";

bool is_bound_image(const ElementNode& e) {
  return e.type == ElementType::image && !e.asset_ref.empty();
}

void structure_lines(const std::vector<ElementNode>& nodes, int indent, std::string& out) {
  for (const auto& e : nodes) {
    out.append(std::size_t(indent) * 2, ' ');
    out += "- [" + e.id + "] <" + class_for_element(e.name, e.id) + "> " +
           pipeline::to_string(e.type);
    out += " at (" + std::to_string(e.x) + ", " + std::to_string(e.y) + ")";
    if (!is_bound_image(e))
      out += " size " + std::to_string(e.width) + "x" + std::to_string(e.height);
    if (e.type == ElementType::image && !e.asset_ref.empty()) out += " asset " + e.asset_ref;
    if (e.type == ElementType::text) {
      std::string t = e.text_content;
      for (char& c : t)
        if (c == '\n') c = ' ';
      out += " text \"" + t + "\"";
    }
    out += "\n";
    structure_lines(e.children, indent + 1, out);
  }
}

// Groups of >=3 same-size same-type siblings read like list/grid items; each
// member gets an explicit coordinate reminder.
void grid_reminders(const std::vector<ElementNode>& siblings, std::vector<std::string>& out) {
  std::map<std::string, std::vector<const ElementNode*>> buckets;
  for (const auto& e : siblings) {
    if (e.type == ElementType::container) continue;
    buckets[std::string(pipeline::to_string(e.type)) + ":" + std::to_string(e.width) + "x" +
            std::to_string(e.height)]
        .push_back(&e);
  }
  for (const auto& [key, members] : buckets) {
    (void)key;
    if (members.size() < 3) continue;
    for (const auto* e : members)
      out.push_back("  - ." + class_for_element(e->name, e->id) + " at left: " +
                    std::to_string(e->x) + "px, top: " + std::to_string(e->y) + "px");
  }
  for (const auto& e : siblings)
    if (!e.children.empty()) grid_reminders(e.children, out);
}

ConstraintEcho build_echo(const DesignDocument& doc) {
  ConstraintEcho echo;
  echo.page_width = doc.page_width;
  echo.page_height = doc.page_height;
  echo.assets = doc.assets;
  for (const auto& leaf : pipeline::leaf_boxes(doc)) {
    EchoElement e;
    e.id = leaf.id;
    e.cls = class_for_element(leaf.name, leaf.id);
    e.type = leaf.type;
    e.x = leaf.rect.left;
    e.y = leaf.rect.top;
    e.width = leaf.rect.width();
    e.height = leaf.rect.height();
    e.z = leaf.z;
    e.asset = leaf.asset_ref;
    e.text = leaf.text;
    echo.elements.push_back(std::move(e));
  }
  return echo;
}

Attachment load_attachment(const std::filesystem::path& path) {
  Attachment a;
  a.name = path.filename().string();
  a.bytes = read_file_bytes(path);
  a.digest = sha256_hex(a.bytes.data(), a.bytes.size());
  return a;
}

}  // namespace

std::string constraint_echo_to_json(const ConstraintEcho& echo) {
  nlohmann::ordered_json j;
  j["page"] = {{"width", echo.page_width}, {"height", echo.page_height}};
  auto elems = nlohmann::ordered_json::array();
  for (const auto& e : echo.elements) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["class"] = e.cls;
    je["type"] = pipeline::to_string(e.type);
    je["position"] = {{"x", e.x}, {"y", e.y}};
    je["size"] = {{"width", e.width}, {"height", e.height}};
    je["z"] = e.z;
    if (!e.asset.empty()) je["asset"] = e.asset;
    if (e.type == ElementType::text) je["text"] = e.text;
    elems.push_back(std::move(je));
  }
  j["elements"] = std::move(elems);
  auto assets = nlohmann::ordered_json::array();
  for (const auto& a : echo.assets)
    assets.push_back(nlohmann::ordered_json{{"file", a.file}, {"width", a.width}, {"height", a.height}});
  j["assets"] = std::move(assets);
  return j.dump(2) + "\n";
}

PromptBundle build_prompt(const DesignDocument& doc, const PromptOptions& options) {
  PromptBundle bundle;
  bundle.constraint_echo = build_echo(doc);
  if (bundle.constraint_echo.elements.empty())
    throw PromptError("empty document: nothing to generate");

  const AblationFlags& ab = options.ablation;

  if (options.screenshot && !ab.no_attachments) {
    bundle.attachments.push_back(load_attachment(*options.screenshot));
  }

  if (ab.simple_prompt) {
    bundle.system = kSimpleSystemText;
    bundle.user = "Design data:\n" + pipeline::document_to_json(doc);
    if (!bundle.attachments.empty()) bundle.user += "\nA reference screenshot is attached.\n";
    return bundle;
  }

  bundle.system = kSystemText;
  bundle.example = "Worked example.\n\nDesign data:\n" +
                   pipeline::document_to_json(example_document()) + "\nExpected output:\n" +
                   example_code();

  std::string user;
  if (!ab.no_structural) {
    user += "Target page: " + std::to_string(doc.page_width) + "x" +
            std::to_string(doc.page_height) + " pixels.\n\n";
    user += std::string(kStructureHeader) + "\n";
    structure_lines(doc.elements, 0, user);
    user += "\n" + std::string(kAssetsHeader) + "\n";
    if (doc.assets.empty()) {
      user += "(no asset files)\n";
    } else {
      for (const auto& a : doc.assets)
        user += "- " + a.file + " " + std::to_string(a.width) + "x" + std::to_string(a.height) + "\n";
    }
    user += "\n";
  }

  user += std::string(kConstraintsHeader) + "\n";
  if (ab.no_structural) {
    user += "- Recreate the layout from the attached screenshot.\n";
  } else {
    user += "- Positions come only from the structure data above; never infer them visually.\n";
    user += "- Element sizes are determined by the true asset dimensions in the asset list.\n";
  }
  user += "- Reference images via background-image.\n";
  user += "- Emit text content only for elements with type=text.\n";
  user += "- All top/left coordinates must be integers.\n";
  user += "- Separate stacked elements with distinct z-index values.\n";
  user += "- Overlap and out-of-bound placement is prohibited.\n";

  if (!ab.no_structural) {
    std::vector<std::string> reminders;
    grid_reminders(doc.elements, reminders);
    if (!reminders.empty()) {
      user += "- Coordinate reminders for repeated items:\n";
      for (const auto& r : reminders) user += r + "\n";
    }
  }

  if (!bundle.attachments.empty()) user += "\nA reference screenshot is attached.\n";

  bundle.user = user;
  return bundle;
}

std::string hash_prompt(const PromptBundle& bundle) {
  std::string material;
  material += sha256_hex(bundle.system);
  material += sha256_hex(bundle.example);
  material += sha256_hex(bundle.user);
  for (const auto& a : bundle.attachments) material += a.digest;
  return sha256_hex(material);
}

void export_bundle(const PromptBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_text(dir / "system.txt", bundle.system);
  write_file_text(dir / "example.txt", bundle.example);
  write_file_text(dir / "user.txt", bundle.user);
  write_file_text(dir / "constraints.json", constraint_echo_to_json(bundle.constraint_echo));
}

// ---------------------------------------------------------------------------
// Compiled-in worked example

const pipeline::DesignDocument& example_document() {
  static const DesignDocument doc = [] {
    DesignDocument d;
    d.page_width = 390;
    d.page_height = 300;

    ElementNode banner;
    banner.id = "e1";
    banner.name = "banner";
    banner.x = 0;
    banner.y = 0;
    banner.width = 390;
    banner.height = 120;
    banner.type = ElementType::image;
    banner.asset_ref = "banner.png";
    banner.z_hint = 0;

    ElementNode title;
    title.id = "e2";
    title.name = "title";
    title.x = 20;
    title.y = 150;
    title.width = 350;
    title.height = 32;
    title.type = ElementType::text;
    title.text_content = "Spring Sale";
    title.z_hint = 1;

    ElementNode cta;
    cta.id = "e3";
    cta.name = "btn_go";
    cta.x = 120;
    cta.y = 220;
    cta.width = 150;
    cta.height = 48;
    cta.type = ElementType::image;
    cta.asset_ref = "btn_go.png";
    cta.z_hint = 2;

    d.elements = {banner, title, cta};
    d.assets = {{"banner.png", "banner.png", 390, 120, assets::AssetFormat::png},
                {"btn_go.png", "btn_go.png", 150, 48, assets::AssetFormat::png}};
    return d;
  }();
  return doc;
}

const std::string& example_code() {
  static const std::string code =
      "```jsx\n"
      "<div className=\"page\">\n"
      "  <div className=\"banner-e1\"></div>\n"
      "  <p className=\"title-e2\">Spring Sale</p>\n"
      "  <div className=\"btn-go-e3\"></div>\n"
      "</div>\n"
      "```\n"
      "```scss\n"
      ".page {\n"
      "  position: absolute;\n"
      "  top: 0px;\n"
      "  left: 0px;\n"
      "  width: 390px;\n"
      "  height: 300px;\n"
      "\n"
      "  .banner-e1 {\n"
      "    position: absolute;\n"
      "    top: 0px;\n"
      "    left: 0px;\n"
      "    width: 390px;\n"
      "    height: 120px;\n"
      "    z-index: 0;\n"
      "    background-image: url(\"banner.png\");\n"
      "  }\n"
      "\n"
      "  .title-e2 {\n"
      "    position: absolute;\n"
      "    top: 150px;\n"
      "    left: 20px;\n"
      "    width: 350px;\n"
      "    height: 32px;\n"
      "    z-index: 1;\n"
      "    font-size: 16px;\n"
      "    color: #000000;\n"
      "  }\n"
      "\n"
      "  .btn-go-e3 {\n"
      "    position: absolute;\n"
      "    top: 220px;\n"
      "    left: 120px;\n"
      "    width: 150px;\n"
      "    height: 48px;\n"
      "    z-index: 2;\n"
      "    background-image: url(\"btn_go.png\");\n"
      "  }\n"
      "}\n"
      "```\n";
  return code;
}

}  // namespace psd2code::prompt
