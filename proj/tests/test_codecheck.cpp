#include <doctest.h>

#include <algorithm>
#include <random>

#include "psd2code/assets/assets.hpp"
#include "psd2code/codecheck/validate.hpp"
#include "psd2code/llm/client.hpp"
#include "psd2code/pipeline/pipeline.hpp"
#include "psd2code/prompt/prompt.hpp"
#include "psd2code/run/fixtures.hpp"
#include "support/test_support.hpp"

using namespace psd2code;
using codecheck::BoxKind;
using codecheck::CheckErrorKind;
using codecheck::CodeCheckError;
using codecheck::ComputedLayout;
using codecheck::GeneratedCode;
using codecheck::StyleSheet;

namespace {

CheckErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CodeCheckError& e) {
    return e.kind();
  }
  FAIL("expected CodeCheckError");
  return CheckErrorKind::syntax;
}

}  // namespace

TEST_CASE("extract_blocks handles the dual-block protocol") {
  SUBCASE("well-formed response") {
    const auto out = codecheck::extract_blocks("```jsx\n<div/>\n```\n```scss\n.a{}\n```\n");
    CHECK(out.code.jsx == "<div/>\n");
    CHECK(out.code.scss == ".a{}\n");
    CHECK(out.violations.empty());
  }
  SUBCASE("prose around the blocks is a warning, blocks still extracted") {
    const auto out = codecheck::extract_blocks(
        "Sure! Here is the code:\n```jsx\n<div/>\n```\n```scss\n.a{}\n```\nHope this helps!");
    CHECK(out.code.jsx == "<div/>\n");
    REQUIRE_FALSE(out.violations.empty());
    CHECK(out.violations[0].code == "extra-text");
  }
  SUBCASE("missing scss block") {
    CHECK(kind_of([] { codecheck::extract_blocks("```jsx\n<div/>\n```\n"); }) ==
          CheckErrorKind::protocol_missing_scss);
  }
  SUBCASE("missing jsx block") {
    CHECK(kind_of([] { codecheck::extract_blocks("```scss\n.a{}\n```\n"); }) ==
          CheckErrorKind::protocol_missing_jsx);
  }
  SUBCASE("duplicate block") {
    CHECK(kind_of([] {
            codecheck::extract_blocks("```jsx\nA\n```\n```jsx\nB\n```\n```scss\n.a{}\n```\n");
          }) == CheckErrorKind::protocol_duplicate_block);
  }
  SUBCASE("unknown block labels are warnings") {
    const auto out = codecheck::extract_blocks(
        "```jsx\n<div/>\n```\n```scss\n.a{}\n```\n```bash\nrm\n```\n");
    bool seen = false;
    for (const auto& v : out.violations) seen = seen || v.code == "unexpected-block";
    CHECK(seen);
  }
}

TEST_CASE("parse_jsx accepts the restricted dialect") {
  const auto tree = codecheck::parse_jsx(
      "<div className=\"page\">\n  <div className=\"hero\"/>\n  <p className=\"t\">Hi &amp; bye</p>\n</div>");
  CHECK(tree.root.tag == "div");
  REQUIRE(tree.root.children.size() == 2);
  CHECK(tree.root.children[0].attribute("className") == "hero");
  CHECK(tree.root.children[1].text == "Hi & bye");
}

TEST_CASE("parse_jsx rejections") {
  CHECK(kind_of([] { codecheck::parse_jsx("<div><span></div>"); }) == CheckErrorKind::syntax);
  CHECK(kind_of([] { codecheck::parse_jsx("<div onClick={go}/>"); }) ==
        CheckErrorKind::disallowed_attribute);
  CHECK(kind_of([] { codecheck::parse_jsx("<div style=\"x\"/>"); }) ==
        CheckErrorKind::disallowed_attribute);
  CHECK(kind_of([] { codecheck::parse_jsx("<script src=\"x\"/>"); }) ==
        CheckErrorKind::disallowed_tag);
  CHECK(kind_of([] { codecheck::parse_jsx("<div>{value}</div>"); }) == CheckErrorKind::syntax);
  CHECK(kind_of([] { codecheck::parse_jsx("<div/><div/>"); }) == CheckErrorKind::syntax);
}

TEST_CASE("jsx text entities round-trip through the encoder") {
  const std::string raw = "a < b & {c} > d";
  const auto tree =
      codecheck::parse_jsx("<p className=\"x\">" + codecheck::encode_jsx_text(raw) + "</p>");
  CHECK(tree.root.text == raw);
}

TEST_CASE("parse_scss handles rules, nesting and violations") {
  SUBCASE("flat rule with five declarations") {
    const auto sheet = codecheck::parse_scss(
        ".hero { position: absolute; top: 10px; left: 20px; width: 120px; height: 40px; }");
    REQUIRE(sheet.rules.size() == 1);
    const auto& d = sheet.rules[0].decls;
    CHECK(*d.position == "absolute");
    CHECK(*d.top == 10);
    CHECK(*d.left == 20);
    CHECK(*d.width == 120);
    CHECK(*d.height == 40);
    CHECK(sheet.violations.empty());
  }
  SUBCASE("nesting flattens to descendant paths") {
    const auto sheet = codecheck::parse_scss(".page { top: 0px; .hero { top: 5px; } }");
    CHECK(sheet.find_exact({"page"}) != nullptr);
    const auto* nested = sheet.find_exact({"page", "hero"});
    REQUIRE(nested != nullptr);
    CHECK(*nested->decls.top == 5);
  }
  SUBCASE("fractional pixel values are flagged and rounded") {
    const auto sheet = codecheck::parse_scss(".a { top: 10.5px; }");
    bool flagged = false;
    for (const auto& v : sheet.violations) flagged = flagged || v.code == "non-integer-coordinate";
    CHECK(flagged);
    CHECK(*sheet.rules[0].decls.top == 11);
  }
  SUBCASE("unknown properties are warnings") {
    const auto sheet = codecheck::parse_scss(".a { box-shadow: 0 0 4px; top: 1px; }");
    bool flagged = false;
    for (const auto& v : sheet.violations) flagged = flagged || v.code == "unknown-property";
    CHECK(flagged);
    REQUIRE(sheet.rules.size() == 1);
    CHECK(*sheet.rules[0].decls.top == 1);
  }
  SUBCASE("class names normalize to kebab-case with a warning") {
    const auto sheet = codecheck::parse_scss(".heroBox { top: 1px; }");
    REQUIRE(sheet.rules.size() == 1);
    CHECK(sheet.rules[0].path == std::vector<std::string>{"hero-box"});
    bool flagged = false;
    for (const auto& v : sheet.violations) flagged = flagged || v.code == "class-normalized";
    CHECK(flagged);
  }
  SUBCASE("comments and url values parse") {
    const auto sheet = codecheck::parse_scss(
        "// line comment\n.a { /* block */ background-image: url(\"assets/x.png\"); }");
    REQUIRE(sheet.rules.size() == 1);
    CHECK(*sheet.rules[0].decls.background_image == "x.png");
  }
  SUBCASE("unbalanced braces are a syntax error") {
    CHECK_THROWS_AS(codecheck::parse_scss(".a { top: 1px; "), CodeCheckError);
  }
}

namespace {

ComputedLayout layout_of(const std::string& jsx, const std::string& scss, std::int64_t w = 780,
                         std::int64_t h = 1760) {
  return codecheck::compute_layout(codecheck::parse_jsx(jsx), codecheck::parse_scss(scss), w, h);
}

const codecheck::LayoutBox* box_for(const ComputedLayout& layout, const std::string& cls) {
  for (const auto& b : layout.boxes)
    if (b.cls == cls) return &b;
  return nullptr;
}

}  // namespace

TEST_CASE("compute_layout composes offsets from parents") {
  const auto layout = layout_of(
      "<div className=\"page\"><div className=\"hero\"/></div>",
      ".page { position: absolute; top: 0px; left: 0px; width: 780px; height: 1760px; }"
      ".hero { position: absolute; top: 10px; left: 20px; width: 120px; height: 40px;"
      " background-image: url(\"hero.png\"); }");
  const auto* hero = box_for(layout, "hero");
  REQUIRE(hero != nullptr);
  CHECK(hero->rect == Rect{10, 20, 50, 140});
  CHECK(hero->kind == BoxKind::image);
  CHECK(hero->asset == "hero.png");
}

TEST_CASE("compute_layout: nested container offsets compose additively") {
  const auto layout = layout_of(
      "<div className=\"page\"><div className=\"card\"><div className=\"icon\"/></div></div>",
      ".page { top: 0px; left: 0px; width: 500px; height: 500px; }"
      ".card { top: 100px; left: 50px; width: 200px; height: 200px; }"
      ".icon { top: 10px; left: 20px; width: 32px; height: 32px;"
      " background-image: url(\"i.png\"); }",
      500, 500);
  const auto* icon = box_for(layout, "icon");
  REQUIRE(icon != nullptr);
  CHECK(icon->rect == Rect{110, 70, 142, 102});
}

TEST_CASE("compute_layout: class without a rule is a missing-rule error") {
  CHECK(kind_of([] {
          layout_of("<div className=\"page\"><div className=\"ghost\"/></div>",
                    ".page { top: 0px; left: 0px; width: 10px; height: 10px; }");
        }) == CheckErrorKind::missing_rule);
}

TEST_CASE("compute_layout: nested scss equals its hand-flattened form") {
  const std::string jsx = "<div className=\"page\"><p className=\"title\">Hi</p></div>";
  const std::string nested =
      ".page { top: 0px; left: 0px; width: 300px; height: 300px;"
      "  .title { top: 40px; left: 10px; width: 100px; height: 20px; } }";
  const std::string flat =
      ".page { top: 0px; left: 0px; width: 300px; height: 300px; }"
      ".page .title { top: 40px; left: 10px; width: 100px; height: 20px; }";
  const auto a = layout_of(jsx, nested, 300, 300);
  const auto b = layout_of(jsx, flat, 300, 300);
  REQUIRE(a.boxes.size() == b.boxes.size());
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    CHECK(a.boxes[i].rect == b.boxes[i].rect);
    CHECK(a.boxes[i].kind == b.boxes[i].kind);
  }
}

TEST_CASE("compute_layout is invariant under scss rule permutation") {
  const std::string jsx =
      "<div className=\"page\"><div className=\"a\"/><p className=\"b\">t</p></div>";
  const std::vector<std::string> rules = {
      ".page { top: 0px; left: 0px; width: 400px; height: 400px; }",
      ".a { top: 10px; left: 10px; width: 50px; height: 50px; background-image: url(\"a.png\"); }",
      ".b { top: 100px; left: 10px; width: 80px; height: 20px; }",
  };
  std::vector<std::size_t> order = {0, 1, 2};
  std::vector<ComputedLayout> layouts;
  do {
    std::string scss;
    for (const auto i : order) scss += rules[i] + "\n";
    layouts.push_back(layout_of(jsx, scss, 400, 400));
  } while (std::next_permutation(order.begin(), order.end()));
  for (std::size_t i = 1; i < layouts.size(); ++i) {
    REQUIRE(layouts[i].boxes.size() == layouts[0].boxes.size());
    for (std::size_t b = 0; b < layouts[0].boxes.size(); ++b) {
      CHECK(layouts[i].boxes[b].rect == layouts[0].boxes[b].rect);
      CHECK(layouts[i].boxes[b].z == layouts[0].boxes[b].z);
    }
  }
}

namespace {

pipeline::DesignDocument doc_with_asset() {
  pipeline::DesignDocument doc;
  doc.page_width = 300;
  doc.page_height = 300;
  pipeline::ElementNode img;
  img.id = "e1";
  img.name = "hero";
  img.type = pipeline::ElementType::image;
  img.x = 10;
  img.y = 20;
  img.width = 120;
  img.height = 40;
  img.asset_ref = "hero.png";
  pipeline::ElementNode label;
  label.id = "e2";
  label.name = "title";
  label.type = pipeline::ElementType::text;
  label.x = 10;
  label.y = 100;
  label.width = 200;
  label.height = 24;
  label.text_content = "Spring Sale";
  label.z_hint = 1;
  doc.elements = {img, label};
  doc.assets = {{"hero.png", "", 120, 40, assets::AssetFormat::png}};
  return doc;
}

GeneratedCode template_code_for(const pipeline::DesignDocument& doc) {
  const auto bundle = prompt::build_prompt(doc, {});
  return codecheck::extract_blocks(llm::template_generate(bundle.constraint_echo)).code;
}

}  // namespace

TEST_CASE("validate: template output has zero errors and exact leaf boxes") {
  const auto doc = doc_with_asset();
  const auto code = template_code_for(doc);
  const auto report = codecheck::validate(code, doc);
  CHECK(report.syntax_ok);
  CHECK(report.error_count() == 0);
  REQUIRE(report.layout.has_value());

  const auto leaves = report.layout->leaves();
  const auto truth = pipeline::leaf_boxes(doc);
  REQUIRE(leaves.size() == truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    CHECK(leaves[i].rect == truth[i].rect);
    CHECK(leaves[i].z == truth[i].z);
    CHECK((leaves[i].kind == BoxKind::text) ==
          (truth[i].type == pipeline::ElementType::text));
    CHECK(leaves[i].asset == truth[i].asset_ref);
    CHECK(leaves[i].text == truth[i].text);
  }
  CHECK(report.mean_position_deviation == doctest::Approx(0.0));
}

TEST_CASE("validate flags unknown assets, size drift, out-of-bound and hallucinated text") {
  const auto doc = doc_with_asset();

  SUBCASE("unknown asset") {
    auto code = template_code_for(doc);
    std::size_t at = code.scss.find("hero.png");
    REQUIRE(at != std::string::npos);
    code.scss.replace(at, 8, "ghost.png");
    const auto report = codecheck::validate(code, doc);
    CHECK(report.has_error("unknown-asset"));
    CHECK_FALSE(report.resources_ok());
  }

  SUBCASE("size drift") {
    auto code = template_code_for(doc);
    std::size_t at = code.scss.find("width: 120px");
    REQUIRE(at != std::string::npos);
    code.scss.replace(at, 12, "width: 118px");
    const auto report = codecheck::validate(code, doc);
    CHECK(report.has_error("size-drift"));
    CHECK_FALSE(report.resources_ok());
  }

  SUBCASE("out of bound") {
    auto code = template_code_for(doc);
    std::size_t at = code.scss.find("left: 10px");
    REQUIRE(at != std::string::npos);
    code.scss.replace(at, 10, "left: 290px");
    const auto report = codecheck::validate(code, doc);
    CHECK(report.has_error("out-of-bound"));
  }

  SUBCASE("hallucinated text") {
    auto code = template_code_for(doc);
    std::size_t at = code.jsx.find("Spring Sale");
    REQUIRE(at != std::string::npos);
    code.jsx.replace(at, 11, "Click here!");
    const auto report = codecheck::validate(code, doc);
    CHECK(report.has_error("hallucinated-text"));
  }

  SUBCASE("overlap at equal z is a warning, distinct z is clean") {
    auto heavy = doc;
    heavy.elements[1] = heavy.elements[0];
    heavy.elements[1].id = "e2";
    heavy.elements[1].name = "hero2";
    heavy.elements[1].z_hint = 0;  // same z as e1
    const auto code = template_code_for(heavy);
    const auto report = codecheck::validate(code, heavy);
    bool warned = false;
    for (const auto& v : report.violations) warned = warned || v.code == "overlap";
    CHECK(warned);
    CHECK(report.error_count() == 0);
  }
}

TEST_CASE("validate round trip over randomized pipeline documents") {
  std::mt19937_64 rng(123);
  pipeline::FilterConfig cfg;
  for (int iter = 0; iter < 10; ++iter) {
    const auto tree = run::random_document_tree(rng);
    const auto normalized = pipeline::normalize_coordinates(pipeline::filter_layers(tree, cfg));
    auto doc = pipeline::build_document(normalized, cfg, {}, {});
    // Bind every image element to a synthetic record matching its size.
    std::vector<assets::AssetRecord> records;
    pipeline::for_each_element(doc, [&](pipeline::ElementNode& e, int) {
      if (e.type == pipeline::ElementType::image)
        records.push_back({e.name + ".png", "", std::uint32_t(e.width), std::uint32_t(e.height),
                           assets::AssetFormat::png});
    });
    assets::align(doc, records);

    const auto code = template_code_for(doc);
    const auto report = codecheck::validate(code, doc);
    CAPTURE(iter);
    CHECK(report.syntax_ok);
    CHECK(report.error_count() == 0);
    REQUIRE(report.layout.has_value());
    const auto leaves = report.layout->leaves();
    const auto truth = pipeline::leaf_boxes(doc);
    REQUIRE(leaves.size() == truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) CHECK(leaves[i].rect == truth[i].rect);
  }
}

TEST_CASE("validation report serializes with stable top-level fields") {
  const auto doc = doc_with_asset();
  const auto report = codecheck::validate(template_code_for(doc), doc);
  const std::string json = codecheck::validation_report_to_json(report);
  const auto syntax_at = json.find("\"syntax_ok\"");
  const auto violations_at = json.find("\"violations\"");
  const auto layout_at = json.find("\"layout\"");
  REQUIRE(syntax_at != std::string::npos);
  REQUIRE(violations_at != std::string::npos);
  REQUIRE(layout_at != std::string::npos);
  CHECK(syntax_at < violations_at);
  CHECK(violations_at < layout_at);
}
