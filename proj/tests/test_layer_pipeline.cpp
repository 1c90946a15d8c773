#include <doctest.h>

#include <random>
#include <set>

#include "psd2code/pipeline/pipeline.hpp"
#include "psd2code/run/fixtures.hpp"
#include "support/test_support.hpp"

using namespace psd2code;
using pipeline::DesignDocument;
using pipeline::DocumentError;
using pipeline::ElementType;
using pipeline::FilterConfig;
using pipeline::PresetLibrary;
using pipeline::Removal;
using psd::LayerKind;
using psd::LayerNode;
using psd::RawDesignInput;

namespace {

RawDesignInput page(std::vector<LayerNode> roots, std::uint32_t w = 780, std::uint32_t h = 1760) {
  RawDesignInput input;
  input.header.width = w;
  input.header.height = h;
  input.roots = std::move(roots);
  return input;
}

LayerNode pixel(const std::string& name, Rect bounds, double opacity = 1.0, bool visible = true) {
  LayerNode n;
  n.name = name;
  n.kind = LayerKind::pixel;
  n.bounds = bounds;
  n.opacity = opacity;
  n.visible = visible;
  return n;
}

LayerNode text(const std::string& name, Rect bounds, const std::string& content) {
  LayerNode n;
  n.name = name;
  n.kind = LayerKind::text;
  n.bounds = bounds;
  n.text_content = content;
  return n;
}

LayerNode group(const std::string& name, Rect bounds, std::vector<LayerNode> children) {
  LayerNode n;
  n.name = name;
  n.kind = LayerKind::group;
  n.bounds = bounds;
  n.children = std::move(children);
  return n;
}

const std::string* reason_for(const std::vector<Removal>& log, const std::string& name) {
  for (const auto& r : log)
    if (r.layer_name == name) return &r.reason;
  return nullptr;
}

}  // namespace

TEST_CASE("filter removes hidden, near-transparent and default-named layers") {
  FilterConfig cfg;
  std::vector<Removal> log;
  const auto input = page({
      pixel("visible", Rect{0, 0, 100, 100}),
      pixel("ghost", Rect{0, 0, 100, 100}, 1.0, false),
      pixel("faint", Rect{0, 0, 100, 100}, 0.02),
      pixel("Layer 3", Rect{0, 0, 100, 100}),
      pixel("tiny", Rect{0, 0, 1, 100}),
  });
  const auto filtered = pipeline::filter_layers(input, cfg, &log);
  REQUIRE(filtered.roots.size() == 1);
  CHECK(filtered.roots[0].name == "visible");
  CHECK(*reason_for(log, "ghost") == "hidden");
  CHECK(*reason_for(log, "faint") == "near-transparent");
  CHECK(*reason_for(log, "Layer 3") == "system-default name");
  CHECK(*reason_for(log, "tiny") == "too-small");
}

TEST_CASE("filter drops groups whose children were all removed") {
  FilterConfig cfg;
  std::vector<Removal> log;
  const auto input = page({group(
      "wrapper", Rect{0, 0, 100, 100},
      {pixel("Layer 1", Rect{0, 0, 100, 100}), pixel("Group 2", Rect{0, 0, 50, 50})})});
  const auto filtered = pipeline::filter_layers(input, cfg, &log);
  CHECK(filtered.roots.empty());
  CHECK(*reason_for(log, "wrapper") == "empty group");
}

TEST_CASE("filter monotonicity: tighter thresholds never keep more layers") {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 30; ++iter) {
    const auto input = run::random_round_trip_tree(rng);
    FilterConfig loose;
    FilterConfig tight;
    tight.min_opacity = 0.5;
    tight.min_area = 400.0;
    const auto survivors_loose = psd::count_layers(pipeline::filter_layers(input, loose).roots);
    const auto survivors_tight = psd::count_layers(pipeline::filter_layers(input, tight).roots);
    CHECK(survivors_tight <= survivors_loose);
  }
}

TEST_CASE("normalize clips to the page and drops out-of-page layers") {
  std::vector<Removal> log;
  const auto input = page({
      pixel("clipped", Rect{-10, -10, 50, 50}),
      pixel("inside", Rect{0, 0, 100, 100}),
      pixel("gone", Rect{0, 800, 100, 900}),  // x in [800,900] on a 780-wide page
  });
  const auto normalized = pipeline::normalize_coordinates(input, &log);
  REQUIRE(normalized.roots.size() == 2);
  CHECK(normalized.roots[0].bounds == Rect{0, 0, 50, 50});
  CHECK(normalized.roots[1].bounds == Rect{0, 0, 100, 100});
  CHECK(*reason_for(log, "gone") == "fully out of bounds");
}

TEST_CASE("group stats: coverage arithmetic") {
  SUBCASE("full cover") {
    const auto g = group("g", Rect{0, 0, 100, 100}, {pixel("p", Rect{0, 0, 100, 100})});
    const auto stats = pipeline::compute_group_stats(g);
    CHECK(stats.pixel_count == 1);
    CHECK(stats.coverage == doctest::Approx(1.0));
  }
  SUBCASE("quarter cover") {
    const auto g = group("g", Rect{0, 0, 100, 100}, {pixel("p", Rect{0, 0, 50, 50})});
    CHECK(pipeline::compute_group_stats(g).coverage == doctest::Approx(0.25));
  }
  SUBCASE("two halves cover fully") {
    const auto g = group("g", Rect{0, 0, 100, 100},
                         {pixel("a", Rect{0, 0, 100, 50}), pixel("b", Rect{0, 50, 100, 100})});
    CHECK(pipeline::compute_group_stats(g).coverage == doctest::Approx(1.0));
  }
  SUBCASE("no pixels means zero coverage") {
    const auto g = group("g", Rect{0, 0, 100, 100}, {text("t", Rect{0, 0, 10, 10}, "x")});
    const auto stats = pipeline::compute_group_stats(g);
    CHECK(stats.coverage == 0.0);
    CHECK(stats.text_count == 1);
    CHECK_FALSE(stats.best_candidate.has_value());
  }
  SUBCASE("best candidate is the largest pixel child, first on ties") {
    const auto g = group("g", Rect{0, 0, 100, 100},
                         {pixel("small", Rect{0, 0, 10, 10}), pixel("big", Rect{0, 0, 90, 90}),
                          pixel("big2", Rect{10, 10, 100, 100})});
    const auto stats = pipeline::compute_group_stats(g);
    REQUIRE(stats.best_candidate.has_value());
    CHECK(g.children[*stats.best_candidate].name == "big");  // 8100 each, first wins
  }
}

TEST_CASE("classify_group spec examples") {
  FilterConfig cfg;
  SUBCASE("full-coverage plain group folds to the candidate bounds") {
    const auto g = group("banner", Rect{0, 0, 100, 100}, {pixel("p", Rect{0, 0, 100, 100})});
    const auto d = pipeline::classify_group(g, pipeline::compute_group_stats(g), cfg);
    CHECK(d.fold);
    CHECK(d.adopted == Rect{0, 0, 100, 100});
  }
  SUBCASE("a text child blocks folding") {
    const auto g = group("banner", Rect{0, 0, 100, 100},
                         {pixel("p", Rect{0, 0, 100, 100}), text("t", Rect{0, 0, 10, 10}, "x")});
    CHECK_FALSE(pipeline::classify_group(g, pipeline::compute_group_stats(g), cfg).fold);
  }
  SUBCASE("three candidates below strict coverage stay a container") {
    const auto g = group("banner", Rect{0, 0, 100, 100},
                         {pixel("a", Rect{0, 0, 1, 100}), pixel("b", Rect{1, 0, 2, 100}),
                          pixel("c", Rect{2, 0, 90, 100})});
    const auto stats = pipeline::compute_group_stats(g);
    CHECK(stats.coverage == doctest::Approx(0.90));
    CHECK(stats.pixel_count == 3);
    CHECK_FALSE(pipeline::classify_group(g, stats, cfg).fold);
  }
  SUBCASE("background keyword plus strict coverage folds despite a subgroup") {
    const auto sub = group("inner", Rect{97, 0, 100, 3}, {pixel("q", Rect{97, 0, 100, 3})});
    const auto g = group("list_bg", Rect{0, 0, 100, 100},
                         {pixel("p", Rect{0, 0, 97, 100}), sub});
    const auto stats = pipeline::compute_group_stats(g);
    CHECK(stats.coverage == doctest::Approx(0.97));
    const auto d = pipeline::classify_group(g, stats, cfg);
    CHECK(d.fold);
    CHECK(d.adopted == Rect{0, 0, 97, 100});
  }
}

namespace {

// Independent restatement of the folding rule, evaluated straight from the
// enumeration parameters rather than from LayerNode stats.
bool fold_oracle(int pixel_count, bool has_text, double coverage, bool bg_kw, bool structural_kw,
                 bool container_kw, bool has_subgroup) {
  if (pixel_count < 1) return false;
  if (coverage < 0.85) return false;
  if (has_text) return false;
  if (structural_kw) return false;
  if (!(pixel_count <= 2 || coverage >= 0.95)) return false;
  if ((container_kw || has_subgroup) && !(coverage >= 0.95 && bg_kw)) return false;
  return true;
}

LayerNode enumeration_group(int pixel_count, bool has_text, double coverage, bool bg_kw,
                            bool structural_kw, bool container_kw, bool has_subgroup) {
  std::string name = "grp";
  if (bg_kw) name += "_bg";
  if (structural_kw) name += "_mask";
  if (container_kw) name += "_list";

  std::vector<LayerNode> children;
  const std::int64_t target_h = std::int64_t(llround(coverage * 100.0));
  for (int i = 0; i < pixel_count; ++i) {
    const std::int64_t top = i;
    const std::int64_t bottom = (i == pixel_count - 1) ? target_h : i + 1;
    children.push_back(pixel("px" + std::to_string(i), Rect{top, 0, bottom, 100}));
  }
  if (has_text) children.push_back(text("label", Rect{0, 0, 1, 1}, "t"));
  if (has_subgroup)
    children.push_back(group("sub", Rect{0, 0, 2, 2}, {pixel("inner", Rect{0, 0, 2, 2})}));
  return group(name, Rect{0, 0, 100, 100}, std::move(children));
}

}  // namespace

TEST_CASE("classify_group agrees with the brute-force rule oracle on the full grid") {
  FilterConfig cfg;
  const double coverages[] = {0.5, 0.85, 0.90, 0.95, 1.0};
  int cases = 0;
  for (int pixel_count = 0; pixel_count <= 3; ++pixel_count) {
    for (int has_text = 0; has_text <= 1; ++has_text) {
      for (const double coverage : coverages) {
        for (int bg = 0; bg <= 1; ++bg) {
          for (int structural = 0; structural <= 1; ++structural) {
            for (int container = 0; container <= 1; ++container) {
              for (int subgroup = 0; subgroup <= 1; ++subgroup) {
                const auto g = enumeration_group(pixel_count, has_text, coverage, bg, structural,
                                                 container, subgroup);
                const auto stats = pipeline::compute_group_stats(g);
                if (pixel_count > 0) REQUIRE(stats.coverage == doctest::Approx(coverage));
                const bool expected =
                    fold_oracle(pixel_count, has_text, pixel_count > 0 ? coverage : 0.0, bg,
                                structural, container, subgroup);
                const bool actual = pipeline::classify_group(g, stats, cfg).fold;
                CAPTURE(pixel_count);
                CAPTURE(has_text);
                CAPTURE(coverage);
                CAPTURE(bg);
                CAPTURE(structural);
                CAPTURE(container);
                CAPTURE(subgroup);
                REQUIRE(actual == expected);
                ++cases;
              }
            }
          }
        }
      }
    }
  }
  CHECK(cases == 640);
}

TEST_CASE("classify_text routes through assets and the preset library") {
  FilterConfig cfg;
  const std::vector<assets::AssetRecord> files = {
      {"btn_start.png", "", 120, 40, assets::AssetFormat::png}};
  PresetLibrary preset{{"GO", "go_badge.png"}};

  SUBCASE("exact asset stem match wins") {
    const auto d = pipeline::classify_text(text("btn_start", Rect{0, 0, 10, 10}, "Start"), files,
                                           preset, cfg);
    CHECK(d.as_image);
    CHECK(d.asset == "btn_start.png");
  }
  SUBCASE("short text hits the preset") {
    const auto d = pipeline::classify_text(text("t", Rect{0, 0, 10, 10}, "GO"), files, preset, cfg);
    CHECK(d.as_image);
    CHECK(d.asset == "go_badge.png");
  }
  SUBCASE("specially formatted text up to 10 chars hits the preset") {
    PresetLibrary numbers{{"2026-08-11", "date_badge.png"}};
    const auto d =
        pipeline::classify_text(text("t", Rect{0, 0, 10, 10}, "2026-08-11"), files, numbers, cfg);
    CHECK(d.as_image);
  }
  SUBCASE("long unmatched text stays text") {
    const auto d = pipeline::classify_text(
        text("t", Rect{0, 0, 10, 10}, "Welcome to the Spring event"), files, preset, cfg);
    CHECK_FALSE(d.as_image);
  }
  SUBCASE("three CJK characters count as short text") {
    PresetLibrary cjk{{"开始吧", "go.png"}};
    const auto d = pipeline::classify_text(text("t", Rect{0, 0, 10, 10}, "开始吧"), files, cjk, cfg);
    CHECK(d.as_image);
  }
}

TEST_CASE("build_document basics") {
  FilterConfig cfg;
  PresetLibrary preset;

  SUBCASE("single pixel layer becomes one image element") {
    const auto doc =
        pipeline::build_document(page({pixel("hero", Rect{0, 0, 100, 200})}), cfg, {}, preset);
    REQUIRE(doc.elements.size() == 1);
    CHECK(doc.elements[0].id == "e1");
    CHECK(doc.elements[0].type == ElementType::image);
    CHECK(doc.elements[0].x == 0);
    CHECK(doc.elements[0].width == 200);
    CHECK(doc.elements[0].height == 100);
    CHECK(pipeline::document_depth(doc) == 1);
  }

  SUBCASE("folding group emits a single image element, no container") {
    const auto input =
        page({group("banner", Rect{0, 0, 100, 100}, {pixel("p", Rect{0, 0, 100, 100})})});
    const auto doc = pipeline::build_document(input, cfg, {}, preset);
    REQUIRE(doc.elements.size() == 1);
    CHECK(doc.elements[0].type == ElementType::image);
    CHECK(doc.elements[0].name == "banner");
    CHECK(doc.elements[0].children.empty());
  }

  SUBCASE("deep single-child nesting flattens to the depth bound with stable absolute position") {
    LayerNode node = pixel("leaf", Rect{600, 300, 650, 380});
    for (int i = 8; i >= 1; --i)
      node = group("wrap" + std::to_string(i), node.bounds, {node});
    const auto doc = pipeline::build_document(page({node}), cfg, {}, preset);
    CHECK(pipeline::document_depth(doc) <= cfg.max_depth);
    bool found = false;
    pipeline::for_each_element(doc, [&](const pipeline::ElementNode& e, int) {
      if (e.type != ElementType::image) return;
      found = true;
      CHECK(e.x == 300);
      CHECK(e.y == 600);
      CHECK(e.width == 80);
      CHECK(e.height == 50);
    });
    CHECK(found);
  }

  SUBCASE("nothing surviving raises a degenerate-document error") {
    CHECK_THROWS_AS(pipeline::build_document(page({}), cfg, {}, preset), DocumentError);
  }
}

TEST_CASE("build_document determinism and invariants over random inputs") {
  FilterConfig cfg;
  PresetLibrary preset;
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 25; ++iter) {
    const auto tree = run::random_document_tree(rng);
    const auto normalized = pipeline::normalize_coordinates(pipeline::filter_layers(tree, cfg));
    const auto doc1 = pipeline::build_document(normalized, cfg, {}, preset);
    const auto doc2 = pipeline::build_document(normalized, cfg, {}, preset);
    CHECK(pipeline::document_to_json(doc1) == pipeline::document_to_json(doc2));

    CHECK(pipeline::document_depth(doc1) <= cfg.max_depth);
    std::set<std::string> ids;
    pipeline::for_each_element(doc1, [&](const pipeline::ElementNode& e, int) {
      ids.insert(e.id);
      CHECK(e.x >= 0);
      CHECK(e.y >= 0);
      CHECK(e.width >= 0);
      CHECK(e.height >= 0);
      CHECK(e.x + e.width <= doc1.page_width);
      CHECK(e.y + e.height <= doc1.page_height);
      if (e.type != ElementType::container) CHECK(e.children.empty());
    });
    CHECK(ids.size() == pipeline::element_count(doc1));
  }
}

TEST_CASE("consistency check findings") {
  DesignDocument doc;
  doc.page_width = 100;
  doc.page_height = 100;

  SUBCASE("well-formed document yields no findings") {
    pipeline::ElementNode e;
    e.id = "e1";
    e.type = ElementType::image;
    e.width = 50;
    e.height = 50;
    doc.elements = {e};
    CHECK(pipeline::consistency_check(doc).empty());
  }

  SUBCASE("identical sibling boxes trigger one overlap warning") {
    pipeline::ElementNode a, b;
    a.id = "e1";
    b.id = "e2";
    a.type = b.type = ElementType::image;
    a.width = b.width = 50;
    a.height = b.height = 50;
    doc.elements = {a, b};
    const auto findings = pipeline::consistency_check(doc);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].code == "overlap");
    CHECK(findings[0].severity == pipeline::FindingSeverity::warning);
  }

  SUBCASE("x+width beyond the page is an error finding") {
    pipeline::ElementNode e;
    e.id = "e1";
    e.type = ElementType::image;
    e.x = 80;
    e.width = 50;
    e.height = 10;
    doc.elements = {e};
    const auto findings = pipeline::consistency_check(doc);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].code == "out-of-bound");
    CHECK(findings[0].severity == pipeline::FindingSeverity::error);
  }
}

TEST_CASE("design.json round trip with exact field names and safe defaults") {
  FilterConfig cfg;
  const auto doc = pipeline::build_document(
      page({pixel("hero", Rect{0, 0, 100, 200}), text("title", Rect{120, 10, 160, 300}, "Hi")}),
      cfg, {}, {});
  const std::string json = pipeline::document_to_json(doc);
  CHECK(json.find("\"dimensions\"") != std::string::npos);
  CHECK(json.find("\"position\"") != std::string::npos);
  CHECK(json.find("\"size\"") != std::string::npos);
  CHECK(json.find("\"elements\"") != std::string::npos);
  CHECK(json.find("\"assets\"") != std::string::npos);

  const auto loaded = pipeline::document_from_json(json);
  CHECK(pipeline::document_to_json(loaded) == json);

  // Missing optional fields fall back to safe defaults.
  const auto sparse = pipeline::document_from_json(
      R"({"dimensions":{"width":100,"height":100},"elements":[{"id":"e1","name":"n","type":"image"}]})");
  REQUIRE(sparse.elements.size() == 1);
  CHECK(sparse.elements[0].x == 0);
  CHECK(sparse.elements[0].width == 0);
  CHECK(sparse.elements[0].opacity == 1.0);
}
