#include "psd2code/run/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>

#include "psd2code/assets/assets.hpp"
#include "psd2code/codecheck/validate.hpp"
#include "psd2code/io.hpp"
#include "psd2code/llm/client.hpp"
#include "psd2code/pipeline/pipeline.hpp"
#include "psd2code/prompt/prompt.hpp"
#include "psd2code/psd/writer.hpp"
#include "psd2code/raster/render.hpp"
#include "psd2code/run/runner.hpp"

namespace psd2code::run {

using psd::LayerKind;
using psd::LayerNode;
using psd::RawDesignInput;

namespace {

int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return int(std::uniform_int_distribution<int>(lo, hi)(rng));
}

double rand_opacity(std::mt19937_64& rng) {
  // Byte-exact fractions so the PSD opacity byte round-trips precisely.
  return double(rand_int(rng, 20, 255)) / 255.0;
}

const std::array<const char*, 8> kTextPool = {"Sign up",     "Play now", "Daily bonus",
                                              "Level 7",     "Shop",     "Back",
                                              "Continue",    "Hello world"};
const std::array<const char*, 4> kCjkNames = {"背景", "按钮", "标题图", "活动栏"};

LayerNode random_node(std::mt19937_64& rng, int depth, std::size_t& budget, int& name_counter) {
  LayerNode node;
  const int roll = rand_int(rng, 0, 9);
  const bool make_group = depth < 5 && budget >= 3 && roll < 3;
  --budget;

  if (rand_int(rng, 0, 4) == 0) {
    node.name = std::string(kCjkNames[std::size_t(rand_int(rng, 0, int(kCjkNames.size()) - 1))]) +
                std::to_string(++name_counter);
  } else {
    node.name = "layer_" + std::to_string(++name_counter);
  }
  node.visible = rand_int(rng, 0, 5) != 0;
  node.opacity = rand_opacity(rng);
  const int x = rand_int(rng, -40, 700);
  const int y = rand_int(rng, -40, 1600);
  node.bounds = Rect{y, x, y + rand_int(rng, 0, 300), x + rand_int(rng, 0, 300)};

  if (make_group) {
    node.kind = LayerKind::group;
    const int n_children = rand_int(rng, 1, 3);
    for (int i = 0; i < n_children && budget > 0; ++i)
      node.children.push_back(random_node(rng, depth + 1, budget, name_counter));
    Rect u = node.children.front().bounds;
    for (const auto& c : node.children) u = u.union_with(c.bounds);
    node.bounds = u;
  } else if (roll < 6) {
    node.kind = LayerKind::text;
    node.text_content = kTextPool[std::size_t(rand_int(rng, 0, int(kTextPool.size()) - 1))];
    if (rand_int(rng, 0, 3) == 0) node.text_content = "";  // unrecoverable type-tool payloads
  } else {
    node.kind = LayerKind::pixel;
  }
  return node;
}

}  // namespace

RawDesignInput random_round_trip_tree(std::mt19937_64& rng, std::size_t max_layers) {
  RawDesignInput input;
  input.header.width = 780;
  input.header.height = 1760;
  std::size_t budget = 2 + std::uniform_int_distribution<std::size_t>(0, max_layers - 2)(rng);
  int name_counter = 0;
  while (budget > 0) input.roots.push_back(random_node(rng, 1, budget, name_counter));
  return input;
}

RawDesignInput random_document_tree(std::mt19937_64& rng) {
  RawDesignInput input;
  input.header.width = 780;
  input.header.height = 1760;

  const int cells_x = 2;
  const int cells_y = 5;
  const int cell_w = 780 / cells_x;
  const int cell_h = 1760 / cells_y;
  const int n_leaves = rand_int(rng, 4, std::min(8, cells_x * cells_y));

  std::vector<int> cells(std::size_t(cells_x * cells_y));
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = int(i);
  std::shuffle(cells.begin(), cells.end(), rng);

  int counter = 0;
  std::vector<LayerNode> pixels_for_group;
  for (int i = 0; i < n_leaves; ++i) {
    const int cell = cells[std::size_t(i)];
    const int cx = (cell % cells_x) * cell_w;
    const int cy = (cell / cells_x) * cell_h;
    const int w = rand_int(rng, 80, cell_w - 20);
    const int h = rand_int(rng, 60, cell_h - 20);
    const int x = cx + rand_int(rng, 4, cell_w - w - 4);
    const int y = cy + rand_int(rng, 4, cell_h - h - 4);

    LayerNode node;
    node.bounds = Rect{y, x, y + h, x + w};
    node.visible = true;
    node.opacity = 1.0;
    if (rand_int(rng, 0, 9) < 7) {
      node.kind = LayerKind::pixel;
      node.name = "img" + std::to_string(++counter);
    } else {
      node.kind = LayerKind::text;
      node.name = "label" + std::to_string(++counter);
      node.text_content = kTextPool[std::size_t(rand_int(rng, 0, int(kTextPool.size()) - 1))];
    }
    input.roots.push_back(std::move(node));
  }

  // Occasionally wrap the first two leaves in a group that stays a container
  // (a text child always blocks folding).
  if (input.roots.size() >= 3 && rand_int(rng, 0, 1) == 0) {
    LayerNode group;
    group.kind = LayerKind::group;
    group.name = "card" + std::to_string(++counter);
    group.visible = true;
    group.opacity = 1.0;
    LayerNode text_child;
    text_child.kind = LayerKind::text;
    text_child.name = "cardlabel" + std::to_string(++counter);
    text_child.text_content = "Card";
    text_child.visible = true;
    text_child.opacity = 1.0;
    const Rect host = input.roots[0].bounds;
    text_child.bounds = Rect{host.top + 4, host.left + 4,
                             std::min(host.top + 24, host.bottom), std::min(host.left + 64, host.right)};
    group.children.push_back(input.roots[0]);
    group.children.push_back(std::move(text_child));
    Rect u = group.children[0].bounds;
    for (const auto& c : group.children) u = u.union_with(c.bounds);
    group.bounds = u;
    input.roots[0] = std::move(group);
  }
  return input;
}

void write_fixture_corpus(const std::filesystem::path& dir, const FixtureOptions& options) {
  std::filesystem::create_directories(dir);
  const auto replay_dir = dir / ".replay";

  for (int i = 0; i < options.count; ++i) {
    std::mt19937_64 rng(options.seed * 1000003ULL + std::uint64_t(i));
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%03d", i);
    const auto sample_dir = dir / name;
    std::filesystem::create_directories(sample_dir / "assets");
    std::filesystem::create_directories(sample_dir / "truth");

    const RawDesignInput tree = random_document_tree(rng);
    psd::write_synthetic_psd(tree, sample_dir / "design.psd");

    // First pass builds the document without assets; asset files are then
    // produced from its image leaves so alignment binds every one of them.
    const pipeline::FilterConfig filter_cfg;
    const pipeline::PresetLibrary preset;
    const auto filtered = pipeline::filter_layers(tree, filter_cfg);
    const auto normalized = pipeline::normalize_coordinates(filtered);
    auto doc = pipeline::build_document(normalized, filter_cfg, {}, preset);

    pipeline::for_each_element(doc, [&](pipeline::ElementNode& e, int) {
      if (e.type != pipeline::ElementType::image) return;
      raster::RasterImage img = raster::RasterImage::solid(
          std::uint32_t(std::max<std::int64_t>(1, e.width)),
          std::uint32_t(std::max<std::int64_t>(1, e.height)),
          std::uint8_t(std::uniform_int_distribution<int>(0, 255)(rng)),
          std::uint8_t(std::uniform_int_distribution<int>(0, 255)(rng)),
          std::uint8_t(std::uniform_int_distribution<int>(0, 255)(rng)));
      raster::write_png(img, sample_dir / "assets" / (e.name + ".png"));
    });

    const auto scanned = assets::scan_assets(sample_dir / "assets");
    assets::align(doc, scanned);

    // Ground truth: template output for this document, rendered to the
    // reference screenshot.
    prompt::PromptOptions echo_only;
    const auto bundle = prompt::build_prompt(doc, echo_only);
    const std::string response = llm::template_generate(bundle.constraint_echo);
    const auto extraction = codecheck::extract_blocks(response);
    write_file_text(sample_dir / "truth" / "page.jsx", extraction.code.jsx);
    write_file_text(sample_dir / "truth" / "page.scss", extraction.code.scss);

    const auto report = codecheck::validate(extraction.code, doc);
    if (!report.layout)
      throw RunError(std::string(name) + ": template output failed validation");
    raster::DirectoryAssets pixel_source(sample_dir / "assets");
    const auto screenshot =
        raster::render(*report.layout, pixel_source, doc.page_width, doc.page_height);
    raster::write_png(screenshot, sample_dir / "screenshot.png");

    // Replay fixture keyed by the digest the batch runner will compute (the
    // screenshot attachment is part of the digest, so build the final bundle
    // only now that the file exists).
    prompt::PromptOptions batch_options;
    batch_options.screenshot = sample_dir / "screenshot.png";
    const auto batch_bundle = prompt::build_prompt(doc, batch_options);
    llm::record_fixture(batch_bundle, response, replay_dir);
  }
}

}  // namespace psd2code::run
