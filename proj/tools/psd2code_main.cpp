#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>

#include "psd2code/assets/assets.hpp"
#include "psd2code/codecheck/validate.hpp"
#include "psd2code/io.hpp"
#include "psd2code/metrics/report.hpp"
#include "psd2code/pipeline/pipeline.hpp"
#include "psd2code/prompt/prompt.hpp"
#include "psd2code/psd/reader.hpp"
#include "psd2code/raster/render.hpp"
#include "psd2code/run/fixtures.hpp"
#include "psd2code/run/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace psd2code;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct CommonArgs {
  std::string config_path;
  std::string backend;
  std::string out;
  int parallelism = 0;
  std::vector<std::string> ablations;
  std::uint64_t seed = 1;
  bool seed_given = false;
};

run::RunConfig make_config(const CommonArgs& args) {
  run::RunConfig cfg;
  if (!args.config_path.empty()) cfg = run::load_config_file(args.config_path);
  if (!args.backend.empty()) {
    if (args.backend == "http") cfg.backend.type = llm::BackendType::http_chat;
    else if (args.backend == "replay") cfg.backend.type = llm::BackendType::replay;
    else if (args.backend == "template") cfg.backend.type = llm::BackendType::template_gen;
    else throw run::RunError("unknown backend '" + args.backend + "'");
  }
  if (!args.out.empty()) cfg.out_dir = args.out;
  if (args.parallelism > 0) cfg.parallelism = args.parallelism;
  for (const auto& name : args.ablations) {
    if (name == "no_structural") cfg.ablation.no_structural = true;
    else if (name == "no_attachments") cfg.ablation.no_attachments = true;
    else if (name == "simple_prompt") cfg.ablation.simple_prompt = true;
    else throw run::RunError("unknown ablation '" + name + "'");
  }
  return cfg;
}

pipeline::DesignDocument parse_sample(const run::SampleLayout& sample, const run::RunConfig& cfg) {
  auto raw = sample.is_layer_dump ? psd::read_layer_dump(sample.design_file)
                                  : psd::read_psd(sample.design_file);
  raw = pipeline::filter_layers(raw, cfg.filter);
  raw = pipeline::normalize_coordinates(raw);
  std::vector<assets::AssetRecord> scanned;
  if (fs::exists(sample.assets_dir)) scanned = assets::scan_assets(sample.assets_dir);
  pipeline::PresetLibrary preset;
  if (!cfg.preset_path.empty())
    preset = pipeline::load_preset_library(read_file_text(cfg.preset_path));
  return pipeline::build_document(raw, cfg.filter, scanned, preset);
}

pipeline::DesignDocument parse_and_align(const run::SampleLayout& sample, const run::RunConfig& cfg) {
  auto doc = parse_sample(sample, cfg);
  std::vector<assets::AssetRecord> scanned;
  if (fs::exists(sample.assets_dir)) scanned = assets::scan_assets(sample.assets_dir);
  assets::align(doc, scanned);
  return doc;
}

fs::path ensure_out(const run::RunConfig& cfg, const std::string& sample_id) {
  const fs::path out = cfg.out_dir / sample_id;
  fs::create_directories(out);
  return out;
}

int cmd_parse(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  const auto doc = parse_sample(sample, cfg);
  const auto out = ensure_out(cfg, sample.id);
  pipeline::save_document(doc, out / "design.json");
  std::cout << out / "design.json" << "\n";
  return kExitOk;
}

int cmd_align(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  auto doc = parse_sample(sample, cfg);
  std::vector<assets::AssetRecord> scanned;
  if (fs::exists(sample.assets_dir)) scanned = assets::scan_assets(sample.assets_dir);
  const auto report = assets::align(doc, scanned);
  const auto out = ensure_out(cfg, sample.id);
  pipeline::save_document(doc, out / "design.json");
  std::cout << "bound=" << report.bound << " resized=" << report.resized
            << " unmatched=" << report.unmatched_elements.size()
            << " orphans=" << report.orphan_assets.size()
            << " traceability=" << assets::resource_traceability(doc) << "\n";
  return kExitOk;
}

int cmd_prompt(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  const auto doc = parse_and_align(sample, cfg);
  prompt::PromptOptions options;
  options.ablation = cfg.ablation;
  options.screenshot = sample.screenshot;
  const auto bundle = prompt::build_prompt(doc, options);
  const auto out = ensure_out(cfg, sample.id);
  prompt::export_bundle(bundle, out / "prompt");
  std::cout << "digest=" << prompt::hash_prompt(bundle) << "\n";
  return kExitOk;
}

int cmd_generate(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  const auto doc = parse_and_align(sample, cfg);
  prompt::PromptOptions options;
  options.ablation = cfg.ablation;
  options.screenshot = sample.screenshot;
  const auto bundle = prompt::build_prompt(doc, options);
  llm::LlmClient client(cfg.backend, cfg.params);
  const std::string response = client.generate(bundle);
  const auto out = ensure_out(cfg, sample.id);
  write_file_text(out / "response.txt", response);
  const auto extraction = codecheck::extract_blocks(response);
  write_file_text(out / "generated.jsx", extraction.code.jsx);
  write_file_text(out / "generated.scss", extraction.code.scss);
  std::cout << out / "generated.jsx" << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  const auto doc = parse_and_align(sample, cfg);
  const auto out = ensure_out(cfg, sample.id);
  codecheck::GeneratedCode code;
  code.jsx = read_file_text(out / "generated.jsx");
  code.scss = read_file_text(out / "generated.scss");
  const auto report = codecheck::validate(code, doc);
  write_file_text(out / "validation.json", codecheck::validation_report_to_json(report));
  std::cout << "syntax_ok=" << (report.syntax_ok ? "true" : "false")
            << " errors=" << report.error_count() << "\n";
  return report.error_count() == 0 ? kExitOk : kExitFailure;
}

int cmd_render(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  const auto doc = parse_and_align(sample, cfg);
  const auto out = ensure_out(cfg, sample.id);
  codecheck::GeneratedCode code;
  code.jsx = read_file_text(out / "generated.jsx");
  code.scss = read_file_text(out / "generated.scss");
  const auto report = codecheck::validate(code, doc);
  if (!report.layout) {
    std::cerr << "validation failed; nothing to render\n";
    return kExitFailure;
  }
  raster::DirectoryAssets pixel_source(sample.assets_dir);
  const auto img = raster::render(*report.layout, pixel_source, doc.page_width, doc.page_height);
  raster::write_png(img, out / "render.png");
  std::cout << out / "render.png" << "\n";
  return kExitOk;
}

// Re-scores existing artifacts under <out>/<sample id> without regenerating.
int cmd_evaluate(const std::string& sample_dir, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  const auto out = cfg.out_dir / sample.id;
  if (!fs::exists(out / "design.json") || !fs::exists(out / "generated.jsx")) {
    std::cerr << "no artifacts under " << out << "; run `pipeline` or `generate` first\n";
    return kExitFailure;
  }
  const auto doc = pipeline::load_document(out / "design.json");
  codecheck::GeneratedCode code;
  code.jsx = read_file_text(out / "generated.jsx");
  code.scss = read_file_text(out / "generated.scss");
  const auto report = codecheck::validate(code, doc);

  metrics::SampleRow row;
  row.sample_id = sample.id;
  row.codegen_ok = report.syntax_ok;
  row.resource_ok = report.resources_ok();
  row.resource_traceability = assets::resource_traceability(doc);
  row.mean_position_deviation = report.mean_position_deviation;
  if (report.layout) {
    const auto lm = metrics::layout_map(*report.layout, doc, cfg.metrics);
    row.map = lm.map;
    row.ap_s = lm.ap_small;
    row.ap_m = lm.ap_medium;
    row.ap_l = lm.ap_large;
  }
  if (fs::exists(out / "render.png")) {
    row.render_ok = true;
    if (sample.screenshot) {
      const auto rendered = raster::decode_image(out / "render.png");
      const auto reference = raster::decode_image(*sample.screenshot);
      const auto pair = metrics::align_images(rendered, reference);
      row.resized = pair.resized;
      row.mse = metrics::mse(pair.generated, pair.reference);
      row.psnr_db = metrics::psnr(pair.generated, pair.reference, cfg.metrics);
      if (int(pair.reference.width) >= cfg.metrics.ssim.window &&
          int(pair.reference.height) >= cfg.metrics.ssim.window)
        row.ssim = metrics::ssim(pair.generated, pair.reference, cfg.metrics);
    }
  }
  if (sample.truth_dir) {
    std::optional<fs::path> truth_jsx, truth_scss;
    for (const auto& entry : fs::directory_iterator(*sample.truth_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 4 && name.substr(name.size() - 4) == ".jsx") truth_jsx = entry.path();
      if (name.size() > 5 && name.substr(name.size() - 5) == ".scss") truth_scss = entry.path();
    }
    if (truth_jsx && truth_scss) {
      codecheck::GeneratedCode truth;
      truth.jsx = read_file_text(*truth_jsx);
      truth.scss = read_file_text(*truth_scss);
      row.codebleu = metrics::codebleu(code, truth, cfg.metrics);
      row.traditional = metrics::traditional_similarity(code.jsx + "\n" + code.scss,
                                                        truth.jsx + "\n" + truth.scss);
    }
  }
  write_file_text(out / "metrics.json", run::sample_row_to_json(row));
  std::cout << run::sample_row_to_json(row);
  return kExitOk;
}

int cmd_pipeline(const std::string& sample_dir, const CommonArgs& args) {
  auto cfg = make_config(args);
  const auto sample = run::discover_sample(sample_dir);
  llm::LlmClient client(cfg.backend, cfg.params);
  const auto row = run::run_pipeline(sample, cfg, client);
  std::cout << run::sample_row_to_json(row);
  return row.error.empty() ? kExitOk : kExitFailure;
}

int cmd_batch(const std::string& corpus, const CommonArgs& args) {
  const auto cfg = make_config(args);
  const auto report = run::run_batch(corpus, cfg);
  run::write_report_files(report, cfg.out_dir);
  std::cout << "samples=" << report.success.n_total
            << " codegen=" << report.success.codegen_rate * 100.0 << "%"
            << " render=" << report.success.render_rate * 100.0 << "%"
            << " resource=" << report.success.resource_rate * 100.0 << "%\n";
  return kExitOk;
}

int cmd_fixtures(const std::string& dir, int count, const CommonArgs& args) {
  const auto cfg = make_config(args);
  run::FixtureOptions options;
  options.seed = args.seed_given ? args.seed : cfg.seed;
  options.count = count;
  run::write_fixture_corpus(dir.empty() ? cfg.out_dir : fs::path(dir), options);
  std::cout << "wrote " << count << " samples\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PSD-to-code batch pipeline: parse, align, generate, validate, evaluate"};
  app.require_subcommand(1);
  app.fallthrough();  // common flags may follow the subcommand

  CommonArgs common;
  app.add_option("--config", common.config_path, "JSON config file; flags override its values");
  app.add_option("--backend", common.backend, "Model backend: http, replay or template")
      ->check(CLI::IsMember({"http", "replay", "template"}));
  app.add_option("--out", common.out, "Output directory");
  app.add_option("--parallelism", common.parallelism, "Worker threads for batch runs");
  app.add_option("--ablation", common.ablations,
                 "Ablation switches: no_structural, no_attachments, simple_prompt")
      ->check(CLI::IsMember({"no_structural", "no_attachments", "simple_prompt"}));
  auto* seed_opt = app.add_option("--seed", common.seed, "Seed for fixture generation");

  std::string sample_dir;
  std::string corpus_dir;
  std::string fixtures_dir;
  int fixtures_count = 10;

  auto* parse = app.add_subcommand("parse", "Parse a design file into design.json");
  parse->add_option("sample", sample_dir, "Sample directory")->required();
  auto* align = app.add_subcommand("align", "Bind image elements to asset files");
  align->add_option("sample", sample_dir, "Sample directory")->required();
  auto* prompt_cmd = app.add_subcommand("prompt", "Export the prompt bundle for audit");
  prompt_cmd->add_option("sample", sample_dir, "Sample directory")->required();
  auto* generate = app.add_subcommand("generate", "Generate code through the configured backend");
  generate->add_option("sample", sample_dir, "Sample directory")->required();
  auto* validate = app.add_subcommand("validate", "Validate generated code against the design");
  validate->add_option("sample", sample_dir, "Sample directory")->required();
  auto* render = app.add_subcommand("render", "Render the computed layout to render.png");
  render->add_option("sample", sample_dir, "Sample directory")->required();
  auto* evaluate = app.add_subcommand("evaluate", "Re-score existing outputs for a sample");
  evaluate->add_option("sample", sample_dir, "Sample directory")->required();
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run all stages for one sample");
  pipeline_cmd->add_option("sample", sample_dir, "Sample directory")->required();
  auto* batch = app.add_subcommand("batch", "Evaluate every sample in a corpus directory");
  batch->add_option("corpus", corpus_dir, "Corpus directory")->required();
  auto* fixtures = app.add_subcommand("fixtures", "Write a synthetic sample corpus");
  fixtures->add_option("dir", fixtures_dir, "Target directory (defaults to --out)");
  fixtures->add_option("--count", fixtures_count, "Number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  common.seed_given = seed_opt->count() > 0;

  try {
    if (parse->parsed()) return cmd_parse(sample_dir, common);
    if (align->parsed()) return cmd_align(sample_dir, common);
    if (prompt_cmd->parsed()) return cmd_prompt(sample_dir, common);
    if (generate->parsed()) return cmd_generate(sample_dir, common);
    if (validate->parsed()) return cmd_validate(sample_dir, common);
    if (render->parsed()) return cmd_render(sample_dir, common);
    if (evaluate->parsed()) return cmd_evaluate(sample_dir, common);
    if (pipeline_cmd->parsed()) return cmd_pipeline(sample_dir, common);
    if (batch->parsed()) return cmd_batch(corpus_dir, common);
    if (fixtures->parsed()) return cmd_fixtures(fixtures_dir, fixtures_count, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
