#include "psd2code/run/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "psd2code/assets/assets.hpp"
#include "psd2code/codecheck/validate.hpp"
#include "psd2code/io.hpp"
#include "psd2code/psd/reader.hpp"
#include "psd2code/raster/render.hpp"
#include "psd2code/text.hpp"

namespace psd2code::run {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration

std::string RunConfig::label() const {
  std::string label = backend.label();
  if (ablation.no_structural) label += "+no_structural";
  if (ablation.no_attachments) label += "+no_attachments";
  if (ablation.simple_prompt) label += "+simple_prompt";
  return label;
}

namespace {

llm::BackendKind backend_from_json(const json& j) {
  llm::BackendKind b;
  const std::string kind = j.value("kind", "template");
  if (kind == "http") b.type = llm::BackendType::http_chat;
  else if (kind == "replay") b.type = llm::BackendType::replay;
  else if (kind == "template") b.type = llm::BackendType::template_gen;
  else throw RunError("unknown backend kind '" + kind + "'");
  b.endpoint = j.value("endpoint", "");
  b.model = j.value("model", "");
  b.api_key_env = j.value("api_key_env", "PSD2CODE_API_KEY");
  b.max_inflight = j.value("max_inflight", 2);
  b.requests_per_second = j.value("requests_per_second", 2.0);
  b.backoff_base_ms = j.value("backoff_base_ms", 1000);
  b.fixture_dir = j.value("fixture_dir", "");
  return b;
}

void filter_from_json(const json& j, pipeline::FilterConfig& f) {
  f.min_opacity = j.value("min_opacity", f.min_opacity);
  f.min_area = j.value("min_area", f.min_area);
  f.min_side = j.value("min_side", f.min_side);
  if (j.contains("default_name_patterns"))
    f.default_name_patterns = j["default_name_patterns"].get<std::vector<std::string>>();
  f.fold_coverage = j.value("fold_coverage", f.fold_coverage);
  f.fold_coverage_strict = j.value("fold_coverage_strict", f.fold_coverage_strict);
  f.max_pixel_candidates = j.value("max_pixel_candidates", f.max_pixel_candidates);
  if (j.contains("background_keywords"))
    f.background_keywords = j["background_keywords"].get<std::vector<std::string>>();
  if (j.contains("structural_keywords"))
    f.structural_keywords = j["structural_keywords"].get<std::vector<std::string>>();
  if (j.contains("container_keywords"))
    f.container_keywords = j["container_keywords"].get<std::vector<std::string>>();
  f.max_depth = j.value("max_depth", f.max_depth);
  f.special_format_pattern = j.value("special_format_pattern", f.special_format_pattern);
}

void metrics_from_json(const json& j, metrics::MetricConfig& m) {
  if (j.contains("ssim")) {
    const auto& s = j["ssim"];
    m.ssim.window = s.value("window", m.ssim.window);
    m.ssim.gaussian_sigma = s.value("gaussian_sigma", m.ssim.gaussian_sigma);
    m.ssim.k1 = s.value("k1", m.ssim.k1);
    m.ssim.k2 = s.value("k2", m.ssim.k2);
  }
  m.psnr_cap_db = j.value("psnr_cap_db", m.psnr_cap_db);
  if (j.contains("keyword_list")) m.keyword_list = j["keyword_list"].get<std::vector<std::string>>();
  if (j.contains("iou_thresholds"))
    m.iou_thresholds = j["iou_thresholds"].get<std::vector<double>>();
  m.area_small = j.value("area_small", m.area_small);
  m.area_medium = j.value("area_medium", m.area_medium);
}

}  // namespace

RunConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw RunError(std::string("invalid config JSON: ") + e.what());
  }
  RunConfig cfg;
  if (j.contains("backend")) cfg.backend = backend_from_json(j["backend"]);
  if (j.contains("params")) {
    const auto& p = j["params"];
    cfg.params.temperature = p.value("temperature", cfg.params.temperature);
    cfg.params.max_tokens = p.value("max_tokens", cfg.params.max_tokens);
    cfg.params.top_p = p.value("top_p", cfg.params.top_p);
    cfg.params.retries = p.value("retries", cfg.params.retries);
    cfg.params.timeout_sec = p.value("timeout_sec", cfg.params.timeout_sec);
  }
  if (j.contains("filter")) filter_from_json(j["filter"], cfg.filter);
  if (j.contains("metrics")) metrics_from_json(j["metrics"], cfg.metrics);
  if (j.contains("ablation")) {
    const auto& a = j["ablation"];
    cfg.ablation.no_structural = a.value("no_structural", false);
    cfg.ablation.no_attachments = a.value("no_attachments", false);
    cfg.ablation.simple_prompt = a.value("simple_prompt", false);
  }
  cfg.parallelism = j.value("parallelism", 1);
  if (cfg.parallelism < 1) throw RunError("parallelism must be >= 1");
  if (!(cfg.filter.fold_coverage > 0.0 && cfg.filter.fold_coverage <= cfg.filter.fold_coverage_strict &&
        cfg.filter.fold_coverage_strict <= 1.0))
    throw RunError("fold coverage thresholds must satisfy 0 < fold_coverage <= fold_coverage_strict <= 1");
  if (cfg.params.temperature < 0.0 || cfg.params.temperature > 2.0)
    throw RunError("temperature must be in [0, 2]");
  if (cfg.params.max_tokens < 1) throw RunError("max_tokens must be >= 1");
  for (std::size_t i = 1; i < cfg.metrics.iou_thresholds.size(); ++i)
    if (cfg.metrics.iou_thresholds[i] <= cfg.metrics.iou_thresholds[i - 1])
      throw RunError("iou_thresholds must be strictly increasing");
  cfg.out_dir = j.value("out", cfg.out_dir.string());
  cfg.preset_path = j.value("preset", "");
  cfg.compare_report = j.value("compare", "");
  cfg.external_renderer = j.value("external_renderer", "");
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  return config_from_json(read_file_text(path));
}

// ---------------------------------------------------------------------------
// Sample discovery

SampleLayout discover_sample(const std::filesystem::path& root) {
  SampleLayout s;
  s.root = root;
  s.id = root.filename().string();
  if (std::filesystem::exists(root / "design.psd")) {
    s.design_file = root / "design.psd";
  } else if (std::filesystem::exists(root / "design.layers")) {
    s.design_file = root / "design.layers";
    s.is_layer_dump = true;
  } else {
    throw RunError(s.id + ": no design.psd or design.layers");
  }
  if (std::filesystem::exists(root / "screenshot.png")) s.screenshot = root / "screenshot.png";
  s.assets_dir = root / "assets";
  if (std::filesystem::exists(root / "truth")) s.truth_dir = root / "truth";
  return s;
}

// ---------------------------------------------------------------------------
// Per-sample pipeline

namespace {

struct StageFailure {
  std::string stage;
  std::string message;
};

std::optional<std::filesystem::path> find_by_extension(const std::filesystem::path& dir,
                                                       const std::string& ext) {
  std::vector<std::filesystem::path> hits;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && file_extension_lower(entry.path().filename().string()) == ext)
      hits.push_back(entry.path());
  if (hits.empty()) return std::nullopt;
  std::sort(hits.begin(), hits.end());
  return hits.front();
}

// Runs the external renderer hook in the sample output directory; it must
// exit 0 and leave a screenshot.png behind.
raster::RasterImage run_external_renderer(const std::string& command,
                                          const std::filesystem::path& out_dir,
                                          const std::filesystem::path& assets_dir) {
  const std::string full = "cd '" + out_dir.string() + "' && " + command +
                           " generated.jsx generated.scss '" + assets_dir.string() + "'";
  const int rc = std::system(full.c_str());
  if (rc != 0) throw RunError("external renderer exited with status " + std::to_string(rc));
  const auto shot = out_dir / "screenshot.png";
  if (!std::filesystem::exists(shot)) throw RunError("external renderer wrote no screenshot.png");
  return raster::decode_image(shot);
}

}  // namespace

std::string sample_row_to_json(const metrics::SampleRow& row) {
  ordered_json j;
  j["sample_id"] = row.sample_id;
  const auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) j[name] = *v;
  };
  put("codebleu", row.codebleu);
  put("traditional", row.traditional);
  put("ssim", row.ssim);
  put("psnr_db", row.psnr_db);
  put("mse", row.mse);
  put("map", row.map);
  put("ap_s", row.ap_s);
  put("ap_m", row.ap_m);
  put("ap_l", row.ap_l);
  j["codegen_ok"] = row.codegen_ok;
  j["render_ok"] = row.render_ok;
  j["resource_ok"] = row.resource_ok;
  j["resized"] = row.resized;
  put("resource_traceability", row.resource_traceability);
  put("mean_position_deviation", row.mean_position_deviation);
  if (row.used_fallback_glyph) j["used_fallback_glyph"] = true;
  if (!row.error.empty()) {
    j["error"] = row.error;
    j["failed_stage"] = row.failed_stage;
  }
  return j.dump(2) + "\n";
}

metrics::SampleRow run_pipeline(const SampleLayout& sample, const RunConfig& cfg,
                                llm::LlmClient& client) {
  metrics::SampleRow row;
  row.sample_id = sample.id;
  const auto out = cfg.out_dir / sample.id;
  std::filesystem::create_directories(out);

  std::string stage = "read";
  try {
    // Parse
    psd::RawDesignInput raw = sample.is_layer_dump ? psd::read_layer_dump(sample.design_file)
                                                   : psd::read_psd(sample.design_file);
    stage = "filter";
    std::vector<pipeline::Removal> removals;
    raw = pipeline::filter_layers(raw, cfg.filter, &removals);
    stage = "normalize";
    raw = pipeline::normalize_coordinates(raw, &removals);

    stage = "assets";
    std::vector<assets::AssetRecord> scanned;
    std::vector<std::string> asset_notes;
    if (std::filesystem::exists(sample.assets_dir))
      scanned = assets::scan_assets(sample.assets_dir, &asset_notes);

    stage = "build";
    pipeline::PresetLibrary preset;
    if (!cfg.preset_path.empty())
      preset = pipeline::load_preset_library(read_file_text(cfg.preset_path));
    auto doc = pipeline::build_document(raw, cfg.filter, scanned, preset);

    stage = "align";
    const auto alignment = assets::align(doc, scanned);
    row.resource_traceability = assets::resource_traceability(doc);
    const auto findings = pipeline::consistency_check(doc);
    pipeline::save_document(doc, out / "design.json");

    stage = "prompt";
    prompt::PromptOptions options;
    options.ablation = cfg.ablation;
    options.screenshot = sample.screenshot;
    const auto bundle = prompt::build_prompt(doc, options);
    prompt::export_bundle(bundle, out / "prompt");

    stage = "generate";
    const std::string response = client.generate(bundle);
    write_file_text(out / "response.txt", response);

    stage = "extract";
    auto extraction = codecheck::extract_blocks(response);
    extraction.code.source_digest = prompt::hash_prompt(bundle);
    extraction.code.backend = client.backend().label();
    write_file_text(out / "generated.jsx", extraction.code.jsx);
    write_file_text(out / "generated.scss", extraction.code.scss);

    stage = "validate";
    auto report = codecheck::validate(extraction.code, doc);
    report.violations.insert(report.violations.begin(), extraction.violations.begin(),
                             extraction.violations.end());
    row.codegen_ok = report.syntax_ok;
    row.mean_position_deviation = report.mean_position_deviation;

    stage = "render";
    std::optional<raster::RasterImage> rendered;
    if (report.layout) {
      if (!cfg.external_renderer.empty()) {
        rendered = run_external_renderer(cfg.external_renderer, out, sample.assets_dir);
      } else {
        raster::DirectoryAssets pixel_source(sample.assets_dir);
        bool used_fallback = false;
        rendered = raster::render(*report.layout, pixel_source, doc.page_width, doc.page_height,
                                  {255, 255, 255, 255}, &used_fallback);
        report.used_fallback_glyph = used_fallback;
        row.used_fallback_glyph = used_fallback;
      }
      raster::write_png(*rendered, out / "render.png");
      row.render_ok = true;
    }
    row.resource_ok = report.resources_ok();

    // validation.json gains the document-level findings next to the code checks.
    {
      auto jv = ordered_json::parse(codecheck::validation_report_to_json(report));
      auto jf = ordered_json::array();
      for (const auto& f : findings) {
        jf.push_back(ordered_json{
            {"code", f.code},
            {"severity", f.severity == pipeline::FindingSeverity::error ? "error" : "warning"},
            {"message", f.message},
            {"element", f.element_id}});
      }
      jv["document_findings"] = std::move(jf);
      auto ja = ordered_json::object();
      ja["bound"] = alignment.bound;
      ja["resized"] = alignment.resized;
      ja["unmatched_elements"] = alignment.unmatched_elements;
      ja["orphan_assets"] = alignment.orphan_assets;
      ja["notes"] = asset_notes;
      jv["alignment"] = std::move(ja);
      write_file_text(out / "validation.json", jv.dump(2) + "\n");
    }

    stage = "evaluate";
    if (report.layout) {
      const auto lm = metrics::layout_map(*report.layout, doc, cfg.metrics);
      row.map = lm.map;
      row.ap_s = lm.ap_small;
      row.ap_m = lm.ap_medium;
      row.ap_l = lm.ap_large;
    }
    if (rendered && sample.screenshot) {
      const auto reference = raster::decode_image(*sample.screenshot);
      const auto pair = metrics::align_images(*rendered, reference);
      row.resized = pair.resized;
      row.mse = metrics::mse(pair.generated, pair.reference);
      row.psnr_db = metrics::psnr(pair.generated, pair.reference, cfg.metrics);
      if (int(pair.reference.width) >= cfg.metrics.ssim.window &&
          int(pair.reference.height) >= cfg.metrics.ssim.window)
        row.ssim = metrics::ssim(pair.generated, pair.reference, cfg.metrics);
    }
    if (sample.truth_dir) {
      const auto truth_jsx = find_by_extension(*sample.truth_dir, "jsx");
      const auto truth_scss = find_by_extension(*sample.truth_dir, "scss");
      if (truth_jsx && truth_scss) {
        codecheck::GeneratedCode truth;
        truth.jsx = read_file_text(*truth_jsx);
        truth.scss = read_file_text(*truth_scss);
        row.codebleu = metrics::codebleu(extraction.code, truth, cfg.metrics);
        row.traditional = metrics::traditional_similarity(extraction.code.jsx + "\n" + extraction.code.scss,
                                                          truth.jsx + "\n" + truth.scss);
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.failed_stage = stage;
  }

  try {
    write_file_text(out / "metrics.json", sample_row_to_json(row));
  } catch (const std::exception&) {
    // metrics.json is best-effort; the row itself still reaches the report
  }
  return row;
}

// ---------------------------------------------------------------------------
// Batch

metrics::EvaluationReport run_batch(const std::filesystem::path& corpus, const RunConfig& cfg) {
  if (!std::filesystem::exists(corpus)) throw RunError("corpus directory does not exist: " + corpus.string());

  std::vector<SampleLayout> samples;
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] == '.') continue;
    dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    try {
      samples.push_back(discover_sample(dir));
    } catch (const RunError&) {
      // directories without a design file are not samples
    }
  }
  if (samples.empty()) throw RunError("empty corpus: no samples under " + corpus.string());

  RunConfig effective = cfg;
  if (effective.backend.type == llm::BackendType::replay && effective.backend.fixture_dir.empty())
    effective.backend.fixture_dir = corpus / ".replay";

  llm::LlmClient client(effective.backend, effective.params);

  std::vector<metrics::SampleRow> rows(samples.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(effective.parallelism, int(samples.size())));
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= samples.size()) return;
        rows[i] = run_pipeline(samples[i], effective, client);
      }
    });
  }
  for (auto& t : pool) t.join();

  metrics::EvaluationReport report;
  report.config_label = effective.label();
  report.rows = std::move(rows);
  metrics::finalize_report(report);

  if (!effective.compare_report.empty()) {
    const auto other = metrics::report_from_json(read_file_text(effective.compare_report));
    metrics::compare_reports(report, other);
  }
  return report;
}

void write_report_files(const metrics::EvaluationReport& report,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file_text(out_dir / "report.json", metrics::report_to_json(report));
  write_file_text(out_dir / "report.csv", metrics::report_to_csv(report));
  write_file_text(out_dir / "report.md", metrics::reports_to_markdown({report}));
}

}  // namespace psd2code::run
