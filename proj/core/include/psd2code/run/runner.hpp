#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "psd2code/llm/client.hpp"
#include "psd2code/metrics/metrics.hpp"
#include "psd2code/metrics/report.hpp"
#include "psd2code/pipeline/pipeline.hpp"
#include "psd2code/prompt/prompt.hpp"

namespace psd2code::run {

class RunError : public std::runtime_error {
 public:
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  llm::BackendKind backend;
  llm::GenerationParams params;
  pipeline::FilterConfig filter;
  metrics::MetricConfig metrics;
  prompt::AblationFlags ablation;
  int parallelism = 1;
  std::filesystem::path out_dir = "out";
  std::filesystem::path preset_path;     // semantic resource library (JSON map)
  std::filesystem::path compare_report;  // paired-stats reference report.json
  std::string external_renderer;         // optional command hook; empty = builtin raster
  std::uint64_t seed = 1;                // fixture generation only

  std::string label() const;
};

RunConfig config_from_json(const std::string& json_text);
RunConfig load_config_file(const std::filesystem::path& path);

// One sample on disk: a design file plus optional screenshot, assets and
// ground-truth code.
struct SampleLayout {
  std::filesystem::path root;
  std::string id;  // directory name
  std::filesystem::path design_file;
  bool is_layer_dump = false;
  std::optional<std::filesystem::path> screenshot;
  std::filesystem::path assets_dir;  // may be absent
  std::optional<std::filesystem::path> truth_dir;
};

SampleLayout discover_sample(const std::filesystem::path& root);  // throws RunError

// Executes parse -> filter/normalize/build -> align -> prompt -> generate ->
// extract/validate -> render -> evaluate for one sample, writing
// design.json, prompt/, response.txt, generated.jsx/.scss, validation.json,
// render.png and metrics.json under <out>/<sample id>/. Stage failures are
// captured in the returned row; nothing throws for per-sample problems.
metrics::SampleRow run_pipeline(const SampleLayout& sample, const RunConfig& cfg,
                                llm::LlmClient& client);

// Batch over every sample directory in the corpus (sorted by id) with a
// bounded worker pool; the merged report is deterministic regardless of
// parallelism. Throws RunError on an empty corpus.
metrics::EvaluationReport run_batch(const std::filesystem::path& corpus, const RunConfig& cfg);

void write_report_files(const metrics::EvaluationReport& report,
                        const std::filesystem::path& out_dir);

std::string sample_row_to_json(const metrics::SampleRow& row);

}  // namespace psd2code::run
