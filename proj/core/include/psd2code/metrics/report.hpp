#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psd2code/metrics/stats.hpp"

namespace psd2code::metrics {

// One metrics row per sample. Absent metrics (no reference available, stage
// failed) stay unset and are excluded from aggregates.
struct SampleRow {
  std::string sample_id;
  std::optional<double> codebleu;
  std::optional<double> traditional;
  std::optional<double> ssim;
  std::optional<double> psnr_db;
  std::optional<double> mse;
  std::optional<double> map;
  std::optional<double> ap_s;
  std::optional<double> ap_m;
  std::optional<double> ap_l;
  bool codegen_ok = false;
  bool render_ok = false;
  bool resource_ok = false;
  bool resized = false;
  // Extra diagnostics (JSON only; the CSV column set is fixed).
  std::optional<double> resource_traceability;
  std::optional<double> mean_position_deviation;
  bool used_fallback_glyph = false;
  std::string error;        // first stage failure, empty on success
  std::string failed_stage; // stage name for the failure
};

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;  // sample sd, 0 when fewer than 2 values
  std::size_t count = 0;
};

struct SuccessRates {
  std::size_t n_total = 0;
  std::size_t n_codegen_ok = 0;
  std::size_t n_render_ok = 0;
  std::size_t n_resource_ok = 0;
  double codegen_rate = 0.0;
  double render_rate = 0.0;
  double resource_rate = 0.0;
};

struct EvaluationReport {
  std::string config_label;  // backend + ablation summary for report tables
  std::vector<SampleRow> rows;  // sorted by sample_id
  std::map<std::string, Aggregate> aggregates;  // metric column -> stats
  SuccessRates success;
  std::map<std::string, StatsSummary> comparison;  // metric -> paired stats vs a second report
};

// Derives the three rates from the counters. Throws StatsError when n_total == 0.
SuccessRates success_rates(std::size_t n_total, std::size_t n_codegen_ok, std::size_t n_render_ok,
                           std::size_t n_resource_ok);

// Fills aggregates and success counters from rows.
void finalize_report(EvaluationReport& report);

// Paired stats per shared metric column over sample ids present in both.
void compare_reports(EvaluationReport& report, const EvaluationReport& other);

// Stable column order:
// sample_id,codebleu,traditional,ssim,psnr_db,mse,map,ap_s,ap_m,ap_l,
// codegen_ok,render_ok,resource_ok,resized
std::string report_to_csv(const EvaluationReport& report);
std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json_text);

// Markdown summary with one row per configuration, for side-by-side runs.
std::string reports_to_markdown(const std::vector<EvaluationReport>& reports);

}  // namespace psd2code::metrics
