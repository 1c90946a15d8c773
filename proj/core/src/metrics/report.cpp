#include "psd2code/metrics/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "psd2code/text.hpp"

namespace psd2code::metrics {

using ordered_json = nlohmann::ordered_json;

SuccessRates success_rates(std::size_t n_total, std::size_t n_codegen_ok, std::size_t n_render_ok,
                           std::size_t n_resource_ok) {
  if (n_total == 0) throw StatsError("success rates undefined for an empty batch");
  SuccessRates s;
  s.n_total = n_total;
  s.n_codegen_ok = n_codegen_ok;
  s.n_render_ok = n_render_ok;
  s.n_resource_ok = n_resource_ok;
  s.codegen_rate = double(n_codegen_ok) / double(n_total);
  s.render_rate = double(n_render_ok) / double(n_total);
  s.resource_rate = double(n_resource_ok) / double(n_total);
  return s;
}

namespace {

struct Column {
  const char* name;
  std::optional<double> SampleRow::* field;
};

constexpr Column kMetricColumns[] = {
    {"codebleu", &SampleRow::codebleu}, {"traditional", &SampleRow::traditional},
    {"ssim", &SampleRow::ssim},         {"psnr_db", &SampleRow::psnr_db},
    {"mse", &SampleRow::mse},           {"map", &SampleRow::map},
    {"ap_s", &SampleRow::ap_s},         {"ap_m", &SampleRow::ap_m},
    {"ap_l", &SampleRow::ap_l},
};

}  // namespace

void finalize_report(EvaluationReport& report) {
  std::sort(report.rows.begin(), report.rows.end(),
            [](const SampleRow& a, const SampleRow& b) { return a.sample_id < b.sample_id; });

  report.aggregates.clear();
  const auto aggregate_column = [&](const char* name, std::optional<double> SampleRow::* field) {
    std::vector<double> values;
    for (const auto& row : report.rows)
      if (row.*field) values.push_back(*(row.*field));
    if (values.empty()) return;
    Aggregate agg;
    agg.count = values.size();
    agg.mean = mean(values);
    agg.sd = values.size() >= 2 ? sample_sd(values) : 0.0;
    report.aggregates[name] = agg;
  };
  for (const auto& col : kMetricColumns) aggregate_column(col.name, col.field);
  aggregate_column("resource_traceability", &SampleRow::resource_traceability);
  aggregate_column("mean_position_deviation", &SampleRow::mean_position_deviation);

  std::size_t codegen = 0, render = 0, resource = 0;
  for (const auto& row : report.rows) {
    codegen += row.codegen_ok ? 1 : 0;
    render += row.render_ok ? 1 : 0;
    resource += row.resource_ok ? 1 : 0;
  }
  report.success = success_rates(report.rows.size(), codegen, render, resource);
}

void compare_reports(EvaluationReport& report, const EvaluationReport& other) {
  std::map<std::string, const SampleRow*> other_rows;
  for (const auto& row : other.rows) other_rows[row.sample_id] = &row;

  for (const auto& col : kMetricColumns) {
    std::vector<double> a, b;
    for (const auto& row : report.rows) {
      const auto it = other_rows.find(row.sample_id);
      if (it == other_rows.end()) continue;
      const auto& mine = row.*col.field;
      const auto& theirs = it->second->*col.field;
      if (mine && theirs) {
        a.push_back(*mine);
        b.push_back(*theirs);
      }
    }
    if (a.size() < 2) continue;
    try {
      report.comparison[col.name] = paired_stats(a, b);
    } catch (const StatsError&) {
      // zero-variance differences: identical runs carry no comparison entry
    }
  }
}

std::string report_to_csv(const EvaluationReport& report) {
  std::string out =
      "sample_id,codebleu,traditional,ssim,psnr_db,mse,map,ap_s,ap_m,ap_l,"
      "codegen_ok,render_ok,resource_ok,resized\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : report.rows) {
    out += r.sample_id;
    for (const auto& col : kMetricColumns) out += "," + cell(r.*col.field);
    out += std::string(",") + (r.codegen_ok ? "true" : "false");
    out += std::string(",") + (r.render_ok ? "true" : "false");
    out += std::string(",") + (r.resource_ok ? "true" : "false");
    out += std::string(",") + (r.resized ? "true" : "false");
    out += "\n";
  }
  return out;
}

namespace {

ordered_json stats_to_json(const StatsSummary& s) {
  ordered_json j;
  j["t_statistic"] = s.t_statistic;
  j["p_value"] = s.p_value;
  j["cohens_d"] = s.cohens_d;
  j["ci95"] = {s.ci95_low, s.ci95_high};
  j["mean_difference"] = s.mean_difference;
  j["coefficient_of_variation"] = {s.coefficient_of_variation[0], s.coefficient_of_variation[1]};
  j["range"] = {s.range[0], s.range[1]};
  if (s.anova_f) j["anova_f"] = *s.anova_f;
  return j;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  ordered_json j;
  j["config"] = report.config_label;
  auto samples = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["sample_id"] = r.sample_id;
    for (const auto& col : kMetricColumns) {
      if (r.*col.field) row[col.name] = *(r.*col.field);
    }
    row["codegen_ok"] = r.codegen_ok;
    row["render_ok"] = r.render_ok;
    row["resource_ok"] = r.resource_ok;
    row["resized"] = r.resized;
    if (r.resource_traceability) row["resource_traceability"] = *r.resource_traceability;
    if (r.mean_position_deviation) row["mean_position_deviation"] = *r.mean_position_deviation;
    if (r.used_fallback_glyph) row["used_fallback_glyph"] = true;
    if (!r.error.empty()) {
      row["error"] = r.error;
      row["failed_stage"] = r.failed_stage;
    }
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);

  auto aggregates = ordered_json::object();
  for (const auto& [name, agg] : report.aggregates)
    aggregates[name] = ordered_json{{"mean", agg.mean}, {"sd", agg.sd}, {"count", agg.count}};
  j["aggregates"] = std::move(aggregates);

  j["success"] = ordered_json{{"n_total", report.success.n_total},
                              {"n_codegen_ok", report.success.n_codegen_ok},
                              {"n_render_ok", report.success.n_render_ok},
                              {"n_resource_ok", report.success.n_resource_ok},
                              {"codegen_rate", report.success.codegen_rate},
                              {"render_rate", report.success.render_rate},
                              {"resource_rate", report.success.resource_rate}};

  if (!report.comparison.empty()) {
    auto cmp = ordered_json::object();
    for (const auto& [name, s] : report.comparison) cmp[name] = stats_to_json(s);
    j["comparison"] = std::move(cmp);
  }
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  EvaluationReport report;
  report.config_label = j.value("config", "");
  for (const auto& row : j.value("samples", nlohmann::json::array())) {
    SampleRow r;
    r.sample_id = row.value("sample_id", "");
    for (const auto& col : kMetricColumns)
      if (row.contains(col.name)) r.*col.field = row[col.name].get<double>();
    r.codegen_ok = row.value("codegen_ok", false);
    r.render_ok = row.value("render_ok", false);
    r.resource_ok = row.value("resource_ok", false);
    r.resized = row.value("resized", false);
    r.error = row.value("error", "");
    r.failed_stage = row.value("failed_stage", "");
    report.rows.push_back(std::move(r));
  }
  if (!report.rows.empty()) finalize_report(report);
  return report;
}

std::string reports_to_markdown(const std::vector<EvaluationReport>& reports) {
  std::string out;
  out += "| Configuration | CodeBLEU | Traditional | SSIM | PSNR (dB) | mAP | Codegen | Render | Resource |\n";
  out += "|---|---|---|---|---|---|---|---|---|\n";
  const auto agg = [](const EvaluationReport& r, const char* name) -> std::string {
    const auto it = r.aggregates.find(name);
    if (it == r.aggregates.end()) return "-";
    return format_double(it->second.mean);
  };
  const auto pct = [](double v) { return format_double(v * 100.0) + "%"; };
  for (const auto& r : reports) {
    out += "| " + (r.config_label.empty() ? std::string("run") : r.config_label) + " | ";
    out += agg(r, "codebleu") + " | " + agg(r, "traditional") + " | " + agg(r, "ssim") + " | " +
           agg(r, "psnr_db") + " | " + agg(r, "map") + " | ";
    out += pct(r.success.codegen_rate) + " | " + pct(r.success.render_rate) + " | " +
           pct(r.success.resource_rate) + " |\n";
  }
  out +=
      "\nmAP is the F-measure form of average precision (every detection carries confidence 1.0),"
      " averaged over IoU thresholds 0.50-0.95 and the image/text element classes.\n";
  return out;
}

}  // namespace psd2code::metrics
