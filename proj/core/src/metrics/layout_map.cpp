#include "psd2code/metrics/metrics.hpp"

#include <algorithm>

namespace psd2code::metrics {

namespace {

struct ClassEval {
  std::vector<double> truth_areas;
  std::vector<double> pred_areas;  // own box area
  struct Match {
    std::size_t truth;
    std::size_t pred;
    double iou_v;
  };
  std::vector<Match> matches;  // greedy one-to-one, descending IoU
  std::vector<int> pred_match;  // index into matches or -1
};

ClassEval evaluate_class(const std::vector<Rect>& truths, const std::vector<Rect>& preds) {
  ClassEval ev;
  for (const auto& t : truths) ev.truth_areas.push_back(t.area());
  for (const auto& p : preds) ev.pred_areas.push_back(p.area());
  ev.pred_match.assign(preds.size(), -1);

  struct Pair {
    double iou_v;
    std::size_t t, p;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < truths.size(); ++t)
    for (std::size_t p = 0; p < preds.size(); ++p) {
      const double v = iou(truths[t], preds[p]);
      if (v > 0.0) pairs.push_back({v, t, p});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou_v != b.iou_v) return a.iou_v > b.iou_v;
    if (a.t != b.t) return a.t < b.t;
    return a.p < b.p;
  });
  std::vector<bool> t_used(truths.size(), false), p_used(preds.size(), false);
  for (const auto& pr : pairs) {
    if (t_used[pr.t] || p_used[pr.p]) continue;
    t_used[pr.t] = true;
    p_used[pr.p] = true;
    ev.pred_match[pr.p] = int(ev.matches.size());
    ev.matches.push_back({pr.t, pr.p, pr.iou_v});
  }
  return ev;
}

enum class Stratum { all, small, medium, large };

bool in_stratum(double area, Stratum s, const MetricConfig& cfg) {
  switch (s) {
    case Stratum::all: return true;
    case Stratum::small: return area < cfg.area_small;
    case Stratum::medium: return area >= cfg.area_small && area < cfg.area_medium;
    case Stratum::large: return area >= cfg.area_medium;
  }
  return true;
}

// F-measure-form AP at one threshold for one class, restricted to a stratum.
// Matched predictions inherit their truth's stratum; unmatched ones use their
// own area. Returns nullopt when the stratum holds nothing at all.
std::optional<double> ap_at(const ClassEval& ev, double threshold, Stratum stratum,
                            const MetricConfig& cfg) {
  std::size_t tp = 0, fp = 0, fn = 0;
  std::vector<bool> truth_matched(ev.truth_areas.size(), false);
  for (const auto& m : ev.matches) {
    if (!in_stratum(ev.truth_areas[m.truth], stratum, cfg)) continue;
    truth_matched[m.truth] = true;
    if (m.iou_v >= threshold) ++tp;
    else { ++fp; ++fn; }  // matched below threshold: both a miss and a false box
  }
  for (std::size_t t = 0; t < ev.truth_areas.size(); ++t)
    if (!truth_matched[t] && in_stratum(ev.truth_areas[t], stratum, cfg)) ++fn;
  for (std::size_t p = 0; p < ev.pred_areas.size(); ++p)
    if (ev.pred_match[p] < 0 && in_stratum(ev.pred_areas[p], stratum, cfg)) ++fp;

  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return std::nullopt;
  return 2.0 * double(tp) / double(denom);
}

}  // namespace

LayoutMetrics layout_map(const codecheck::ComputedLayout& predicted,
                         const pipeline::DesignDocument& truth, const MetricConfig& cfg) {
  std::vector<Rect> truth_image, truth_text, pred_image, pred_text;
  for (const auto& leaf : pipeline::leaf_boxes(truth)) {
    if (leaf.type == pipeline::ElementType::text) truth_text.push_back(leaf.rect);
    else truth_image.push_back(leaf.rect);
  }
  for (const auto& box : predicted.leaves()) {
    if (box.kind == codecheck::BoxKind::text) pred_text.push_back(box.rect);
    else pred_image.push_back(box.rect);
  }

  const std::vector<ClassEval> evals = {evaluate_class(truth_image, pred_image),
                                        evaluate_class(truth_text, pred_text)};

  LayoutMetrics out;
  const auto average = [&](Stratum stratum) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const double t : cfg.iou_thresholds) {
      for (const auto& ev : evals) {
        const auto ap = ap_at(ev, t, stratum, cfg);
        if (ap) {
          sum += *ap;
          ++n;
        }
      }
    }
    if (n == 0) return std::nullopt;
    return sum / double(n);
  };

  const auto overall = average(Stratum::all);
  out.map = overall.value_or(
      (truth_image.empty() && truth_text.empty() && pred_image.empty() && pred_text.empty()) ? 1.0
                                                                                             : 0.0);
  out.ap_small = average(Stratum::small);
  out.ap_medium = average(Stratum::medium);
  out.ap_large = average(Stratum::large);

  for (const double t : cfg.iou_thresholds) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& ev : evals) {
      const auto ap = ap_at(ev, t, Stratum::all, cfg);
      if (ap) {
        sum += *ap;
        ++n;
      }
    }
    out.per_threshold[t] = n == 0 ? out.map : sum / double(n);
  }
  return out;
}

}  // namespace psd2code::metrics
