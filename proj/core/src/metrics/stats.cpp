#include "psd2code/metrics/stats.hpp"

#include <algorithm>
#include <cmath>

namespace psd2code::metrics {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Lentz's continued fraction for the incomplete beta, standard textbook form.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    result *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    result *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return result;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || std::isnan(x)) throw StatsError("invalid incomplete beta arguments");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - std::exp(b * std::log(1.0 - x) + a * std::log(x) - log_beta(a, b)) *
                   beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw StatsError("degrees of freedom must be positive");
  const double x = dof / (t * t + dof);
  const double half_tail = regularized_incomplete_beta(x, dof / 2.0, 0.5) / 2.0;
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw StatsError("degrees of freedom must be positive");
  return regularized_incomplete_beta(dof / (t * t + dof), dof / 2.0, 0.5);
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw StatsError("quantile probability must be in (0,1)");
  double lo = -1e3, hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    if (student_t_cdf(mid, dof) < p) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-12) break;
  }
  return (lo + hi) / 2.0;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw StatsError("mean of empty series");
  double acc = 0.0;
  for (const double v : xs) acc += v;
  return acc / double(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw StatsError("sample sd needs at least two values");
  const double m = mean(xs);
  double acc = 0.0;
  for (const double v : xs) acc += (v - m) * (v - m);
  return std::sqrt(acc / double(xs.size() - 1));
}

double coefficient_of_variation(std::span<const double> xs) {
  const double m = mean(xs);
  if (m == 0.0) throw StatsError("coefficient of variation undefined for zero mean");
  return sample_sd(xs) / m;
}

double range_of(std::span<const double> xs) {
  if (xs.empty()) throw StatsError("range of empty series");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi - *lo;
}

StatsSummary paired_stats(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StatsError("paired series must have equal length");
  if (a.size() < 2) throw StatsError("degenerate input: fewer than two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];

  const double md = mean(d);
  const double sd = sample_sd(d);
  if (sd <= 0.0) throw StatsError("degenerate input: zero-variance differences");

  StatsSummary s;
  s.mean_difference = md;
  const double se = sd / std::sqrt(double(n));
  s.t_statistic = md / se;
  const double dof = double(n - 1);
  s.p_value = student_t_two_sided_p(s.t_statistic, dof);
  s.cohens_d = md / sd;
  const double t975 = student_t_quantile(0.975, dof);
  s.ci95_low = md - t975 * se;
  s.ci95_high = md + t975 * se;
  s.coefficient_of_variation = {mean(a) != 0.0 ? sample_sd(a) / mean(a) : 0.0,
                                mean(b) != 0.0 ? sample_sd(b) / mean(b) : 0.0};
  s.range = {range_of(a), range_of(b)};
  return s;
}

double one_way_anova_f(const std::vector<std::vector<double>>& series) {
  if (series.size() < 3) throw StatsError("ANOVA needs at least three series");
  std::size_t total_n = 0;
  double grand_sum = 0.0;
  for (const auto& s : series) {
    if (s.size() < 2) throw StatsError("ANOVA series need at least two values each");
    total_n += s.size();
    for (const double v : s) grand_sum += v;
  }
  const double grand_mean = grand_sum / double(total_n);
  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& s : series) {
    const double m = mean(s);
    ss_between += double(s.size()) * (m - grand_mean) * (m - grand_mean);
    for (const double v : s) ss_within += (v - m) * (v - m);
  }
  const double df_between = double(series.size() - 1);
  const double df_within = double(total_n - series.size());
  if (ss_within <= 0.0) throw StatsError("ANOVA within-group variance is zero");
  return (ss_between / df_between) / (ss_within / df_within);
}

}  // namespace psd2code::metrics
