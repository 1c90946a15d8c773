#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace psd2code::metrics {

class StatsError : public std::runtime_error {
 public:
  explicit StatsError(const std::string& what) : std::runtime_error(what) {}
};

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);  // inverse CDF by bisection

// Two-sided p for a t statistic with the given degrees of freedom.
double student_t_two_sided_p(double t, double dof);

struct StatsSummary {
  double t_statistic = 0.0;
  double p_value = 1.0;
  double cohens_d = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  double mean_difference = 0.0;
  std::array<double, 2> coefficient_of_variation{0.0, 0.0};  // per input series
  std::array<double, 2> range{0.0, 0.0};                      // per input series
  std::optional<double> anova_f;
};

// Paired t-test over per-sample differences d_i = a_i - b_i with sample sd,
// Cohen's d = mean(d)/sd(d) and the t-based 95% CI. Throws StatsError on
// fewer than two pairs or zero-variance differences.
StatsSummary paired_stats(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
double sample_sd(std::span<const double> xs);
double coefficient_of_variation(std::span<const double> xs);  // sd/mean
double range_of(std::span<const double> xs);

// One-way ANOVA F over >= 3 series.
double one_way_anova_f(const std::vector<std::vector<double>>& series);

}  // namespace psd2code::metrics
