#pragma once

#include <string>
#include <vector>

#include "poixa/error.hpp"

namespace poixa {

struct TestResult {
  std::string kind;        // "t_two_sample" | "t_one_sample" | "anova"
  double statistic = 0.0;  // t or F
  double df1 = 0.0;        // t: df; anova: k-1
  double df2 = 0.0;        // anova: N-k; unused for t
  double p_value = 1.0;
  double threshold = 0.05;
  bool significant = false;  // p_value < threshold
  bool degenerate = false;   // zero-variance corner case
};

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation,
// absolute error below 1e-10. Domain: a, b > 0 and x in [0, 1].
double reg_incomplete_beta(double a, double b, double x);

// Two-sided p-values via the incomplete beta.
double student_t_two_sided_p(double t, double df);
double f_upper_tail_p(double f, double df1, double df2);

// Pooled-variance two-sided Student's t-test, df = nx + ny - 2.
TestResult t_test_two_sample(const std::vector<double>& xs, const std::vector<double>& ys,
                             double threshold = 0.05);

// Two-sided one-sample t-test of xs against mu0, df = n - 1.
TestResult t_test_one_sample(const std::vector<double>& xs, double mu0, double threshold = 0.05);

// One-way ANOVA; F = between-group MS / within-group MS, df = (k-1, N-k).
TestResult anova_one_way(const std::vector<std::vector<double>>& groups, double threshold = 0.05);

}  // namespace poixa
