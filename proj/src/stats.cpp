#include "poixa/stats.hpp"

#include <cmath>
#include <limits>

#include "poixa/error.hpp"

namespace poixa {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 3e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  fail(errc::numeric_error, "incomplete beta continued fraction did not converge");
}

double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double sum_sq_dev(const std::vector<double>& xs, double mean) {
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc;
}

TestResult finish(TestResult r, double threshold) {
  require(threshold > 0.0 && threshold < 1.0, errc::domain_error, "threshold must be in (0,1)");
  r.threshold = threshold;
  r.significant = r.p_value < threshold;
  return r;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, errc::domain_error, "incomplete beta needs a, b > 0");
  require(x >= 0.0 && x <= 1.0, errc::domain_error, "incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_bt =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  require(df > 0.0, errc::domain_error, "t-distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return reg_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double f_upper_tail_p(double f, double df1, double df2) {
  require(df1 > 0.0 && df2 > 0.0, errc::domain_error, "F-distribution needs positive dfs");
  require(f >= 0.0, errc::domain_error, "F statistic must be non-negative");
  if (std::isinf(f)) return 0.0;
  return reg_incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

TestResult t_test_two_sample(const std::vector<double>& xs, const std::vector<double>& ys,
                             double threshold) {
  require(xs.size() >= 2 && ys.size() >= 2, errc::domain_error,
          "t-test needs at least 2 observations per sample");
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  const double df = nx + ny - 2.0;
  const double pooled = (sum_sq_dev(xs, mx) + sum_sq_dev(ys, my)) / df;

  TestResult r;
  r.kind = "t_two_sample";
  r.df1 = df;
  if (pooled == 0.0) {
    r.degenerate = true;
    if (mx == my) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = std::copysign(std::numeric_limits<double>::infinity(), mx - my);
      r.p_value = 0.0;
    }
    return finish(r, threshold);
  }
  r.statistic = (mx - my) / std::sqrt(pooled * (1.0 / nx + 1.0 / ny));
  r.p_value = student_t_two_sided_p(r.statistic, df);
  return finish(r, threshold);
}

TestResult t_test_one_sample(const std::vector<double>& xs, double mu0, double threshold) {
  require(xs.size() >= 2, errc::domain_error, "one-sample t-test needs at least 2 observations");
  const double n = static_cast<double>(xs.size());
  const double m = mean_of(xs);
  const double var = sum_sq_dev(xs, m) / (n - 1.0);

  TestResult r;
  r.kind = "t_one_sample";
  r.df1 = n - 1.0;
  if (var == 0.0) {
    r.degenerate = true;
    if (m == mu0) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = std::copysign(std::numeric_limits<double>::infinity(), m - mu0);
      r.p_value = 0.0;
    }
    return finish(r, threshold);
  }
  r.statistic = (m - mu0) / std::sqrt(var / n);
  r.p_value = student_t_two_sided_p(r.statistic, r.df1);
  return finish(r, threshold);
}

TestResult anova_one_way(const std::vector<std::vector<double>>& groups, double threshold) {
  require(groups.size() >= 2, errc::domain_error, "ANOVA needs at least 2 groups");
  std::size_t total_n = 0;
  for (const auto& g : groups) {
    require(g.size() >= 2, errc::domain_error, "ANOVA needs at least 2 observations per group");
    total_n += g.size();
  }
  const double k = static_cast<double>(groups.size());
  const double n = static_cast<double>(total_n);

  double grand_sum = 0.0;
  for (const auto& g : groups)
    for (double x : g) grand_sum += x;
  const double grand_mean = grand_sum / n;

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double gm = mean_of(g);
    ss_between += static_cast<double>(g.size()) * (gm - grand_mean) * (gm - grand_mean);
    ss_within += sum_sq_dev(g, gm);
  }

  TestResult r;
  r.kind = "anova";
  r.df1 = k - 1.0;
  r.df2 = n - k;
  if (ss_within == 0.0) {
    r.degenerate = true;
    if (ss_between == 0.0) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return finish(r, threshold);
  }
  r.statistic = (ss_between / r.df1) / (ss_within / r.df2);
  r.p_value = f_upper_tail_p(r.statistic, r.df1, r.df2);
  return finish(r, threshold);
}

}  // namespace poixa
