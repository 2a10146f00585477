#include <cmath>

#include "doctest.h"
#include "poixa/rng.hpp"
#include "poixa/stats.hpp"
#include "support/oracle_constants.hpp"

using namespace poixa;

namespace {

// Independent oracle for integer a, b: the binomial-sum identity
// I_x(a, b) = sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j).
double ibeta_binomial_sum(int a, int b, double x) {
  const int n = a + b - 1;
  double total = 0.0;
  for (int j = a; j <= n; ++j) {
    double log_c = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    total += std::exp(log_c + j * std::log(x) + (n - j) * std::log1p(-x));
  }
  return total;
}

}  // namespace

TEST_CASE("incomplete beta boundaries and uniform case") {
  CHECK(reg_incomplete_beta(3, 5, 0.0) == 0.0);
  CHECK(reg_incomplete_beta(3, 5, 1.0) == 1.0);
  CHECK(reg_incomplete_beta(1, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("incomplete beta against the binomial-sum oracle") {
  CHECK(std::fabs(reg_incomplete_beta(3, 5, 0.3) - ibeta_binomial_sum(3, 5, 0.3)) < 1e-9);
  CHECK(std::fabs(reg_incomplete_beta(2, 9, 0.62) - ibeta_binomial_sum(2, 9, 0.62)) < 1e-9);
  CHECK(std::fabs(reg_incomplete_beta(7, 4, 0.81) - ibeta_binomial_sum(7, 4, 0.81)) < 1e-9);
}

TEST_CASE("incomplete beta against precomputed high-precision values") {
  for (const auto& c : oracle::ibeta_cases)
    CHECK_MESSAGE(std::fabs(reg_incomplete_beta(c.a, c.b, c.x) - c.value) < 1e-10,
                  "a=", c.a, " b=", c.b, " x=", c.x);
}

TEST_CASE("incomplete beta reflection identity") {
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.1, 20.0);
    const double b = rng.uniform(0.1, 20.0);
    const double x = rng.uniform(0.0, 1.0);
    const double lhs = reg_incomplete_beta(a, b, x) + reg_incomplete_beta(b, a, 1.0 - x);
    CHECK(std::fabs(lhs - 1.0) < 1e-10);
  }
}

TEST_CASE("incomplete beta domain errors") {
  CHECK_THROWS_AS(reg_incomplete_beta(0.0, 1.0, 0.5), Error);
  CHECK_THROWS_AS(reg_incomplete_beta(1.0, -1.0, 0.5), Error);
  CHECK_THROWS_AS(reg_incomplete_beta(1.0, 1.0, 1.5), Error);
}

TEST_CASE("two-sample t-test on identical samples") {
  TestResult r = t_test_two_sample({1, 2, 3}, {1, 2, 3});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK_FALSE(r.significant);
}

TEST_CASE("two-sample t-test antisymmetry") {
  std::vector<double> xs = {2.1, 2.5, 2.3, 2.7};
  std::vector<double> ys = {1.1, 1.5, 1.3};
  TestResult fwd = t_test_two_sample(xs, ys);
  TestResult rev = t_test_two_sample(ys, xs);
  CHECK(fwd.statistic == doctest::Approx(-rev.statistic).epsilon(1e-12));
  CHECK(fwd.p_value == doctest::Approx(rev.p_value).epsilon(1e-12));
}

TEST_CASE("t-test and ANOVA match the reference oracle on fixed datasets") {
  REQUIRE(oracle::ttest_cases.size() == 10);
  for (const auto& c : oracle::ttest_cases) {
    TestResult r = t_test_two_sample(c.xs, c.ys);
    CHECK(std::fabs(r.statistic - c.t) < 1e-6 * std::max(1.0, std::fabs(c.t)));
    CHECK(std::fabs(r.p_value - c.p) < 1e-6);
  }
  REQUIRE(oracle::anova_cases.size() == 10);
  for (const auto& c : oracle::anova_cases) {
    TestResult r = anova_one_way(c.groups);
    CHECK(std::fabs(r.statistic - c.f) < 1e-6 * std::max(1.0, std::fabs(c.f)));
    CHECK(std::fabs(r.p_value - c.p) < 1e-6);
  }
}

TEST_CASE("one-sample t-test against the reference oracle") {
  for (const auto& c : oracle::onesample_cases) {
    TestResult r = t_test_one_sample(c.xs, c.mu0);
    CHECK(std::fabs(r.statistic - c.t) < 1e-6 * std::max(1.0, std::fabs(c.t)));
    CHECK(std::fabs(r.p_value - c.p) < 1e-6);
  }
}

TEST_CASE("one-sample t-test degenerate variance") {
  TestResult same = t_test_one_sample({2.0, 2.0, 2.0}, 2.0);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(same.degenerate);

  TestResult diff = t_test_one_sample({2.0, 2.0, 2.0}, 1.0);
  CHECK(diff.p_value == 0.0);
  CHECK(diff.degenerate);
  CHECK(diff.significant);
}

TEST_CASE("two-sample degenerate variance with unequal means") {
  TestResult r = t_test_two_sample({1.0, 1.0}, {2.0, 2.0});
  CHECK(r.p_value == 0.0);
  CHECK(r.degenerate);
  CHECK(std::isinf(r.statistic));
  CHECK(r.statistic < 0);
}

TEST_CASE("ANOVA with identical groups") {
  TestResult r = anova_one_way({{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("ANOVA equals t^2 for two groups") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> xs, ys;
    const int nx = static_cast<int>(rng.uniform_int(3, 12));
    const int ny = static_cast<int>(rng.uniform_int(3, 12));
    for (int j = 0; j < nx; ++j) xs.push_back(rng.normal(0.0, 1.0));
    for (int j = 0; j < ny; ++j) ys.push_back(rng.normal(0.4, 1.3));
    TestResult t = t_test_two_sample(xs, ys);
    TestResult f = anova_one_way({xs, ys});
    CHECK(std::fabs(f.statistic - t.statistic * t.statistic) < 1e-9 * std::max(1.0, f.statistic));
    CHECK(std::fabs(f.p_value - t.p_value) < 1e-9);
  }
}

TEST_CASE("p-values are monotone in |statistic| for fixed df") {
  double prev = 1.0;
  for (double t = 0.0; t < 6.0; t += 0.25) {
    const double p = student_t_two_sided_p(t, 8.0);
    CHECK(p <= prev + 1e-15);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("stat preconditions raise DomainError") {
  CHECK_THROWS_AS(t_test_two_sample({1.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(anova_one_way({{1.0, 2.0}}), Error);
  CHECK_THROWS_AS(anova_one_way({{1.0}, {1.0, 2.0}}), Error);
}
