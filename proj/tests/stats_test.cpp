#include <gtest/gtest.h>

#include <cmath>

#include "ocd/stats.hpp"

namespace {

TEST(Stats, MeanAndStandardError) {
  const std::vector<double> xs{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(ocd::mean(xs), 2.5);
  EXPECT_NEAR(ocd::standard_error(xs), std::sqrt((1.5 * 1.5 * 2 + 0.5 * 0.5 * 2) / 3.0 / 4.0), 1e-15);
  EXPECT_DOUBLE_EQ(ocd::standard_error(std::vector<double>{3}), 0.0);
}

TEST(Stats, OrderQuantile) {
  const std::vector<double> xs{5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(ocd::order_quantile(xs, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(ocd::order_quantile(xs, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(ocd::order_quantile(xs, 1.0), 5.0);
  EXPECT_THROW(ocd::order_quantile({}, 0.5), ocd::Error);
}

TEST(BootstrapRatio, Examples) {
  const std::vector<double> alg{10, 20}, opt{5, 5};
  EXPECT_DOUBLE_EQ(ocd::bootstrap_ratio_of_means(alg, opt).ratio, 3.0);

  const std::vector<double> same{3, 7, 9};
  const auto eq = ocd::bootstrap_ratio_of_means(same, same);
  EXPECT_DOUBLE_EQ(eq.ratio, 1.0);
  EXPECT_DOUBLE_EQ(eq.ci_low, 1.0);
  EXPECT_DOUBLE_EQ(eq.ci_high, 1.0);

  EXPECT_DOUBLE_EQ(ocd::bootstrap_ratio_of_means(std::vector<double>{28}, std::vector<double>{20}).ratio, 1.4);
  EXPECT_THROW(ocd::bootstrap_ratio_of_means(alg, std::vector<double>{1}), ocd::Error);
}

TEST(BootstrapRatio, IntervalBracketsRatioAndIsDeterministic) {
  ocd::CounterRng rng(71);
  std::vector<double> a(500), b(500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    b[i] = 1.0 + rng.next_unit();
    a[i] = b[i] * (1.2 + 0.2 * rng.next_unit());
  }
  const auto est = ocd::bootstrap_ratio_of_means(a, b);
  EXPECT_LE(est.ci_low, est.ratio);
  EXPECT_GE(est.ci_high, est.ratio);
  EXPECT_GT(est.ci_low, 1.2);
  EXPECT_LT(est.ci_high, 1.4);
  const auto again = ocd::bootstrap_ratio_of_means(a, b);
  EXPECT_EQ(again.ci_low, est.ci_low);
  EXPECT_EQ(again.ci_high, est.ci_high);
}

TEST(Geometric, SampleMeanMatches) {
  ocd::CounterRng rng(72);
  for (double q : {0.2, 0.5, 0.9}) {
    std::vector<double> ys(20000);
    for (auto& y : ys) y = static_cast<double>(ocd::sample_geometric(rng, q));
    EXPECT_LE(std::abs(ocd::mean(ys) - 1.0 / q), 3.0 * ocd::standard_error(ys)) << q;
  }
  EXPECT_THROW(ocd::sample_geometric(rng, 0.0), ocd::Error);
}

// min(Y1, Y2) is geometric with success 1 - (1 - q1)(1 - q2).
TEST(Geometric, MinimumOfTwo) {
  ocd::CounterRng rng(73);
  const double q1 = 0.15, q2 = 0.3;
  const double q = ocd::min_geometric_success(q1, q2);
  EXPECT_DOUBLE_EQ(q, 1.0 - 0.85 * 0.7);
  std::vector<double> ys(20000);
  for (auto& y : ys)
    y = static_cast<double>(std::min(ocd::sample_geometric(rng, q1), ocd::sample_geometric(rng, q2)));
  EXPECT_LE(std::abs(ocd::mean(ys) - 1.0 / q), 3.0 * ocd::standard_error(ys));
}

// E[min(Y, s)] = (1 - (1 - q)^s) / q, checked by direct summation and
// by simulation.
TEST(Geometric, TruncatedMean) {
  for (double q : {0.1, 0.4}) {
    for (std::uint64_t s : {1u, 3u, 10u}) {
      double direct = 0.0;
      for (std::uint64_t y = 1; y < 2000; ++y)
        direct += static_cast<double>(std::min(y, s)) * std::pow(1.0 - q, static_cast<double>(y - 1)) * q;
      EXPECT_NEAR(ocd::truncated_geometric_mean(q, s), direct, 1e-9);
    }
  }
  ocd::CounterRng rng(74);
  std::vector<double> ys(20000);
  for (auto& y : ys) y = static_cast<double>(std::min<std::uint64_t>(ocd::sample_geometric(rng, 0.25), 4));
  EXPECT_LE(std::abs(ocd::mean(ys) - ocd::truncated_geometric_mean(0.25, 4)), 3.0 * ocd::standard_error(ys));
}

}  // namespace
