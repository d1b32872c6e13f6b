#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ocd/error.hpp"
#include "ocd/rng.hpp"

namespace ocd {

inline constexpr std::size_t kBootstrapResamples = 10000;
inline constexpr std::uint64_t kBootstrapSeed = 0x6f63642d626f6f74ULL;

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double sq = 0.0;
  for (double x : xs) sq += (x - m) * (x - m);
  const double k = static_cast<double>(xs.size());
  return std::sqrt(sq / (k - 1.0) / k);
}

// Empirical quantile by the lower order statistic, q in [0, 1].
inline double order_quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(xs.size() - 1)));
  return xs[std::min(idx, xs.size() - 1)];
}

// Bootstrap distribution of the sample mean.
inline std::vector<double> bootstrap_means(std::span<const double> xs, std::size_t resamples = kBootstrapResamples,
                                           std::uint64_t seed = kBootstrapSeed) {
  if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "bootstrap of empty sample");
  CounterRng rng(seed);
  std::vector<double> out(resamples);
  for (auto& m : out) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += xs[rng.next_below(xs.size())];
    m = s / static_cast<double>(xs.size());
  }
  return out;
}

struct RatioEstimate {
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Ratio of sample means with a percentile bootstrap interval; pairs are
// resampled jointly.
inline RatioEstimate bootstrap_ratio_of_means(std::span<const double> num, std::span<const double> den,
                                              double level = 0.99, std::size_t resamples = kBootstrapResamples,
                                              std::uint64_t seed = kBootstrapSeed) {
  if (num.size() != den.size() || num.empty())
    throw Error(ErrorKind::InvalidArgument, "ratio bootstrap needs equal, non-empty samples");
  RatioEstimate est;
  est.ratio = std::accumulate(num.begin(), num.end(), 0.0) / std::accumulate(den.begin(), den.end(), 0.0);
  CounterRng rng(seed);
  std::vector<double> ratios(resamples);
  for (auto& r : ratios) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
      const auto j = rng.next_below(num.size());
      a += num[j];
      b += den[j];
    }
    r = a / b;
  }
  const double tail = (1.0 - level) / 2.0;
  est.ci_low = order_quantile(ratios, tail);
  est.ci_high = order_quantile(std::move(ratios), 1.0 - tail);
  return est;
}

// Number of Bernoulli(q) trials up to and including the first success.
inline std::uint64_t sample_geometric(CounterRng& rng, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorKind::InvalidArgument, "geometric success probability must be in (0, 1]");
  std::uint64_t k = 1;
  while (!(rng.next_unit() < q)) ++k;
  return k;
}

// Success probability of min(Y1, Y2) for independent Y1 ~ G(q1), Y2 ~ G(q2).
inline double min_geometric_success(double q1, double q2) { return 1.0 - (1.0 - q1) * (1.0 - q2); }

// E[min(Y, s)] for Y ~ G(q).
inline double truncated_geometric_mean(double q, std::uint64_t s) {
  return (1.0 - std::pow(1.0 - q, static_cast<double>(s))) / q;
}

}  // namespace ocd
