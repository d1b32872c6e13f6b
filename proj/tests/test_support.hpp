#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "ocd/ocd.hpp"

namespace ocd::testing {

inline MetricSpace uniform_space(std::size_t k, double d) {
  std::vector<std::string> labels;
  Matrix dist(k, std::vector<double>(k, d));
  for (std::size_t x = 0; x < k; ++x) {
    labels.push_back(std::string(1, static_cast<char>('A' + x)));
    dist[x][x] = 0.0;
  }
  return MetricSpace(labels, dist);
}

// Three locations at pairwise distance 2.
inline MetricSpace three_point_space() { return uniform_space(3, 2.0); }
inline ArrivalDistribution three_point_dist() { return ArrivalDistribution({0.2, 0.2, 0.2}); }
inline ArrivalSequence three_point_sequence() { return ArrivalSequence::from_events({{1, 0}, {3, 1}, {4, 2}}); }

struct RandomInstance {
  MetricSpace space;
  ArrivalDistribution dist;
};

// L1 distances between integer grid points, so every cost is an exact
// small integer; masses are positive with total in [0.3, 1].
inline RandomInstance random_instance(CounterRng& rng, std::size_t min_locations = 2, std::size_t max_locations = 5) {
  const std::size_t k = min_locations + rng.next_below(max_locations - min_locations + 1);
  std::vector<std::pair<int, int>> pts;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < k; ++x) {
    pts.emplace_back(static_cast<int>(rng.next_below(7)), static_cast<int>(rng.next_below(7)));
    labels.push_back("L" + std::to_string(x));
  }
  Matrix d(k, std::vector<double>(k, 0.0));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      d[x][y] = std::abs(pts[x].first - pts[y].first) + std::abs(pts[x].second - pts[y].second);
  const double total = 0.3 + 0.7 * rng.next_unit();
  std::vector<double> w(k);
  double sw = 0.0;
  for (auto& v : w) sw += (v = 0.1 + rng.next_unit());
  for (auto& v : w) v = v / sw * total * (1.0 - 1e-12);
  return {MetricSpace(labels, d), ArrivalDistribution(w)};
}

inline std::vector<ClusterSizeSpec> audit_specs() {
  return {ClusterSizeSpec::fixed({2, 2, 2}),
          ClusterSizeSpec::fixed({3, 2}),
          ClusterSizeSpec::fixed({3, 3, 2}),
          ClusterSizeSpec::fixed({4, 2, 2}),
          ClusterSizeSpec::fixed({2, 2}),
          ClusterSizeSpec::interval({{2, 3}, {2, 3}}),
          ClusterSizeSpec::interval({{2, 4}, {2, 2}, {2, 3}})};
}

// n for a trial: the fixed total, or a value inside the interval range.
inline std::size_t trial_size(const ClusterSizeSpec& spec, CounterRng& rng) {
  if (spec.is_fixed()) return spec.total_lower();
  return spec.total_lower() + rng.next_below(spec.total_upper() - spec.total_lower() + 1);
}

}  // namespace ocd::testing
