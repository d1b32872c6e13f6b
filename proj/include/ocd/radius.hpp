#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "ocd/arrivals.hpp"
#include "ocd/error.hpp"
#include "ocd/metric.hpp"

namespace ocd {

enum class BallMode { Closed, Open };

inline double ball_mass(const MetricSpace& space, const ArrivalDistribution& dist, LocationIndex x, double r,
                        BallMode mode) {
  space.check_index(x);
  if (!(r >= 0.0)) throw Error(ErrorKind::InvalidArgument, "ball radius must be nonnegative");
  double mass = 0.0;
  for (LocationIndex y = 0; y < space.size(); ++y) {
    const double d = space(x, y);
    if (mode == BallMode::Closed ? d <= r : d < r) mass += dist[y];
  }
  return mass;
}

// r[x] is the least r >= 0 with 1 / mass(closed ball(x, r)) <= r; q[x] is the
// open-ball mass at r[x]. q[x] can be 0 only when p[x] is 0.
struct RadiusTable {
  std::vector<double> r;
  std::vector<double> q;
};

// Distinct distances from x, ascending; the first entry is always 0.
inline std::vector<double> breakpoints(const MetricSpace& space, LocationIndex x) {
  std::vector<double> b(space.dist()[x]);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

inline double radius_at(const MetricSpace& space, const ArrivalDistribution& dist, LocationIndex x) {
  const auto b = breakpoints(space, x);
  // On [b[j], b[j+1]) the closed-ball mass is constant, so the condition
  // holds from max(b[j], 1/mass) onward if that point precedes b[j+1].
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double mass = ball_mass(space, dist, x, b[j], BallMode::Closed);
    if (!(mass > 0.0)) continue;
    const double candidate = std::max(b[j], 1.0 / mass);
    const bool last = j + 1 == b.size();
    if (last || candidate < b[j + 1]) return candidate;
  }
  throw Error(ErrorKind::ZeroMass, "no arrival mass reachable from location " + space.labels()[x]);
}

inline RadiusTable radius_table(const MetricSpace& space, const ArrivalDistribution& dist) {
  if (dist.size() != space.size()) throw Error(ErrorKind::InvalidArgument, "distribution does not match space");
  if (!(dist.total() > 0.0)) throw Error(ErrorKind::ZeroMass, "distribution has zero total mass");
  RadiusTable table;
  table.r.reserve(space.size());
  table.q.reserve(space.size());
  for (LocationIndex x = 0; x < space.size(); ++x) {
    const double r = radius_at(space, dist, x);
    table.r.push_back(r);
    table.q.push_back(ball_mass(space, dist, x, r, BallMode::Open));
  }
  return table;
}

}  // namespace ocd
