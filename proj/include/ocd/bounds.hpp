#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "ocd/arrivals.hpp"
#include "ocd/clustering.hpp"
#include "ocd/error.hpp"
#include "ocd/metric.hpp"
#include "ocd/radius.hpp"

namespace ocd {

inline const double kOneMinusExpMinus2 = 1.0 - std::exp(-2.0);

// Upper bound on DGreedy's expected cost (unit delay scale):
// 2(n_1 - 1) [n sum_x p_x r_x + |X| d_max] + 2(n_1 - 1) |X| / sum_x p_x.
inline double theorem1_upper(const ArrivalDistribution& dist, const MetricSpace& space, const RadiusTable& radii,
                             std::size_t n, const ClusterSizeSpec& spec) {
  if (!(dist.total() > 0.0)) throw Error(ErrorKind::ZeroTotalMass, "distribution has zero total mass");
  double weighted_radius = 0.0;
  for (LocationIndex x = 0; x < space.size(); ++x) weighted_radius += dist[x] * radii.r.at(x);
  const double factor = 2.0 * static_cast<double>(spec.largest() - 1);
  const double locations = static_cast<double>(space.size());
  return factor * (static_cast<double>(n) * weighted_radius + locations * space.d_max()) +
         factor * locations / dist.total();
}

// Lower bound on the expected optimum (unit delay scale):
// n (n_k - 1) (1 - e^-2) / 4 * sum_x p_x / q_x, with q_x the open-ball mass
// at r_x. Locations with p_x = 0 contribute nothing.
inline double theorem2_lower(const ArrivalDistribution& dist, const MetricSpace& space, const RadiusTable& radii,
                             std::size_t n, const ClusterSizeSpec& spec) {
  double ratio_sum = 0.0;
  for (LocationIndex x = 0; x < space.size(); ++x) {
    if (dist[x] == 0.0) continue;
    const double q = radii.q.at(x);
    if (!(q > 0.0)) throw Error(ErrorKind::ZeroBallMass, "open ball at " + space.labels()[x] + " has zero mass");
    ratio_sum += dist[x] / q;
  }
  return static_cast<double>(n) * static_cast<double>(spec.smallest() - 1) * kOneMinusExpMinus2 / 4.0 * ratio_sum;
}

// Asymptotic ratio-of-expectations constant 8 (n_1 - 1) / ((n_k - 1)(1 - e^-2)).
inline double roe_bound(const ClusterSizeSpec& spec) {
  if (spec.smallest() < 2) return std::numeric_limits<double>::infinity();
  return 8.0 * static_cast<double>(spec.largest() - 1) /
         (static_cast<double>(spec.smallest() - 1) * kOneMinusExpMinus2);
}

struct BoundsReport {
  std::size_t n = 0;
  double lambda = 1.0;
  double thm1_upper = 0.0;
  double thm2_lower = 0.0;
  double roe_bound = 0.0;
  RadiusTable radii;  // in time units
};

// Evaluates all three bounds. For lambda != 1 the costs are lambda times the
// unit-scale costs on the space with distances divided by lambda, so the
// formulas run there and the two cost bounds are scaled back.
inline BoundsReport bounds_report(const ArrivalDistribution& dist, const MetricSpace& space, std::size_t n,
                                  const ClusterSizeSpec& spec, const CostParams& params = {}) {
  params.validate();
  const MetricSpace time_space = params.lambda == 1.0 ? space : space.scaled(1.0 / params.lambda);
  BoundsReport report;
  report.n = n;
  report.lambda = params.lambda;
  report.radii = radius_table(time_space, dist);
  report.thm1_upper = params.lambda * theorem1_upper(dist, time_space, report.radii, n, spec);
  report.thm2_lower = params.lambda * theorem2_lower(dist, time_space, report.radii, n, spec);
  report.roe_bound = roe_bound(spec);
  return report;
}

}  // namespace ocd
