#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocd/error.hpp"
#include "ocd/metric.hpp"
#include "ocd/rng.hpp"

namespace ocd {

using PointId = std::size_t;  // 1-based, in arrival order
using Time = std::int64_t;

inline constexpr double kMassTolerance = 1e-12;

// Per-location arrival probabilities, indexed like the metric space. The
// remaining mass 1 - sum(p) is the probability that a step has no arrival.
class ArrivalDistribution {
 public:
  ArrivalDistribution() = default;

  explicit ArrivalDistribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw Error(ErrorKind::InvalidArgument, "distribution needs at least one location");
    for (double v : p_) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite probability");
      if (v < 0.0) throw Error(ErrorKind::NegativeMass, "negative probability " + std::to_string(v));
    }
    total_ = std::accumulate(p_.begin(), p_.end(), 0.0);
    if (total_ > 1.0 + kMassTolerance)
      throw Error(ErrorKind::MassExceedsOne, "probabilities sum to " + std::to_string(total_));
  }

  std::size_t size() const { return p_.size(); }
  double operator[](LocationIndex x) const { return p_[x]; }
  const std::vector<double>& probabilities() const { return p_; }
  double total() const { return total_; }

  double mass_of(const std::vector<LocationIndex>& subset) const {
    double q = 0.0;
    for (auto x : subset) q += p_.at(x);
    return q;
  }

 private:
  std::vector<double> p_;
  double total_ = 0.0;
};

inline ArrivalDistribution validate_distribution(std::vector<double> p, const MetricSpace& space) {
  if (p.size() != space.size())
    throw Error(ErrorKind::InvalidArgument, "distribution has " + std::to_string(p.size()) +
                                                " entries for a space of " + std::to_string(space.size()));
  return ArrivalDistribution(std::move(p));
}

struct Arrival {
  PointId id;
  LocationIndex location;
  Time time;
  bool operator==(const Arrival&) const = default;
};

// A concrete timed sequence. Arrival times are positive and strictly
// increasing; ids are 1..n in arrival order.
class ArrivalSequence {
 public:
  ArrivalSequence() = default;

  static ArrivalSequence from_events(const std::vector<std::pair<Time, LocationIndex>>& events) {
    ArrivalSequence seq;
    Time prev = 0;
    for (const auto& [t, loc] : events) {
      if (t <= 0) throw Error(ErrorKind::ParseError, "arrival times must be positive");
      if (t == prev) throw Error(ErrorKind::DuplicateTime, "two arrivals at time " + std::to_string(t));
      if (t < prev) throw Error(ErrorKind::ParseError, "arrival times must increase");
      seq.points_.push_back({seq.points_.size() + 1, loc, t});
      prev = t;
    }
    return seq;
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Arrival>& points() const { return points_; }
  const Arrival& point(PointId id) const { return points_.at(id - 1); }
  Time time_of(PointId id) const { return point(id).time; }
  LocationIndex location_of(PointId id) const { return point(id).location; }
  Time horizon() const { return points_.empty() ? 0 : points_.back().time; }

  // Number of points with arrival time <= t (|N^t|).
  std::size_t arrived_by(Time t) const {
    std::size_t lo = 0, hi = points_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (points_[mid].time <= t) lo = mid + 1; else hi = mid;
    }
    return lo;
  }

  bool operator==(const ArrivalSequence&) const = default;

 private:
  std::vector<Arrival> points_;
};

// Discrete-time sampling: each step t = 1, 2, ... draws one uniform u and
// picks the first location whose cumulative probability (instance order)
// exceeds u; u beyond the total means no arrival at t.
inline ArrivalSequence sample_sequence(const ArrivalDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  if (!(dist.total() > 0.0)) throw Error(ErrorKind::ZeroTotalMass, "no location has positive probability");
  std::vector<double> cumulative(dist.size());
  std::partial_sum(dist.probabilities().begin(), dist.probabilities().end(), cumulative.begin());
  // Full mass: absorb rounding so that every step produces an arrival.
  if (std::abs(cumulative.back() - 1.0) <= kMassTolerance) cumulative.back() = 1.0;

  CounterRng rng(seed);
  std::vector<std::pair<Time, LocationIndex>> events;
  events.reserve(n);
  for (Time t = 1; events.size() < n; ++t) {
    const double u = rng.next_unit();
    for (std::size_t x = 0; x < cumulative.size(); ++x) {
      if (u < cumulative[x]) {
        events.emplace_back(t, x);
        break;
      }
    }
  }
  return ArrivalSequence::from_events(events);
}

// Line format: "<time> <label>" per line, ascending time. Blank lines and
// lines starting with '#' are skipped.
inline ArrivalSequence parse_sequence(std::string_view text, const MetricSpace& space) {
  std::vector<std::pair<Time, LocationIndex>> events;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long t = 0;
    std::string label, extra;
    if (!(fields >> t >> label) || (fields >> extra))
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected '<time> <label>'");
    auto loc = space.find(label);
    if (!loc) throw Error(ErrorKind::UnknownLocation, "line " + std::to_string(lineno) + ": unknown label '" + label + "'");
    events.emplace_back(static_cast<Time>(t), *loc);
  }
  if (events.empty()) throw Error(ErrorKind::ParseError, "sequence has no arrivals");
  return ArrivalSequence::from_events(events);
}

inline std::string format_sequence(const ArrivalSequence& seq, const MetricSpace& space) {
  std::string out;
  for (const auto& a : seq.points()) {
    out += std::to_string(a.time);
    out += ' ';
    out += space.labels().at(a.location);
    out += '\n';
  }
  return out;
}

struct GapStatistics {
  std::vector<Time> gaps;
  std::optional<double> empirical_mean;  // absent with fewer than two arrivals in the subset
  double std_error = 0.0;
  double theoretical_mean = 0.0;
};

// Gaps between consecutive arrivals that land inside `subset`; these are
// geometric with success probability q = p(subset).
inline GapStatistics gap_statistics(const ArrivalSequence& seq, const std::vector<LocationIndex>& subset,
                                    const ArrivalDistribution& dist) {
  const double q = dist.mass_of(subset);
  if (!(q > 0.0)) throw Error(ErrorKind::EmptySubsetMass, "subset has zero arrival probability");
  std::vector<bool> in(dist.size(), false);
  for (auto x : subset) in.at(x) = true;

  GapStatistics stats;
  stats.theoretical_mean = 1.0 / q;
  std::optional<Time> last;
  for (const auto& a : seq.points()) {
    if (!in[a.location]) continue;
    if (last) stats.gaps.push_back(a.time - *last);
    last = a.time;
  }
  if (!stats.gaps.empty()) {
    const double k = static_cast<double>(stats.gaps.size());
    double sum = 0.0, sq = 0.0;
    for (Time g : stats.gaps) sum += static_cast<double>(g);
    const double mean = sum / k;
    for (Time g : stats.gaps) sq += (static_cast<double>(g) - mean) * (static_cast<double>(g) - mean);
    stats.empirical_mean = mean;
    stats.std_error = stats.gaps.size() > 1 ? std::sqrt(sq / (k - 1.0) / k) : 0.0;
  }
  return stats;
}

}  // namespace ocd
