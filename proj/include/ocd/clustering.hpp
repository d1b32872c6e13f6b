#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocd/arrivals.hpp"
#include "ocd/error.hpp"
#include "ocd/metric.hpp"

namespace ocd {

using SlotIndex = std::size_t;  // 0-based internally; reported 1-based

struct SizeInterval {
  std::size_t lower;
  std::size_t upper;
  bool operator==(const SizeInterval&) const = default;
};

// Target cluster sizes, bound to slots by index. Fixed mode lists
// n_1 >= ... >= n_k; interval mode gives [l_m, u_m] per slot.
class ClusterSizeSpec {
 public:
  enum class Mode { Fixed, Interval };

  // `degenerate` admits k = 1 and unit sizes, which only test fixtures need.
  static ClusterSizeSpec fixed(std::vector<std::size_t> sizes, bool degenerate = false) {
    if (sizes.empty()) throw Error(ErrorKind::InfeasibleSpec, "no cluster sizes given");
    if (!std::is_sorted(sizes.rbegin(), sizes.rend()))
      throw Error(ErrorKind::InfeasibleSpec, "fixed sizes must be listed in non-increasing order");
    for (auto s : sizes)
      if (s == 0) throw Error(ErrorKind::InfeasibleSpec, "cluster size must be positive");
    const bool is_degenerate = sizes.size() < 2 || sizes.back() < 2;
    if (is_degenerate && !degenerate)
      throw Error(ErrorKind::InfeasibleSpec, "need k >= 2 clusters of size >= 2 (pass degenerate for fixtures)");
    ClusterSizeSpec spec;
    spec.mode_ = Mode::Fixed;
    for (auto s : sizes) spec.bounds_.push_back({s, s});
    spec.degenerate_ = is_degenerate;
    return spec;
  }

  static ClusterSizeSpec interval(std::vector<SizeInterval> bounds) {
    if (bounds.empty()) throw Error(ErrorKind::InfeasibleSpec, "no cluster intervals given");
    for (const auto& b : bounds) {
      if (b.lower < 2) throw Error(ErrorKind::InfeasibleSpec, "interval lower bound must be at least 2");
      if (b.lower > b.upper) throw Error(ErrorKind::InfeasibleSpec, "interval lower bound exceeds upper bound");
    }
    ClusterSizeSpec spec;
    spec.mode_ = Mode::Interval;
    spec.bounds_ = std::move(bounds);
    return spec;
  }

  // k clusters of equal size `size`.
  static ClusterSizeSpec uniform(std::size_t k, std::size_t size) { return fixed(std::vector<std::size_t>(k, size)); }

  Mode mode() const { return mode_; }
  bool is_fixed() const { return mode_ == Mode::Fixed; }
  bool degenerate() const { return degenerate_; }
  std::size_t k() const { return bounds_.size(); }
  const std::vector<SizeInterval>& bounds() const { return bounds_; }

  std::vector<std::size_t> lower_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& b : bounds_) out.push_back(b.lower);
    return out;
  }
  std::vector<std::size_t> upper_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& b : bounds_) out.push_back(b.upper);
    return out;
  }

  std::size_t total_lower() const {
    return std::accumulate(bounds_.begin(), bounds_.end(), std::size_t{0},
                           [](std::size_t a, const SizeInterval& b) { return a + b.lower; });
  }
  std::size_t total_upper() const {
    return std::accumulate(bounds_.begin(), bounds_.end(), std::size_t{0},
                           [](std::size_t a, const SizeInterval& b) { return a + b.upper; });
  }

  // n_1 (u_max in interval mode) and n_k (l_min in interval mode).
  std::size_t largest() const {
    std::size_t v = 0;
    for (const auto& b : bounds_) v = std::max(v, b.upper);
    return v;
  }
  std::size_t smallest() const {
    std::size_t v = bounds_.front().lower;
    for (const auto& b : bounds_) v = std::min(v, b.lower);
    return v;
  }

  bool feasible_for(std::size_t n) const { return total_lower() <= n && n <= total_upper(); }

  bool operator==(const ClusterSizeSpec&) const = default;

 private:
  Mode mode_ = Mode::Fixed;
  std::vector<SizeInterval> bounds_;
  bool degenerate_ = false;
};

struct CostParams {
  double lambda = 1.0;

  void validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  }
};

// Waiting times w_i = s_i - t_i, defined for assigned points only.
class DelayProfile {
 public:
  DelayProfile() = default;
  explicit DelayProfile(std::size_t n) : w_(n) {}

  std::size_t capacity() const { return w_.size(); }
  bool has(PointId id) const { return id >= 1 && id <= w_.size() && w_[id - 1].has_value(); }

  Time at(PointId id) const {
    if (!has(id)) throw Error(ErrorKind::MissingDelay, "no delay recorded for point " + std::to_string(id));
    return *w_[id - 1];
  }

  void set(PointId id, Time w) {
    if (w < 0) throw Error(ErrorKind::InvalidArgument, "negative delay");
    if (id == 0) throw Error(ErrorKind::InvalidArgument, "point ids start at 1");
    if (id > w_.size()) w_.resize(id);
    w_[id - 1] = w;
  }

  Time sum() const {
    Time s = 0;
    for (const auto& w : w_)
      if (w) s += *w;
    return s;
  }

  bool operator==(const DelayProfile&) const = default;

 private:
  std::vector<std::optional<Time>> w_;
};

using Cluster = std::vector<PointId>;

// Slots C_1..C_k with per-slot capacities; assignments are irrevocable.
class ClusteringState {
 public:
  ClusteringState(std::vector<std::size_t> caps, std::size_t n_points)
      : slots_(caps.size()), caps_(std::move(caps)), assign_time_(n_points) {}

  std::size_t k() const { return slots_.size(); }
  std::size_t n_points() const { return assign_time_.size(); }
  const std::vector<Cluster>& slots() const { return slots_; }
  const Cluster& slot(SlotIndex m) const { return slots_.at(m); }
  std::size_t cap(SlotIndex m) const { return caps_.at(m); }
  const std::vector<std::size_t>& caps() const { return caps_; }
  Time now() const { return now_; }
  void set_now(Time t) { now_ = t; }

  // Raise or lower capacities; used when switching from lower to upper
  // bounds in interval mode. Never below the current fill.
  void set_caps(std::vector<std::size_t> caps) {
    if (caps.size() != slots_.size()) throw Error(ErrorKind::InvalidArgument, "capacity count mismatch");
    for (std::size_t m = 0; m < caps.size(); ++m)
      if (caps[m] < slots_[m].size()) throw Error(ErrorKind::CapacityExceeded, "capacity below current size");
    caps_ = std::move(caps);
  }

  bool is_assigned(PointId id) const { return assign_time_.at(id - 1).has_value(); }
  std::optional<Time> assign_time(PointId id) const { return assign_time_.at(id - 1); }

  void assign(PointId id, SlotIndex m, Time t) {
    if (is_assigned(id)) throw Error(ErrorKind::InvalidArgument, "point " + std::to_string(id) + " already assigned");
    if (slots_.at(m).size() >= caps_[m]) throw Error(ErrorKind::CapacityExceeded, "slot " + std::to_string(m + 1) + " is full");
    slots_[m].push_back(id);
    assign_time_[id - 1] = t;
  }

  std::size_t assigned_count() const {
    return static_cast<std::size_t>(std::count_if(assign_time_.begin(), assign_time_.end(),
                                                  [](const auto& s) { return s.has_value(); }));
  }

 private:
  std::vector<Cluster> slots_;
  std::vector<std::size_t> caps_;
  std::vector<std::optional<Time>> assign_time_;
  Time now_ = 0;
};

namespace detail {

// Sum over ordered pairs of d + lambda*(w_a + w_b) for the pairs created by
// merging `added` into `members`.
template <typename WaitFn>
double added_pair_cost(const Cluster& members, const Cluster& added, const ArrivalSequence& seq,
                       const MetricSpace& space, double lambda, WaitFn&& wait) {
  double cost = 0.0;
  for (std::size_t a = 0; a < added.size(); ++a) {
    const PointId i = added[a];
    const LocationIndex li = seq.location_of(i);
    const double wi = lambda * static_cast<double>(wait(i));
    for (PointId j : members) cost += 2.0 * (space(li, seq.location_of(j)) + wi + lambda * static_cast<double>(wait(j)));
    for (std::size_t b = a + 1; b < added.size(); ++b) {
      const PointId j = added[b];
      cost += 2.0 * (space(li, seq.location_of(j)) + wi + lambda * static_cast<double>(wait(j)));
    }
  }
  return cost;
}

inline void check_point(const ArrivalSequence& seq, const MetricSpace& space, PointId id) {
  if (id == 0 || id > seq.size()) throw Error(ErrorKind::InvalidArgument, "unknown point " + std::to_string(id));
  space.check_index(seq.location_of(id));
}

}  // namespace detail

inline double cluster_cost(const Cluster& cluster, const ArrivalSequence& seq, const MetricSpace& space,
                           const DelayProfile& w, const CostParams& params = {}) {
  for (PointId id : cluster) {
    detail::check_point(seq, space, id);
    if (!w.has(id)) throw Error(ErrorKind::MissingDelay, "no delay recorded for point " + std::to_string(id));
  }
  return detail::added_pair_cost({}, cluster, seq, space, params.lambda, [&](PointId id) { return w.at(id); });
}

// TC: over clusters, over ordered pairs i != j, d(l_i, l_j) + lambda*(w_i + w_j).
inline double total_cost(const std::vector<Cluster>& clusters, const ArrivalSequence& seq, const MetricSpace& space,
                         const DelayProfile& w, const CostParams& params = {}) {
  params.validate();
  double tc = 0.0;
  for (const auto& c : clusters) tc += cluster_cost(c, seq, space, w, params);
  return tc;
}

// TC after adding `addition` to slot m, minus TC before. `w` must hold
// (prospective) waits for both the slot members and the added points.
inline double insertion_delta(const ClusteringState& state, const DelayProfile& w, const Cluster& addition,
                              SlotIndex m, const ArrivalSequence& seq, const MetricSpace& space,
                              const CostParams& params = {}) {
  if (m >= state.k()) throw Error(ErrorKind::InvalidArgument, "slot index out of range");
  if (state.slot(m).size() + addition.size() > state.cap(m))
    throw Error(ErrorKind::CapacityExceeded, "addition overflows slot " + std::to_string(m + 1));
  for (PointId id : state.slot(m)) detail::check_point(seq, space, id);
  for (PointId id : addition) detail::check_point(seq, space, id);
  return detail::added_pair_cost(state.slot(m), addition, seq, space, params.lambda,
                                 [&](PointId id) { return w.at(id); });
}

inline bool validate_final(const ClusteringState& state, const ClusterSizeSpec& spec) {
  if (state.assigned_count() != state.n_points())
    throw Error(ErrorKind::UnassignedPoints,
                std::to_string(state.n_points() - state.assigned_count()) + " points are unassigned");
  if (state.k() != spec.k()) return false;
  for (SlotIndex m = 0; m < spec.k(); ++m) {
    const auto size = state.slot(m).size();
    const auto& b = spec.bounds()[m];
    if (size < b.lower || size > b.upper) return false;
  }
  return true;
}

}  // namespace ocd
