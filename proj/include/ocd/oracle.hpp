#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "ocd/arrivals.hpp"
#include "ocd/clustering.hpp"
#include "ocd/error.hpp"
#include "ocd/metric.hpp"

namespace ocd {

inline constexpr std::size_t kDefaultEnumerationCap = 12;

struct OracleResult {
  std::vector<Cluster> partition;  // partition[m] fills slot m (sizes n_1 >= ... >= n_k)
  DelayProfile w_opt;
  double opt_cost = 0.0;
  std::vector<double> c;  // c_i for point id i at index i - 1
  double lemma5_lower = 0.0;
};

// Offline schedule: each cluster is founded when its second member arrives
// (the first member waits the gap, the second none); later members join on
// arrival.
inline DelayProfile optimal_delay_profile(const std::vector<Cluster>& partition, const ArrivalSequence& seq) {
  DelayProfile w(seq.size());
  std::vector<bool> covered(seq.size() + 1, false);
  for (const auto& cluster : partition) {
    if (cluster.size() < 2) throw Error(ErrorKind::SingletonCluster, "offline clusters need at least two points");
    std::vector<PointId> by_arrival(cluster);
    std::sort(by_arrival.begin(), by_arrival.end(),
              [&](PointId a, PointId b) { return seq.time_of(a) < seq.time_of(b); });
    const Time founding = seq.time_of(by_arrival[1]);
    for (PointId id : by_arrival) {
      if (id == 0 || id > seq.size() || covered[id])
        throw Error(ErrorKind::InvalidArgument, "partition is not a set partition of the sequence");
      covered[id] = true;
      w.set(id, std::max<Time>(0, founding - seq.time_of(id)));
    }
  }
  for (PointId id = 1; id <= seq.size(); ++id)
    if (!covered[id]) throw Error(ErrorKind::InvalidArgument, "partition misses point " + std::to_string(id));
  return w;
}

// c_i = min over j != i of d(l_i, l_j) + lambda (w_i + w_j), over the whole sequence.
inline std::vector<double> minimum_costs(const ArrivalSequence& seq, const MetricSpace& space, const DelayProfile& w,
                                         const CostParams& params = {}) {
  std::vector<double> c(seq.size(), std::numeric_limits<double>::infinity());
  for (const auto& a : seq.points())
    for (const auto& b : seq.points()) {
      if (a.id == b.id) continue;
      const double v = space(a.location, b.location) + params.lambda * static_cast<double>(w.at(a.id) + w.at(b.id));
      c[a.id - 1] = std::min(c[a.id - 1], v);
    }
  return c;
}

namespace detail {

// Enumerates each unordered partition of {1..n} into groups whose sizes form
// the multiset `sizes` exactly once: the lowest unplaced point always opens
// the next group, and a group takes one of the still-available sizes.
class PartitionEnumerator {
 public:
  using Visitor = std::function<void(const std::vector<Cluster>&)>;

  PartitionEnumerator(std::size_t n, const std::vector<std::size_t>& sizes) : n_(n), used_(n + 1, false) {
    for (auto s : sizes) ++remaining_[s];
  }

  void run(const Visitor& visit) { open_group(visit); }

 private:
  void open_group(const Visitor& visit) {
    PointId first = 1;
    while (first <= n_ && used_[first]) ++first;
    if (first > n_) {
      visit(groups_);
      return;
    }
    for (auto& [size, count] : remaining_) {
      if (count == 0) continue;
      --count;
      used_[first] = true;
      groups_.push_back({first});
      fill_group(size, first + 1, visit);
      groups_.pop_back();
      used_[first] = false;
      ++count;
    }
  }

  void fill_group(std::size_t size, PointId from, const Visitor& visit) {
    if (groups_.back().size() == size) {
      open_group(visit);
      return;
    }
    for (PointId p = from; p <= n_; ++p) {
      if (used_[p]) continue;
      used_[p] = true;
      groups_.back().push_back(p);
      fill_group(size, p + 1, visit);
      groups_.back().pop_back();
      used_[p] = false;
    }
  }

  std::size_t n_;
  std::vector<bool> used_;
  std::map<std::size_t, std::size_t, std::greater<>> remaining_;
  std::vector<Cluster> groups_;
};

// Claim-1 cost of one cluster: pairwise distances plus the founder's wait
// counted against every other member, both directions.
inline double scheduled_cluster_cost(const Cluster& cluster, const ArrivalSequence& seq, const MetricSpace& space,
                                     double lambda) {
  double dist = 0.0;
  Time first = std::numeric_limits<Time>::max(), second = std::numeric_limits<Time>::max();
  for (std::size_t a = 0; a < cluster.size(); ++a) {
    const Time t = seq.time_of(cluster[a]);
    if (t < first) {
      second = first;
      first = t;
    } else if (t < second) {
      second = t;
    }
    for (std::size_t b = a + 1; b < cluster.size(); ++b)
      dist += space(seq.location_of(cluster[a]), seq.location_of(cluster[b]));
  }
  return 2.0 * dist + 2.0 * static_cast<double>(cluster.size() - 1) * lambda * static_cast<double>(second - first);
}

}  // namespace detail

// Number of partitions opt_exact would visit.
inline std::size_t partition_count(const std::vector<std::size_t>& sizes) {
  std::size_t count = 0;
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  detail::PartitionEnumerator(n, sizes).run([&](const auto&) { ++count; });
  return count;
}

// Exact offline optimum by enumerating every partition compatible with the
// fixed sizes; the first minimizer in enumeration order wins ties.
inline OracleResult opt_exact(const ArrivalSequence& seq, const MetricSpace& space, const ClusterSizeSpec& spec,
                              const CostParams& params = {}, std::size_t cap = kDefaultEnumerationCap) {
  params.validate();
  if (!spec.is_fixed()) throw Error(ErrorKind::InfeasibleSpec, "oracle needs fixed sizes");
  if (seq.size() > cap)
    throw Error(ErrorKind::TooLarge, "n = " + std::to_string(seq.size()) + " exceeds oracle cap " + std::to_string(cap));
  const auto sizes = spec.lower_sizes();
  if (spec.total_lower() != seq.size()) throw Error(ErrorKind::InfeasibleSpec, "sizes do not sum to n");
  for (auto s : sizes)
    if (s < 2) throw Error(ErrorKind::SingletonCluster, "offline clusters need at least two points");

  std::optional<double> best;
  std::vector<Cluster> best_groups;
  detail::PartitionEnumerator(seq.size(), sizes).run([&](const std::vector<Cluster>& groups) {
    double cost = 0.0;
    for (const auto& g : groups) cost += detail::scheduled_cluster_cost(g, seq, space, params.lambda);
    if (!best || cost < *best) {
      best = cost;
      best_groups = groups;
    }
  });

  // Bind groups to slots: stable by size, larger slots first.
  std::stable_sort(best_groups.begin(), best_groups.end(),
                   [](const Cluster& a, const Cluster& b) { return a.size() > b.size(); });

  OracleResult out;
  out.partition = best_groups;
  out.w_opt = optimal_delay_profile(out.partition, seq);
  out.opt_cost = total_cost(out.partition, seq, space, out.w_opt, params);
  out.c = minimum_costs(seq, space, out.w_opt, params);
  double sum_c = 0.0;
  for (double v : out.c) sum_c += v;
  out.lemma5_lower = static_cast<double>(spec.smallest() - 1) / 2.0 * sum_c;
  return out;
}

// Test oracle for the offline schedule: for every cluster, tries each
// founding time from the second arrival to the last one (members present by
// then are grouped, later ones join on arrival) and keeps the cheapest.
inline double brute_force_schedule_opt(const ArrivalSequence& seq, const MetricSpace& space,
                                       const std::vector<Cluster>& partition, const CostParams& params = {}) {
  if (seq.size() > 6) throw Error(ErrorKind::TooLarge, "schedule brute force is limited to n <= 6");
  double total = 0.0;
  for (const auto& cluster : partition) {
    if (cluster.size() < 2) throw Error(ErrorKind::SingletonCluster, "offline clusters need at least two points");
    std::vector<Time> times;
    for (PointId id : cluster) times.push_back(seq.time_of(id));
    std::sort(times.begin(), times.end());
    std::optional<double> best;
    for (Time founding = times[1]; founding <= times.back(); ++founding) {
      DelayProfile w(seq.size());
      for (PointId id : cluster) w.set(id, std::max<Time>(0, founding - seq.time_of(id)));
      const double cost = cluster_cost(cluster, seq, space, w, params);
      if (!best || cost < *best) best = cost;
    }
    total += *best;
  }
  return total;
}

}  // namespace ocd
