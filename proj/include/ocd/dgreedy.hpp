#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocd/arrivals.hpp"
#include "ocd/clustering.hpp"
#include "ocd/error.hpp"
#include "ocd/metric.hpp"

namespace ocd {

// How a pending point is tested against the members of a non-empty slot.
//   PerMember: d(i, j) <= lambda * ((t - t_i) + w_j) for every member j.
//   MaxMember: d(i, j) <= lambda * ((t - t_i) + max_j' w_j') for every member j.
enum class MembershipRule { PerMember, MaxMember };

constexpr std::string_view to_string(MembershipRule rule) {
  return rule == MembershipRule::PerMember ? "per_member" : "max_member";
}

inline MembershipRule parse_membership_rule(std::string_view s) {
  if (s == "per_member") return MembershipRule::PerMember;
  if (s == "max_member") return MembershipRule::MaxMember;
  throw Error(ErrorKind::InvalidArgument, "membership rule must be per_member or max_member");
}

struct DGreedyOptions {
  CostParams cost;
  MembershipRule rule = MembershipRule::PerMember;
};

enum class EventKind { Arrival, JoinExisting, FormPair };

constexpr std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Arrival: return "arrival";
    case EventKind::JoinExisting: return "join_existing";
    case EventKind::FormPair: return "form_pair";
  }
  return "unknown";
}

struct Event {
  Time time;
  EventKind kind;
  std::vector<PointId> points;
  std::optional<SlotIndex> slot;  // absent for arrivals
  double delta_cost = 0.0;
  double running_tc = 0.0;
};

struct RunResult {
  ClusteringState final;
  DelayProfile w;
  double tc = 0.0;
  std::vector<Event> events;
};

struct PairChoice {
  PointId partner;
  SlotIndex slot;
  double delta;
};

// Step-by-step DGreedy simulator. Time advances one unit per step(); the
// arrivals of that step are registered as pending before pending points
// are treated, in arrival order, in a single pass.
class DGreedy {
 public:
  DGreedy(const ArrivalSequence& seq, const MetricSpace& space, std::vector<std::size_t> caps,
          DGreedyOptions options = {})
      : seq_(&seq), space_(&space), state_(std::move(caps), seq.size()), w_(seq.size()), options_(options) {
    options_.cost.validate();
    for (const auto& a : seq.points()) space.check_index(a.location);
  }

  const ClusteringState& state() const { return state_; }
  ClusteringState& mutable_state() { return state_; }
  const DelayProfile& delays() const { return w_; }
  const std::vector<PointId>& pending() const { return pending_; }
  const std::vector<Event>& events() const { return events_; }
  double running_tc() const { return tc_; }
  Time now() const { return state_.now(); }
  bool done() const { return next_arrival_ == seq_->size() && pending_.empty(); }

  double wait_budget(PointId i, Time t) const { return static_cast<double>(t - seq_->time_of(i)); }

  // Slots that pending point i may join at time t (S_i). Empty slots are
  // excluded, except unit-capacity slots of degenerate fixtures.
  std::vector<SlotIndex> eligible_existing(PointId i, Time t) const {
    std::vector<SlotIndex> out;
    const Time waited = t - seq_->time_of(i);
    const LocationIndex li = seq_->location_of(i);
    for (SlotIndex m = 0; m < state_.k(); ++m) {
      const auto& members = state_.slot(m);
      if (members.size() >= state_.cap(m)) continue;
      if (members.empty()) {
        if (state_.cap(m) == 1) out.push_back(m);
        continue;
      }
      Time max_w = 0;
      for (PointId j : members) max_w = std::max(max_w, w_.at(j));
      bool ok = true;
      for (PointId j : members) {
        const Time other = options_.rule == MembershipRule::PerMember ? w_.at(j) : max_w;
        if (!(space_->operator()(li, seq_->location_of(j)) <= options_.cost.lambda * static_cast<double>(waited + other))) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(m);
    }
    return out;
  }

  // Candidate (partner, empty slot) pairs for pending point i at time t (D_i).
  std::vector<std::pair<PointId, SlotIndex>> eligible_pairs(PointId i, Time t) const {
    std::vector<std::pair<PointId, SlotIndex>> out;
    if (pending_.size() < 2) return out;
    const Time ti = seq_->time_of(i);
    const LocationIndex li = seq_->location_of(i);
    for (PointId j : pending_) {
      if (j == i) continue;
      const Time waits = (t - ti) + (t - seq_->time_of(j));
      if (!(space_->operator()(li, seq_->location_of(j)) <= options_.cost.lambda * static_cast<double>(waits))) continue;
      for (SlotIndex m = 0; m < state_.k(); ++m)
        if (state_.slot(m).empty() && state_.cap(m) >= 2) out.emplace_back(j, m);
    }
    return out;
  }

  double join_delta(PointId i, SlotIndex m, Time t) const {
    return detail::added_pair_cost(state_.slot(m), {i}, *seq_, *space_, options_.cost.lambda,
                                   [&](PointId id) { return wait_at(id, t); });
  }

  double pair_delta(PointId i, PointId j, Time t) const {
    return detail::added_pair_cost({}, {i, j}, *seq_, *space_, options_.cost.lambda,
                                   [&](PointId id) { return wait_at(id, t); });
  }

  // Best existing slot (m1): least insertion cost, then lowest index.
  std::optional<std::pair<SlotIndex, double>> best_existing(PointId i, Time t) const {
    std::optional<std::pair<SlotIndex, double>> best;
    for (SlotIndex m : eligible_existing(i, t)) {
      const double delta = join_delta(i, m, t);
      if (!best || delta < best->second) best = {m, delta};
    }
    return best;
  }

  // Best pending pair (j, m2): least insertion cost, then largest partner
  // wait, then lowest partner id, then lowest slot index.
  std::optional<PairChoice> best_pair(PointId i, Time t) const {
    std::optional<PairChoice> best;
    for (const auto& [j, m] : eligible_pairs(i, t)) {
      const double delta = pair_delta(i, j, t);
      const PairChoice cand{j, m, delta};
      if (!best) {
        best = cand;
        continue;
      }
      if (delta < best->delta) {
        best = cand;
      } else if (delta == best->delta) {
        const Time wj = t - seq_->time_of(j);
        const Time wb = t - seq_->time_of(best->partner);
        if (wj > wb || (wj == wb && (j < best->partner || (j == best->partner && m < best->slot)))) best = cand;
      }
    }
    return best;
  }

  // Registers arrivals at time t, then treats pending points. Returns the
  // events produced during this step.
  std::vector<Event> step(Time t) {
    const std::size_t first_event = events_.size();
    state_.set_now(t);
    while (next_arrival_ < seq_->size() && seq_->points()[next_arrival_].time == t) {
      const PointId id = seq_->points()[next_arrival_].id;
      pending_.push_back(id);
      events_.push_back({t, EventKind::Arrival, {id}, std::nullopt, 0.0, tc_});
      ++next_arrival_;
    }
    process_pending(t);
    return {events_.begin() + static_cast<std::ptrdiff_t>(first_event), events_.end()};
  }

  // Steps from now()+1 until `stop` returns true or every point is placed.
  template <typename StopFn>
  void advance(StopFn&& stop) {
    const Time limit = step_limit();
    while (!done() && !stop()) {
      const Time t = now() + 1;
      if (t > limit)
        throw Error(ErrorKind::NonTermination, "points still pending at time " + std::to_string(t));
      step(t);
    }
  }

  void advance_to_completion() {
    advance([] { return false; });
  }

  RunResult result() const {
    if (!done()) throw Error(ErrorKind::UnassignedPoints, "run has pending points");
    return RunResult{state_, w_, tc_, events_};
  }

 private:
  Time wait_at(PointId id, Time t) const { return w_.has(id) ? w_.at(id) : t - seq_->time_of(id); }

  Time step_limit() const {
    const double per_point = std::ceil(space_->d_max() / options_.cost.lambda) + 2.0;
    return seq_->horizon() + 1024 + static_cast<Time>(per_point) * static_cast<Time>(seq_->size() + 2) * 4;
  }

  void place(PointId id, SlotIndex m, Time t) {
    state_.assign(id, m, t);
    w_.set(id, t - seq_->time_of(id));
    pending_.erase(std::find(pending_.begin(), pending_.end(), id));
  }

  void process_pending(Time t) {
    const std::vector<PointId> snapshot = pending_;
    for (PointId i : snapshot) {
      if (state_.is_assigned(i)) continue;
      const auto existing = best_existing(i, t);
      const auto pair = best_pair(i, t);
      if (pair && (!existing || pair->delta <= existing->second)) {
        place(i, pair->slot, t);
        place(pair->partner, pair->slot, t);
        tc_ += pair->delta;
        events_.push_back({t, EventKind::FormPair, {i, pair->partner}, pair->slot, pair->delta, tc_});
      } else if (existing && !pair) {
        place(i, existing->first, t);
        tc_ += existing->second;
        events_.push_back({t, EventKind::JoinExisting, {i}, existing->first, existing->second, tc_});
      }
    }
  }

  const ArrivalSequence* seq_;
  const MetricSpace* space_;
  ClusteringState state_;
  DelayProfile w_;
  DGreedyOptions options_;
  std::vector<PointId> pending_;
  std::vector<Event> events_;
  std::size_t next_arrival_ = 0;
  double tc_ = 0.0;
};

// Full DGreedy run with fixed cluster sizes.
inline RunResult run(const ArrivalSequence& seq, const MetricSpace& space, const ClusterSizeSpec& spec,
                     const DGreedyOptions& options = {}) {
  if (!spec.is_fixed()) throw Error(ErrorKind::InfeasibleSpec, "run needs fixed sizes; use run_interval");
  if (seq.empty() || spec.total_lower() != seq.size())
    throw Error(ErrorKind::InfeasibleSpec, "sizes sum to " + std::to_string(spec.total_lower()) + " but n = " +
                                               std::to_string(seq.size()));
  DGreedy sim(seq, space, spec.lower_sizes(), options);
  sim.advance_to_completion();
  return sim.result();
}

// Two-phase run for size intervals: lower bounds act as capacities until
// every slot has reached its lower bound, then upper bounds take over and
// the run resumes from that clustering.
inline RunResult run_interval(const ArrivalSequence& seq, const MetricSpace& space, const ClusterSizeSpec& spec,
                              const DGreedyOptions& options = {}) {
  if (seq.empty() || !spec.feasible_for(seq.size()))
    throw Error(ErrorKind::InfeasibleSpec, "n = " + std::to_string(seq.size()) + " outside [" +
                                               std::to_string(spec.total_lower()) + ", " +
                                               std::to_string(spec.total_upper()) + "]");
  DGreedy sim(seq, space, spec.lower_sizes(), options);
  const auto lower_full = [&] {
    for (SlotIndex m = 0; m < spec.k(); ++m)
      if (sim.state().slot(m).size() < spec.bounds()[m].lower) return false;
    return true;
  };
  sim.advance(lower_full);
  if (!sim.done()) {
    sim.mutable_state().set_caps(spec.upper_sizes());
    sim.advance_to_completion();
  }
  return sim.result();
}

inline RunResult run_any(const ArrivalSequence& seq, const MetricSpace& space, const ClusterSizeSpec& spec,
                         const DGreedyOptions& options = {}) {
  return spec.is_fixed() ? run(seq, space, spec, options) : run_interval(seq, space, spec, options);
}

}  // namespace ocd
