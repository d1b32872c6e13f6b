#include <gtest/gtest.h>

#include "ocd/clustering.hpp"
#include "test_support.hpp"

namespace {

using ocd::ClusteringState;
using ocd::ClusterSizeSpec;
using ocd::DelayProfile;

DelayProfile delays(std::initializer_list<ocd::Time> w) {
  DelayProfile out(w.size());
  ocd::PointId id = 1;
  for (auto v : w) out.set(id++, v);
  return out;
}

// Ordered-pair sum written out directly.
double reference_tc(const std::vector<ocd::Cluster>& clusters, const ocd::ArrivalSequence& seq,
                    const ocd::MetricSpace& space, const DelayProfile& w, double lambda) {
  double tc = 0.0;
  for (const auto& c : clusters)
    for (auto i : c)
      for (auto j : c)
        if (i != j)
          tc += space(seq.location_of(i), seq.location_of(j)) + lambda * static_cast<double>(w.at(i) + w.at(j));
  return tc;
}

TEST(TotalCost, Examples) {
  const auto space = ocd::testing::three_point_space();
  const auto seq = ocd::testing::three_point_sequence();
  EXPECT_DOUBLE_EQ(ocd::total_cost({{1, 2, 3}}, seq, space, delays({2, 0, 2})), 28.0);

  const ocd::MetricSpace five({"a", "b"}, {{0, 5}, {5, 0}});
  const auto two = ocd::ArrivalSequence::from_events({{1, 0}, {2, 1}});
  EXPECT_DOUBLE_EQ(ocd::total_cost({{1, 2}}, two, five, delays({0, 0})), 10.0);
  EXPECT_DOUBLE_EQ(ocd::total_cost({}, two, five, delays({0, 0})), 0.0);
}

TEST(TotalCost, MissingDelayAndBadLambda) {
  const auto space = ocd::testing::three_point_space();
  const auto seq = ocd::testing::three_point_sequence();
  DelayProfile partial(3);
  partial.set(1, 0);
  EXPECT_THROW(ocd::total_cost({{1, 2}}, seq, space, partial), ocd::Error);
  EXPECT_THROW(ocd::total_cost({{1, 2}}, seq, space, delays({0, 0, 0}), {0.0}), ocd::Error);
}

TEST(InsertionDelta, Examples) {
  const auto space = ocd::testing::three_point_space();
  const auto seq = ocd::testing::three_point_sequence();
  ClusteringState state({3}, 3);
  state.assign(1, 0, 3);
  state.assign(2, 0, 3);
  EXPECT_DOUBLE_EQ(ocd::insertion_delta(state, delays({2, 0, 0}), {3}, 0, seq, space), 12.0);
  EXPECT_DOUBLE_EQ(ocd::insertion_delta(state, delays({2, 0, 0}), {}, 0, seq, space), 0.0);

  const ocd::MetricSpace one({"A"}, {{0}});
  const auto same = ocd::ArrivalSequence::from_events({{1, 0}, {4, 0}});
  ClusteringState empty({2}, 2);
  EXPECT_DOUBLE_EQ(ocd::insertion_delta(empty, delays({3, 0}), {1, 2}, 0, same, one), 6.0);
  EXPECT_THROW(ocd::insertion_delta(state, delays({2, 0, 0}), {3, 3}, 0, seq, space), ocd::Error);
}

TEST(ValidateFinal, Examples) {
  ClusteringState a({2, 2}, 4);
  a.assign(1, 0, 1);
  a.assign(2, 0, 1);
  a.assign(3, 1, 1);
  a.assign(4, 1, 1);
  EXPECT_TRUE(ocd::validate_final(a, ClusterSizeSpec::fixed({2, 2})));

  ClusteringState b({3, 3}, 5);
  b.assign(1, 0, 1);
  b.assign(2, 0, 1);
  for (ocd::PointId i = 3; i <= 5; ++i) b.assign(i, 1, 1);
  EXPECT_FALSE(ocd::validate_final(b, ClusterSizeSpec::fixed({3, 2})));

  ClusteringState c({3, 2}, 5);
  for (ocd::PointId i = 1; i <= 3; ++i) c.assign(i, 0, 1);
  c.assign(4, 1, 1);
  c.assign(5, 1, 1);
  EXPECT_TRUE(ocd::validate_final(c, ClusterSizeSpec::interval({{2, 3}, {2, 2}})));

  ClusteringState d({2, 2}, 4);
  d.assign(1, 0, 1);
  EXPECT_THROW(ocd::validate_final(d, ClusterSizeSpec::fixed({2, 2})), ocd::Error);
}

TEST(ClusteringState, IrrevocableAndCapped) {
  ClusteringState s({2}, 3);
  s.assign(1, 0, 1);
  EXPECT_THROW(s.assign(1, 0, 2), ocd::Error);
  s.assign(2, 0, 2);
  EXPECT_THROW(s.assign(3, 0, 3), ocd::Error);
  EXPECT_EQ(s.assign_time(2), 2);
  EXPECT_FALSE(s.assign_time(3).has_value());
  EXPECT_THROW(s.set_caps({1}), ocd::Error);
  s.set_caps({3});
  s.assign(3, 0, 3);
  EXPECT_EQ(s.assigned_count(), 3u);
}

TEST(ClusterSizeSpec, Construction) {
  EXPECT_THROW(ClusterSizeSpec::fixed({2, 3}), ocd::Error);
  EXPECT_THROW(ClusterSizeSpec::fixed({3}), ocd::Error);
  EXPECT_THROW(ClusterSizeSpec::fixed({2, 1}), ocd::Error);
  EXPECT_NO_THROW(ClusterSizeSpec::fixed({3}, true));
  EXPECT_THROW(ClusterSizeSpec::interval({{1, 3}, {2, 2}}), ocd::Error);
  EXPECT_THROW(ClusterSizeSpec::interval({{3, 2}, {2, 2}}), ocd::Error);
  const auto s = ClusterSizeSpec::fixed({4, 3, 2});
  EXPECT_EQ(s.largest(), 4u);
  EXPECT_EQ(s.smallest(), 2u);
  EXPECT_TRUE(s.feasible_for(9));
  EXPECT_FALSE(s.feasible_for(8));
  const auto iv = ClusterSizeSpec::interval({{2, 4}, {3, 3}});
  EXPECT_EQ(iv.largest(), 4u);
  EXPECT_EQ(iv.smallest(), 2u);
  EXPECT_TRUE(iv.feasible_for(6));
  EXPECT_FALSE(iv.feasible_for(8));
}

// Random clusterings: agrees with the direct ordered-pair sum, is invariant
// under relabelling slots and reordering members, grows with every wait,
// and equals the sum of incremental insertion deltas.
TEST(TotalCost, PropertyInvariancesAndIncrementalAgreement) {
  ocd::CounterRng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = ocd::testing::random_instance(rng);
    const std::size_t n = 2 + rng.next_below(8);
    const auto seq = ocd::sample_sequence(inst.dist, n, rng.next_u64());
    const double lambda = 0.5 * static_cast<double>(1 + rng.next_below(4));
    DelayProfile w(n);
    for (ocd::PointId i = 1; i <= n; ++i) w.set(i, static_cast<ocd::Time>(rng.next_below(6)));
    const std::size_t k = 1 + rng.next_below(3);
    std::vector<ocd::Cluster> clusters(k);
    for (ocd::PointId i = 1; i <= n; ++i) clusters[rng.next_below(k)].push_back(i);

    const double tc = ocd::total_cost(clusters, seq, inst.space, w, {lambda});
    EXPECT_NEAR(tc, reference_tc(clusters, seq, inst.space, w, lambda), 1e-9);

    auto shuffled = clusters;
    std::reverse(shuffled.begin(), shuffled.end());
    for (auto& c : shuffled) std::reverse(c.begin(), c.end());
    EXPECT_NEAR(ocd::total_cost(shuffled, seq, inst.space, w, {lambda}), tc, 1e-9);

    DelayProfile more = w;
    const ocd::PointId bump = 1 + rng.next_below(n);
    more.set(bump, w.at(bump) + 1);
    EXPECT_GE(ocd::total_cost(clusters, seq, inst.space, more, {lambda}), tc);

    std::vector<std::size_t> caps;
    for (const auto& c : clusters) caps.push_back(c.size());
    ClusteringState state(caps, n);
    double running = 0.0;
    for (ocd::SlotIndex m = 0; m < k; ++m)
      for (ocd::PointId id : clusters[m]) {
        running += ocd::insertion_delta(state, w, {id}, m, seq, inst.space, {lambda});
        state.assign(id, m, 0);
      }
    EXPECT_NEAR(running, tc, 1e-9);
  }
}

}  // namespace
