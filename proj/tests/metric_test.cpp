#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ocd/metric.hpp"
#include "ocd/rng.hpp"

namespace {

using ocd::Matrix;
using ocd::MetricSpace;
using ocd::RawSpace;
using ocd::ViolationKind;

bool has_violation(const ocd::ValidationReport& r, ViolationKind kind, std::size_t x, std::size_t y) {
  for (const auto& v : r.violations)
    if (v.kind == kind && v.x == x && v.y == y) return true;
  return false;
}

TEST(ValidateSpace, SingleLocationIsMetric) {
  EXPECT_TRUE(ocd::validate_space(RawSpace({"A"}, {{0}})).is_metric());
}

TEST(ValidateSpace, ReportsAsymmetry) {
  const auto r = ocd::validate_space(RawSpace({"x", "y"}, {{0, 4}, {2, 0}}));
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::Asymmetry);
  EXPECT_EQ(r.violations[0].x, 0u);
  EXPECT_EQ(r.violations[0].y, 1u);
  EXPECT_DOUBLE_EQ(r.violations[0].magnitude, 2.0);
}

TEST(ValidateSpace, ReportsTriangleWithWitness) {
  const auto r = ocd::validate_space(RawSpace({"A", "B", "C"}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));
  bool found = false;
  for (const auto& v : r.violations)
    if (v.kind == ViolationKind::Triangle && v.x == 0 && v.y == 2) {
      ASSERT_TRUE(v.via.has_value());
      EXPECT_EQ(*v.via, 1u);
      EXPECT_DOUBLE_EQ(v.magnitude, 3.0);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(ValidateSpace, ReportsNegativeSelfAndNonFinite) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto r = ocd::validate_space(RawSpace({"a", "b", "c"}, {{1, -1, 2}, {-1, 0, inf}, {2, inf, 0}}));
  EXPECT_TRUE(has_violation(r, ViolationKind::SelfDistance, 0, 0));
  EXPECT_TRUE(has_violation(r, ViolationKind::Negative, 0, 1));
  EXPECT_TRUE(has_violation(r, ViolationKind::NonFinite, 1, 2));
}

TEST(RawSpace, RejectsMalformedInput) {
  EXPECT_THROW(RawSpace({}, {}), ocd::Error);
  EXPECT_THROW(RawSpace({"a", "b"}, {{0, 1}}), ocd::Error);
  EXPECT_THROW(RawSpace({"a", "a"}, {{0, 1}, {1, 0}}), ocd::Error);
}

TEST(MetricSpace, RefusesNonMetric) {
  try {
    MetricSpace({"x", "y"}, {{0, 4}, {2, 0}});
    FAIL();
  } catch (const ocd::Error& e) {
    EXPECT_EQ(e.kind(), ocd::ErrorKind::NotMetric);
  }
}

TEST(RepairToMetric, SymmetrizesAsymmetricPair) {
  const auto m = ocd::repair_to_metric(RawSpace({"x", "y"}, {{0, 4}, {2, 0}}), 1e-6);
  EXPECT_DOUBLE_EQ(m(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(m(1, 0), 3.0);
}

TEST(RepairToMetric, ClosureShortensTriangleViolation) {
  const auto m = ocd::repair_to_metric(RawSpace({"A", "B", "C"}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), 1e-6);
  EXPECT_DOUBLE_EQ(m(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(m(2, 0), 2.0);
}

TEST(RepairToMetric, MetricInputIsFixedPoint) {
  const Matrix d{{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
  EXPECT_EQ(ocd::repair_to_metric(RawSpace({"a", "b", "c"}, d), 1e-6).dist(), d);
}

TEST(RepairToMetric, ShiftsNegativeEntries) {
  const auto m = ocd::repair_to_metric(RawSpace({"a", "b"}, {{0, -2}, {-2, 0}}), 0.5);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.5);
}

TEST(RepairToMetric, Errors) {
  const RawSpace ok({"a", "b"}, {{0, 1}, {1, 0}});
  EXPECT_THROW(ocd::repair_to_metric(ok, 0.0), ocd::Error);
  const RawSpace bad({"a", "b"}, {{0, std::nan("")}, {1, 0}});
  try {
    ocd::repair_to_metric(bad, 1e-6);
    FAIL();
  } catch (const ocd::Error& e) {
    EXPECT_EQ(e.kind(), ocd::ErrorKind::NonFiniteDistance);
  }
}

Matrix random_dissimilarity(ocd::CounterRng& rng, std::size_t n) {
  Matrix d(n, std::vector<double>(n));
  for (auto& row : d)
    for (auto& v : row) v = std::floor(rng.next_unit() * 40.0) - 5.0;
  return d;
}

TEST(RepairToMetric, PropertyAlwaysYieldsMetric) {
  ocd::CounterRng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.next_below(6);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
    const auto m = ocd::repair_to_metric(RawSpace(labels, random_dissimilarity(rng, n)), 1e-6);
    EXPECT_TRUE(ocd::validate_matrix(m.dist()).is_metric());
  }
}

TEST(MetricClosure, PropertyIdempotentAndNonIncreasing) {
  ocd::CounterRng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.next_below(6);
    Matrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) d[i][j] = 1.0 + std::floor(rng.next_unit() * 20.0);
    Matrix once = d;
    ocd::metric_closure(once);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_LE(once[i][j], d[i][j]);
        for (std::size_t k = 0; k < n; ++k) EXPECT_LE(once[i][j], once[i][k] + once[k][j]);
      }
    Matrix twice = once;
    ocd::metric_closure(twice);
    EXPECT_EQ(twice, once);
  }
}

TEST(Diameter, Examples) {
  EXPECT_DOUBLE_EQ(ocd::diameter(MetricSpace({"A", "B", "C"}, {{0, 2, 2}, {2, 0, 2}, {2, 2, 0}})), 2.0);
  EXPECT_DOUBLE_EQ(ocd::diameter(MetricSpace({"A"}, {{0}})), 0.0);
  EXPECT_DOUBLE_EQ(ocd::diameter(MetricSpace({"a", "b", "c"}, {{0, 1, 7}, {1, 0, 6}, {7, 6, 0}})), 7.0);
}

TEST(MetricSpace, LookupAndScaling) {
  const MetricSpace m({"a", "b"}, {{0, 4}, {4, 0}});
  EXPECT_EQ(m.index_of("b"), 1u);
  EXPECT_FALSE(m.find("z").has_value());
  EXPECT_THROW(m.index_of("z"), ocd::Error);
  EXPECT_DOUBLE_EQ(m.scaled(0.5)(0, 1), 2.0);
}

}  // namespace
