#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ocd/error.hpp"

namespace ocd {

using LocationIndex = std::size_t;
using Matrix = std::vector<std::vector<double>>;

inline constexpr double kTriangleTolerance = 1e-9;

namespace detail {

inline void check_labels(const std::vector<std::string>& labels, const Matrix& dist) {
  if (labels.empty()) throw Error(ErrorKind::InvalidArgument, "space needs at least one location");
  if (dist.size() != labels.size())
    throw Error(ErrorKind::InvalidArgument, "distance matrix row count differs from location count");
  for (const auto& row : dist)
    if (row.size() != labels.size()) throw Error(ErrorKind::InvalidArgument, "distance matrix is not square");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw Error(ErrorKind::InvalidArgument, "duplicate location label '" + l + "'");
}

}  // namespace detail

// Arbitrary square dissimilarity matrix over labelled locations. Entries may be
// negative or asymmetric; validate_space / repair_to_metric deal with that.
class RawSpace {
 public:
  RawSpace(std::vector<std::string> labels, Matrix dist) : labels_(std::move(labels)), dist_(std::move(dist)) {
    detail::check_labels(labels_, dist_);
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix& dist() const { return dist_; }
  double operator()(LocationIndex x, LocationIndex y) const { return dist_[x][y]; }

 private:
  std::vector<std::string> labels_;
  Matrix dist_;
};

// A validated finite metric space. Construction throws NotMetric unless every
// axiom holds (triangle inequality up to kTriangleTolerance).
class MetricSpace {
 public:
  MetricSpace(std::vector<std::string> labels, Matrix dist);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix& dist() const { return dist_; }
  double operator()(LocationIndex x, LocationIndex y) const { return dist_[x][y]; }
  double d_max() const { return d_max_; }

  std::optional<LocationIndex> find(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  LocationIndex index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw Error(ErrorKind::UnknownLocation, "no location labelled '" + std::string(label) + "'");
  }

  void check_index(LocationIndex x) const {
    if (x >= size()) throw Error(ErrorKind::UnknownLocation, "location index " + std::to_string(x) + " out of range");
  }

  // The same labels with every distance multiplied by `factor` (> 0).
  MetricSpace scaled(double factor) const {
    Matrix d = dist_;
    for (auto& row : d)
      for (auto& v : row) v *= factor;
    return MetricSpace(labels_, std::move(d));
  }

  bool operator==(const MetricSpace&) const = default;

 private:
  std::vector<std::string> labels_;
  Matrix dist_;
  double d_max_ = 0.0;
};

enum class ViolationKind { NonFinite, Negative, SelfDistance, Asymmetry, Triangle };

constexpr std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NonFinite: return "non_finite";
    case ViolationKind::Negative: return "negative";
    case ViolationKind::SelfDistance: return "self_distance";
    case ViolationKind::Asymmetry: return "asymmetry";
    case ViolationKind::Triangle: return "triangle";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  // (x, y) for pairwise kinds; for Triangle, d(x, z) exceeds d(x, via) + d(via, z).
  LocationIndex x = 0;
  LocationIndex y = 0;
  std::optional<LocationIndex> via;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool is_metric() const { return violations.empty(); }
};

inline ValidationReport validate_matrix(const Matrix& d) {
  ValidationReport report;
  const std::size_t n = d.size();
  bool finite = true;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double v = d[x][y];
      if (!std::isfinite(v)) {
        report.violations.push_back({ViolationKind::NonFinite, x, y, std::nullopt, v});
        finite = false;
        continue;
      }
      if (x == y) {
        if (v != 0.0) report.violations.push_back({ViolationKind::SelfDistance, x, x, std::nullopt, std::abs(v)});
      } else if (v < 0.0) {
        report.violations.push_back({ViolationKind::Negative, x, y, std::nullopt, -v});
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (std::isfinite(d[x][y]) && std::isfinite(d[y][x]) && d[x][y] != d[y][x])
        report.violations.push_back({ViolationKind::Asymmetry, x, y, std::nullopt, std::abs(d[x][y] - d[y][x])});
  if (!finite) return report;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z) {
      if (x == z) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        const double excess = d[x][z] - (d[x][y] + d[y][z]);
        if (excess > kTriangleTolerance) report.violations.push_back({ViolationKind::Triangle, x, z, y, excess});
      }
    }
  return report;
}

inline ValidationReport validate_space(const RawSpace& raw) { return validate_matrix(raw.dist()); }

inline MetricSpace::MetricSpace(std::vector<std::string> labels, Matrix dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  detail::check_labels(labels_, dist_);
  const auto report = validate_matrix(dist_);
  if (!report.is_metric()) {
    const auto& v = report.violations.front();
    throw Error(ErrorKind::NotMetric, std::string(to_string(v.kind)) + " violation between " + labels_[v.x] +
                                          " and " + labels_[v.y]);
  }
  for (const auto& row : dist_)
    for (double v : row) d_max_ = std::max(d_max_, v);
}

inline double diameter(const MetricSpace& space) { return space.d_max(); }

// In-place all-pairs shortest paths on the complete directed graph.
inline void metric_closure(Matrix& d) {
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
}

// Turns any finite dissimilarity into a metric: shift negative entries up,
// take the shortest-path closure, then symmetrize. Each step runs only when
// its axiom is violated, so metric input comes back unchanged.
inline MetricSpace repair_to_metric(const RawSpace& raw, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  Matrix d = raw.dist();
  const std::size_t n = d.size();
  for (const auto& row : d)
    for (double v : row)
      if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteDistance, "distance matrix has a non-finite entry");

  for (std::size_t x = 0; x < n; ++x) d[x][x] = 0.0;

  double min_off = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y) min_off = std::min(min_off, d[x][y]);
  if (min_off < 0.0) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != y) d[x][y] = d[x][y] - min_off + epsilon;
  }

  metric_closure(d);

  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (d[x][y] != d[y][x]) d[x][y] = d[y][x] = (d[x][y] + d[y][x]) / 2.0;

  return MetricSpace(raw.labels(), std::move(d));
}

}  // namespace ocd
