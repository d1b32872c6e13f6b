#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ocd/arrivals.hpp"
#include "ocd/audit.hpp"
#include "ocd/bounds.hpp"
#include "ocd/clustering.hpp"
#include "ocd/dgreedy.hpp"
#include "ocd/error.hpp"
#include "ocd/metric.hpp"
#include "ocd/oracle.hpp"
#include "ocd/radius.hpp"

namespace ocd {

using Json = nlohmann::ordered_json;

inline constexpr double kDefaultRepairEpsilon = 1e-6;

// Shortest decimal text that round-trips the double.
inline std::string format_real(double v) { return detail::format_double(v); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Instance {
  RawSpace raw;
  ValidationReport validation;
  MetricSpace space;
  ArrivalDistribution dist;
  bool repaired = false;
};

inline Json violations_json(const ValidationReport& report, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (const auto& v : report.violations) {
    Json j;
    j["kind"] = std::string(to_string(v.kind));
    j["x"] = labels[v.x];
    j["y"] = labels[v.y];
    if (v.via) j["via"] = labels[*v.via];
    j["magnitude"] = v.magnitude;
    out.push_back(std::move(j));
  }
  return out;
}

inline RawSpace parse_raw_space(const Json& doc) {
  try {
    return RawSpace(doc.at("locations").get<std::vector<std::string>>(), doc.at("dist").get<Matrix>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("instance: ") + e.what());
  }
}

// Reads { "locations": [...], "dist": [[...]], "p": [...] }. Non-metric input
// is refused unless `repair` is set, in which case it is repaired first.
inline Instance parse_instance(const std::string& text, bool repair = false, double epsilon = kDefaultRepairEpsilon) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("instance: ") + e.what());
  }
  RawSpace raw = parse_raw_space(doc);
  ValidationReport report = validate_space(raw);
  if (!report.is_metric() && !repair)
    throw Error(ErrorKind::NotMetric, violations_json(report, raw.labels()).dump() +
                                          " (pass --repair to repair the space)");
  MetricSpace space = report.is_metric() ? MetricSpace(raw.labels(), raw.dist()) : repair_to_metric(raw, epsilon);
  std::vector<double> p;
  try {
    p = doc.at("p").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("instance: ") + e.what());
  }
  ArrivalDistribution dist = validate_distribution(std::move(p), space);
  const bool repaired = !report.is_metric();
  return Instance{std::move(raw), std::move(report), std::move(space), std::move(dist), repaired};
}

inline Instance load_instance(const std::string& path, bool repair = false, double epsilon = kDefaultRepairEpsilon) {
  return parse_instance(read_file(path), repair, epsilon);
}

inline Json clustering_json(const RunResult& result) {
  Json out;
  out["slots"] = result.final.slots();
  Json assign = Json::object(), waits = Json::object();
  for (PointId id = 1; id <= result.final.n_points(); ++id) {
    if (const auto s = result.final.assign_time(id)) assign[std::to_string(id)] = *s;
    if (result.w.has(id)) waits[std::to_string(id)] = result.w.at(id);
  }
  out["assign_time"] = std::move(assign);
  out["w"] = std::move(waits);
  out["tc"] = result.tc;
  return out;
}

inline Json audit_json(const AuditReport& report) {
  Json out = Json::object();
  Json informational = Json::array();
  for (const auto& c : report.checks) {
    out[c.name] = c.passed;
    if (!c.gating) informational.push_back(c.name);
  }
  out["informational"] = std::move(informational);
  return out;
}

inline Json oracle_json(const OracleResult& r) {
  Json out;
  out["opt_cost"] = r.opt_cost;
  out["partition"] = r.partition;
  std::vector<Time> w;
  for (PointId id = 1; id <= r.c.size(); ++id) w.push_back(r.w_opt.at(id));
  out["w_opt"] = w;
  out["c"] = r.c;
  out["lemma5_lower"] = r.lemma5_lower;
  return out;
}

inline Json bounds_json(const BoundsReport& b, const ClusterSizeSpec& spec) {
  Json out;
  out["n"] = b.n;
  out["sizes"] = spec.upper_sizes();
  out["lambda"] = b.lambda;
  out["thm1_upper"] = b.thm1_upper;
  out["thm2_lower"] = b.thm2_lower;
  out["roe_bound"] = b.roe_bound;
  return out;
}

inline Json radius_json(const RadiusTable& radii, const MetricSpace& space) {
  Json out = Json::object();
  for (LocationIndex x = 0; x < space.size(); ++x) out[space.labels()[x]] = {{"r", radii.r[x]}, {"q", radii.q[x]}};
  return out;
}

// TSV: time, kind, points (comma separated), slot (1-based or '-'),
// delta_cost, running_tc.
inline std::string format_trace(const RunResult& result) {
  std::string out = "time\tkind\tpoints\tslot\tdelta_cost\trunning_tc\n";
  for (const auto& e : result.events) {
    out += std::to_string(e.time);
    out += '\t';
    out += to_string(e.kind);
    out += '\t';
    for (std::size_t i = 0; i < e.points.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(e.points[i]);
    }
    out += '\t';
    out += e.slot ? std::to_string(*e.slot + 1) : "-";
    out += '\t';
    out += format_real(e.delta_cost);
    out += '\t';
    out += format_real(e.running_tc);
    out += '\n';
  }
  return out;
}

}  // namespace ocd
