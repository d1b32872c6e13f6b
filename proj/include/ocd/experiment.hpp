#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ocd/arrivals.hpp"
#include "ocd/audit.hpp"
#include "ocd/bounds.hpp"
#include "ocd/clustering.hpp"
#include "ocd/dgreedy.hpp"
#include "ocd/io.hpp"
#include "ocd/oracle.hpp"
#include "ocd/rng.hpp"
#include "ocd/stats.hpp"

namespace ocd {

inline constexpr std::string_view kCsvSchema = "# ocd-experiment-csv v1";

enum class OracleMode { Exact, BoundOnly };

struct ExperimentConfig {
  std::string instance_path;
  bool repair = false;
  // Exactly one of: fixed sizes (n must equal their sum), a replicated
  // equal cluster size (k = n / size), or per-slot intervals.
  std::vector<std::size_t> sizes;
  bool degenerate = false;  // admit k = 1 or unit sizes (fixtures only)
  std::optional<std::size_t> cluster_size;
  std::vector<SizeInterval> intervals;
  std::vector<std::size_t> n_values;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  DGreedyOptions options;
  OracleMode oracle = OracleMode::Exact;
  std::size_t oracle_cap = kDefaultEnumerationCap;
  std::optional<std::string> sequence_path;  // replay this sequence in every trial
  std::optional<std::string> output_path;
  std::size_t threads = 0;  // 0: hardware concurrency

  ClusterSizeSpec spec_for(std::size_t n) const {
    if (!intervals.empty()) return ClusterSizeSpec::interval(intervals);
    if (cluster_size) {
      if (*cluster_size == 0 || n % *cluster_size != 0)
        throw Error(ErrorKind::InfeasibleSpec, "n = " + std::to_string(n) + " is not a multiple of the cluster size");
      return ClusterSizeSpec::uniform(n / *cluster_size, *cluster_size);
    }
    return ClusterSizeSpec::fixed(sizes, degenerate);
  }
};

inline ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir = ".") {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
  };
  ExperimentConfig cfg;
  try {
    cfg.instance_path = resolve(doc.at("instance").get<std::string>());
    cfg.repair = doc.value("repair", false);
    if (doc.contains("sizes")) cfg.sizes = doc["sizes"].get<std::vector<std::size_t>>();
    cfg.degenerate = doc.value("degenerate", false);
    if (doc.contains("cluster_size")) cfg.cluster_size = doc["cluster_size"].get<std::size_t>();
    if (doc.contains("intervals"))
      for (const auto& pair : doc["intervals"])
        cfg.intervals.push_back({pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>()});
    if (doc.contains("n")) {
      if (doc["n"].is_array()) cfg.n_values = doc["n"].get<std::vector<std::size_t>>();
      else cfg.n_values = {doc["n"].get<std::size_t>()};
    }
    cfg.trials = doc.value("trials", std::size_t{1});
    cfg.seed = doc.value("seed", std::uint64_t{1});
    cfg.options.cost.lambda = doc.value("lambda", 1.0);
    cfg.options.rule = parse_membership_rule(doc.value("membership_rule", std::string("per_member")));
    const auto mode = doc.value("oracle", std::string("exact"));
    if (mode == "exact") cfg.oracle = OracleMode::Exact;
    else if (mode == "bound-only") cfg.oracle = OracleMode::BoundOnly;
    else throw Error(ErrorKind::InvalidArgument, "oracle must be 'exact' or 'bound-only'");
    cfg.oracle_cap = doc.value("oracle_cap", kDefaultEnumerationCap);
    if (doc.contains("sequence")) cfg.sequence_path = resolve(doc["sequence"].get<std::string>());
    if (doc.contains("output")) cfg.output_path = resolve(doc["output"].get<std::string>());
    cfg.threads = doc.value("threads", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  const int modes = !cfg.sizes.empty() + cfg.cluster_size.has_value() + !cfg.intervals.empty();
  if (modes != 1) throw Error(ErrorKind::InvalidArgument, "config needs exactly one of sizes, cluster_size, intervals");
  if (cfg.trials == 0) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  if (cfg.n_values.empty() && !cfg.sizes.empty()) {
    std::size_t n = 0;
    for (auto s : cfg.sizes) n += s;
    cfg.n_values = {n};
  }
  if (cfg.n_values.empty() && !cfg.sequence_path)
    throw Error(ErrorKind::InvalidArgument, "config needs n values");
  if (!cfg.intervals.empty() && cfg.oracle == OracleMode::Exact)
    throw Error(ErrorKind::InvalidArgument, "the exact oracle supports fixed sizes only; use bound-only");
  cfg.options.cost.validate();
  return cfg;
}

struct TrialReport {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double alg_cost = 0.0;
  std::optional<double> opt_cost;
  Time sum_w = 0;
  AuditReport audits;
  std::optional<std::string> error;

  bool audits_passed() const { return !error && audits.all_passed(); }
};

struct NAggregate {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t audit_failures = 0;
  std::size_t errors = 0;
  double mean_alg = 0.0;
  std::optional<double> mean_opt;
  std::optional<RatioEstimate> roe;  // exact oracle only
  double thm1_upper = 0.0;
  double thm2_lower = 0.0;
  double roe_bound = 0.0;
  double upper_estimate = 0.0;  // mean_alg / thm2_lower; not a ratio of expectations
};

struct ExperimentReport {
  std::vector<TrialReport> trials;  // ordered by (n, trial index)
  std::vector<NAggregate> per_n;

  bool ok() const {
    for (const auto& t : trials)
      if (!t.audits_passed()) return false;
    return true;
  }
};

// Ratio of sample means over reports that carry an oracle value, with a
// 99% bootstrap interval.
inline RatioEstimate estimate_roe(const std::vector<TrialReport>& reports) {
  std::vector<double> alg, opt;
  for (const auto& r : reports) {
    if (!r.opt_cost || r.error) continue;
    alg.push_back(r.alg_cost);
    opt.push_back(*r.opt_cost);
  }
  if (alg.empty()) throw Error(ErrorKind::NoOracleData, "no trial carries an optimal cost");
  return bootstrap_ratio_of_means(alg, opt);
}

// One trial end to end: run, oracle, audits.
inline TrialReport run_trial(const ArrivalSequence& seq, const Instance& inst, const ClusterSizeSpec& spec,
                             const ExperimentConfig& cfg) {
  TrialReport rep;
  rep.n = seq.size();
  const RunResult result = run_any(seq, inst.space, spec, cfg.options);
  rep.alg_cost = result.tc;
  rep.sum_w = result.w.sum();
  rep.audits = audit_run(result, seq, inst.space, inst.dist, spec, cfg.options);
  if (cfg.oracle == OracleMode::Exact) {
    const OracleResult opt = opt_exact(seq, inst.space, spec, cfg.options.cost, cfg.oracle_cap);
    rep.opt_cost = opt.opt_cost;
    AuditCheck minimality{"opt_minimality"};
    if (!(result.tc >= opt.opt_cost))
      detail::fail(minimality, "alg " + format_real(result.tc) + " < opt " + format_real(opt.opt_cost));
    rep.audits.checks.push_back(minimality);
    AuditCheck lemma5{"lemma5_opt_lower"};
    if (!(opt.opt_cost >= opt.lemma5_lower))
      detail::fail(lemma5, "opt " + format_real(opt.opt_cost) + " < " + format_real(opt.lemma5_lower));
    rep.audits.checks.push_back(lemma5);
  }
  return rep;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const Instance inst = load_instance(cfg.instance_path, cfg.repair);
  std::optional<ArrivalSequence> fixed_seq;
  if (cfg.sequence_path) fixed_seq = parse_sequence(read_file(*cfg.sequence_path), inst.space);
  const std::vector<std::size_t> n_values = fixed_seq ? std::vector<std::size_t>{fixed_seq->size()} : cfg.n_values;

  ExperimentReport report;
  for (const std::size_t n : n_values) {
    const ClusterSizeSpec spec = cfg.spec_for(n);
    if (!spec.feasible_for(n)) throw Error(ErrorKind::InfeasibleSpec, "spec infeasible for n = " + std::to_string(n));

    std::vector<TrialReport> trials(cfg.trials);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < cfg.trials; i = next++) {
        const std::uint64_t seed = trial_stream(cfg.seed, i);
        TrialReport rep;
        try {
          const ArrivalSequence seq = fixed_seq ? *fixed_seq : sample_sequence(inst.dist, n, seed);
          rep = run_trial(seq, inst, spec, cfg);
        } catch (const std::exception& e) {
          rep.n = n;
          rep.error = e.what();
        }
        rep.trial = i;
        rep.seed = seed;
        trials[i] = std::move(rep);
      }
    };
    std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, cfg.trials);
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    NAggregate agg;
    agg.n = n;
    agg.trials = trials.size();
    std::vector<double> alg;
    for (const auto& t : trials) {
      if (t.error) {
        ++agg.errors;
        continue;
      }
      if (!t.audits.all_passed()) ++agg.audit_failures;
      alg.push_back(t.alg_cost);
    }
    agg.mean_alg = mean(alg);
    if (cfg.oracle == OracleMode::Exact && !alg.empty()) {
      agg.roe = estimate_roe(trials);
      std::vector<double> opt;
      for (const auto& t : trials)
        if (t.opt_cost && !t.error) opt.push_back(*t.opt_cost);
      agg.mean_opt = mean(opt);
    }
    const BoundsReport bounds = bounds_report(inst.dist, inst.space, n, spec, cfg.options.cost);
    agg.thm1_upper = bounds.thm1_upper;
    agg.thm2_lower = bounds.thm2_lower;
    agg.roe_bound = bounds.roe_bound;
    agg.upper_estimate = bounds.thm2_lower > 0.0 ? agg.mean_alg / bounds.thm2_lower : 0.0;
    report.per_n.push_back(agg);
    for (auto& t : trials) report.trials.push_back(std::move(t));
  }
  return report;
}

// CSV columns: n, seed, alg_cost, opt_cost, sum_w, audits_passed. Failed
// trials are listed after the rows as comment lines.
inline std::string format_experiment_csv(const ExperimentReport& report) {
  std::string out(kCsvSchema);
  out += "\nn,seed,alg_cost,opt_cost,sum_w,audits_passed\n";
  std::string failures;
  for (const auto& t : report.trials) {
    if (t.error) {
      failures += "# FAILED n=" + std::to_string(t.n) + " seed=" + std::to_string(t.seed) + ": " + *t.error + "\n";
      continue;
    }
    out += std::to_string(t.n) + "," + std::to_string(t.seed) + "," + format_real(t.alg_cost) + "," +
           (t.opt_cost ? format_real(*t.opt_cost) : std::string()) + "," + std::to_string(t.sum_w) + "," +
           (t.audits.all_passed() ? "true" : "false") + "\n";
  }
  return out + failures;
}

inline Json experiment_summary_json(const ExperimentReport& report) {
  Json out;
  Json rows = Json::array();
  for (const auto& a : report.per_n) {
    Json j;
    j["n"] = a.n;
    j["trials"] = a.trials;
    j["errors"] = a.errors;
    j["audit_failures"] = a.audit_failures;
    j["mean_alg"] = a.mean_alg;
    if (a.mean_opt) j["mean_opt"] = *a.mean_opt;
    if (a.roe) {
      j["ratio_of_means"] = a.roe->ratio;
      j["ci99_low"] = a.roe->ci_low;
      j["ci99_high"] = a.roe->ci_high;
    } else {
      j["upper_estimate"] = a.upper_estimate;
      j["denominator"] = "thm2_lower (upper estimate, not the ratio of expectations)";
    }
    j["thm1_upper"] = a.thm1_upper;
    j["thm2_lower"] = a.thm2_lower;
    j["roe_bound"] = a.roe_bound;
    rows.push_back(std::move(j));
  }
  out["per_n"] = std::move(rows);

  Json failed = Json::object(), informational = Json::object();
  for (const auto& t : report.trials)
    for (const auto& c : t.audits.checks) {
      if (c.passed) continue;
      Json& bucket = c.gating ? failed : informational;
      bucket[c.name] = bucket.value(c.name, 0) + 1;
    }
  out["audit_failures_by_check"] = std::move(failed);
  out["informational_failures_by_check"] = std::move(informational);
  out["ok"] = report.ok();
  return out;
}

}  // namespace ocd
