// Command-line front end for the ocd library.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocd/ocd.hpp"

namespace {

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoul(item));
  }
  if (out.empty()) throw ocd::Error(ocd::ErrorKind::InvalidArgument, "empty size list");
  return out;
}

// "2:3,2:2" -> [{2,3},{2,2}]
std::vector<ocd::SizeInterval> parse_interval_list(const std::string& text) {
  std::vector<ocd::SizeInterval> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ocd::Error(ocd::ErrorKind::InvalidArgument, "interval must be l:u");
    out.push_back({std::stoul(item.substr(0, colon)), std::stoul(item.substr(colon + 1))});
  }
  if (out.empty()) throw ocd::Error(ocd::ErrorKind::InvalidArgument, "empty interval list");
  return out;
}

struct RunArgs {
  std::string instance;
  bool repair = false;
  std::string sizes;
  std::string intervals;
  std::optional<std::size_t> n;
  std::uint64_t seed = 1;
  std::string sequence;
  double lambda = 1.0;
  std::string rule = "per_member";
  bool degenerate = false;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("instance", a.instance, "instance JSON")->required();
  cmd->add_flag("--repair", a.repair, "repair a non-metric instance");
  auto* sizes = cmd->add_option("--sizes", a.sizes, "fixed cluster sizes, e.g. 3,2,2");
  auto* intervals = cmd->add_option("--intervals", a.intervals, "size intervals, e.g. 2:3,2:2");
  sizes->excludes(intervals);
  cmd->add_option("--n", a.n, "number of points (default: sum of sizes)");
  cmd->add_option("--seed", a.seed, "sampling seed");
  cmd->add_option("--sequence", a.sequence, "replay a sequence file instead of sampling");
  cmd->add_option("--lambda", a.lambda, "delay scale");
  cmd->add_option("--membership-rule", a.rule, "per_member or max_member");
  cmd->add_flag("--degenerate", a.degenerate, "allow k = 1 or unit sizes");
}

struct Prepared {
  ocd::Instance inst;
  ocd::ClusterSizeSpec spec;
  ocd::ArrivalSequence seq;
  ocd::DGreedyOptions options;
};

Prepared prepare(const RunArgs& a) {
  auto inst = ocd::load_instance(a.instance, a.repair);
  if (a.sizes.empty() == a.intervals.empty())
    throw ocd::Error(ocd::ErrorKind::InvalidArgument, "give exactly one of --sizes or --intervals");
  auto spec = a.sizes.empty() ? ocd::ClusterSizeSpec::interval(parse_interval_list(a.intervals))
                              : ocd::ClusterSizeSpec::fixed(parse_size_list(a.sizes), a.degenerate);
  ocd::ArrivalSequence seq;
  if (!a.sequence.empty()) {
    seq = ocd::parse_sequence(ocd::read_file(a.sequence), inst.space);
  } else {
    std::size_t n = a.n.value_or(0);
    if (!a.n) {
      if (!spec.is_fixed()) throw ocd::Error(ocd::ErrorKind::InvalidArgument, "--n is required with --intervals");
      n = spec.total_lower();
    }
    seq = ocd::sample_sequence(inst.dist, n, a.seed);
  }
  ocd::DGreedyOptions options;
  options.cost.lambda = a.lambda;
  options.rule = ocd::parse_membership_rule(a.rule);
  return {std::move(inst), std::move(spec), std::move(seq), options};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online clustering with delays: DGreedy simulator, offline oracle and bounds"};
  app.require_subcommand(1);

  std::string instance_path;
  bool repair = false;

  auto* validate = app.add_subcommand("validate", "check metric axioms; print violations as JSON");
  validate->add_option("instance", instance_path, "instance JSON")->required();
  validate->add_flag("--repair", repair, "also print the repaired distance matrix");

  auto* radius = app.add_subcommand("radius", "print r_x and open-ball mass q_x per location");
  radius->add_option("instance", instance_path, "instance JSON")->required();
  radius->add_flag("--repair", repair, "repair a non-metric instance");

  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 1;
  auto* sample = app.add_subcommand("sample", "sample an arrival sequence");
  sample->add_option("instance", instance_path, "instance JSON")->required();
  sample->add_option("--n", sample_n, "number of arrivals")->required();
  sample->add_option("--seed", sample_seed, "seed");
  sample->add_flag("--repair", repair, "repair a non-metric instance");

  RunArgs sim_args, trace_args;
  auto* simulate = app.add_subcommand("simulate", "run DGreedy; print the clustering and audits as JSON");
  add_run_options(simulate, sim_args);
  auto* trace = app.add_subcommand("trace", "run DGreedy; print the event log as TSV");
  add_run_options(trace, trace_args);

  std::string sequence_path, sizes_text;
  double lambda = 1.0;
  auto* oracle = app.add_subcommand("oracle", "exact offline optimum for a sequence");
  oracle->add_option("instance", instance_path, "instance JSON")->required();
  oracle->add_option("sequence", sequence_path, "sequence file")->required();
  oracle->add_option("--sizes", sizes_text, "fixed cluster sizes")->required();
  oracle->add_option("--lambda", lambda, "delay scale");
  oracle->add_flag("--repair", repair, "repair a non-metric instance");

  std::size_t bounds_n = 0;
  auto* bounds = app.add_subcommand("bounds", "expected-cost bounds and the ratio-of-expectations constant");
  bounds->add_option("instance", instance_path, "instance JSON")->required();
  bounds->add_option("--n", bounds_n, "number of points")->required();
  bounds->add_option("--sizes", sizes_text, "fixed cluster sizes")->required();
  bounds->add_option("--lambda", lambda, "delay scale");
  bounds->add_flag("--repair", repair, "repair a non-metric instance");

  std::string config_path, output_path;
  auto* experiment = app.add_subcommand("experiment", "Monte-Carlo experiment from a JSON config");
  experiment->add_option("config", config_path, "experiment config JSON")->required();
  experiment->add_option("--output", output_path, "CSV path (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      const ocd::Json doc = ocd::Json::parse(ocd::read_file(instance_path));
      const ocd::RawSpace raw = ocd::parse_raw_space(doc);
      const auto report = ocd::validate_space(raw);
      ocd::Json out;
      out["is_metric"] = report.is_metric();
      out["violations"] = ocd::violations_json(report, raw.labels());
      if (repair && !report.is_metric()) out["repaired_dist"] = ocd::repair_to_metric(raw, ocd::kDefaultRepairEpsilon).dist();
      std::cout << out.dump(2) << "\n";
      return report.is_metric() ? 0 : 1;
    }
    if (*radius) {
      const auto inst = ocd::load_instance(instance_path, repair);
      std::cout << ocd::radius_json(ocd::radius_table(inst.space, inst.dist), inst.space).dump(2) << "\n";
      return 0;
    }
    if (*sample) {
      const auto inst = ocd::load_instance(instance_path, repair);
      std::cout << ocd::format_sequence(ocd::sample_sequence(inst.dist, sample_n, sample_seed), inst.space);
      return 0;
    }
    if (*simulate || *trace) {
      const RunArgs& a = *simulate ? sim_args : trace_args;
      const Prepared p = prepare(a);
      const auto result = ocd::run_any(p.seq, p.inst.space, p.spec, p.options);
      const auto audits = ocd::audit_run(result, p.seq, p.inst.space, p.inst.dist, p.spec, p.options);
      if (*trace) {
        std::cout << ocd::format_trace(result);
      } else {
        ocd::Json out = ocd::clustering_json(result);
        out["sum_w"] = result.w.sum();
        out["audits"] = ocd::audit_json(audits);
        std::cout << out.dump(2) << "\n";
      }
      if (!audits.all_passed()) {
        for (const auto& c : audits.checks)
          if (c.gating && !c.passed) std::cerr << "audit failed: " << c.name << ": " << c.detail << "\n";
        return 3;
      }
      return 0;
    }
    if (*oracle) {
      const auto inst = ocd::load_instance(instance_path, repair);
      const auto seq = ocd::parse_sequence(ocd::read_file(sequence_path), inst.space);
      const auto spec = ocd::ClusterSizeSpec::fixed(parse_size_list(sizes_text), true);
      const auto r = ocd::opt_exact(seq, inst.space, spec, ocd::CostParams{lambda});
      std::cout << ocd::oracle_json(r).dump(2) << "\n";
      return 0;
    }
    if (*bounds) {
      const auto inst = ocd::load_instance(instance_path, repair);
      const auto spec = ocd::ClusterSizeSpec::fixed(parse_size_list(sizes_text));
      const auto b = ocd::bounds_report(inst.dist, inst.space, bounds_n, spec, ocd::CostParams{lambda});
      std::cout << ocd::bounds_json(b, spec).dump(2) << "\n";
      return 0;
    }
    if (*experiment) {
      const std::filesystem::path cfg_path(config_path);
      auto cfg = ocd::parse_experiment_config(ocd::read_file(config_path), cfg_path.parent_path().string());
      if (!output_path.empty()) cfg.output_path = output_path;
      const auto report = ocd::run_experiment(cfg);
      const std::string csv = ocd::format_experiment_csv(report);
      const std::string summary = ocd::experiment_summary_json(report).dump(2);
      if (cfg.output_path) {
        std::ofstream out(*cfg.output_path, std::ios::binary);
        if (!out) throw ocd::Error(ocd::ErrorKind::InvalidArgument, "cannot write " + *cfg.output_path);
        out << csv;
        std::cout << summary << "\n";
      } else {
        std::cout << csv;
        std::cerr << summary << "\n";
      }
      return report.ok() ? 0 : 3;
    }
  } catch (const ocd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
