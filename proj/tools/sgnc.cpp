// Command line front end: parameter sweeps, the fixture report and
// single-matrix analysis.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgnc/error.hpp"
#include "sgnc/experiment.hpp"
#include "sgnc/idnc.hpp"
#include "sgnc/partition.hpp"
#include "sgnc/transmit.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

void parse_grid(const std::string& text, sgnc::ExperimentConfig& config) {
  const auto parts = split(text, ':');
  try {
    if (parts.size() == 1) {
      config.receivers_from = config.receivers_to = std::stoi(parts[0]);
      config.receivers_step = 1;
    } else if (parts.size() == 3) {
      config.receivers_from = std::stoi(parts[0]);
      config.receivers_to = std::stoi(parts[1]);
      config.receivers_step = std::stoi(parts[2]);
    } else {
      throw sgnc::ConfigError("");
    }
  } catch (const std::exception&) {
    throw sgnc::ConfigError("receivers: expected N or a:b:step, got '" + text + "'");
  }
}

sgnc::Partition make_partition(const std::string& partitioner, const sgnc::IdncSolution& solution, int g,
                               const sgnc::StateFeedbackMatrix& sfm) {
  if (partitioner == "direct") return sgnc::partition_direct(solution, g, sfm);
  if (partitioner == "smart") return sgnc::partition_smart(solution, g, sfm);
  if (partitioner == "classic") return sgnc::partition_classic(sfm, g);
  throw sgnc::ConfigError("partitioner: unknown value '" + partitioner + "'");
}

struct SingleOptions {
  std::string path;
  std::string g = "1";
  std::string partitioner = "smart";
  std::string strategy = "sequential";
  std::string merge = "off";
  std::string trace;
  bool dump_solution = false;
};

int analyze_matrix(const SingleOptions& opt, const sgnc::ExperimentConfig& config) {
  const auto sfm = sgnc::load_sfm(opt.path);
  const auto profile = sgnc::demand_profile(sfm);
  const auto solution = sgnc::solve(sgnc::build_graph(sfm), sfm);
  const int u_idnc = static_cast<int>(solution.cardinality());
  const int g = sgnc::GPolicy::parse(opt.g).resolve(u_idnc);

  std::cout << "receivers " << sfm.receivers() << ", packets " << sfm.packets() << ", W_max " << profile.w_max
            << ", sum T_k " << profile.total_targets << ", U_IDNC " << u_idnc << '\n';
  if (opt.dump_solution) std::cout << sgnc::format_solution(solution, sfm);

  const auto& source = g >= 2 ? sgnc::reduce_diversity(solution, sfm) : solution;
  const auto partition = make_partition(opt.partitioner, source, g, sfm);
  const auto metrics = sgnc::analytic_metrics(partition, sfm);
  std::cout << "g=" << g << " (" << opt.partitioner << ")\n" << sgnc::format_partition(partition, sfm);
  std::cout << "analytic U_g " << metrics.u_g << ", D_g " << metrics.delay_sum << '/' << metrics.total_targets << " = "
            << metrics.d_g() << '\n';

  sgnc::StrategyConfig sc;
  sc.strategy = sgnc::parse_strategy(opt.strategy);
  sc.merging = opt.merge == "on";
  sc.decode_mode = config.decode_mode;
  sc.field_bits = config.field_bits;
  sc.record_trace = !opt.trace.empty();
  const sgnc::ErasureChannel channel{config.p_e, config.seed, {}};
  const auto log = sgnc::run_strategy(partition, sfm, channel, sc);
  const auto m = sgnc::measure(log);
  std::cout << "measured (" << opt.strategy << ", P_e " << config.p_e << ") slots " << m.completion_slots
            << ", delay " << m.avg_delay() << '\n';
  if (!opt.trace.empty()) {
    std::ofstream out(opt.trace);
    if (!out) throw sgnc::ConfigError("trace: cannot open " + opt.trace);
    sgnc::write_trace_csv(out, log, sfm);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-generation network coding experiments"};
  sgnc::ExperimentConfig config;
  SingleOptions single;
  std::string experiment = "tradeoff";
  std::string receivers = "5:50:5";
  std::string g_list, partitioner, strategy, merge, decode_mode = "idealized", out_path;

  app.add_option("--experiment", experiment, "tradeoff|partitioners|strategies|merging|fixtures")
      ->check(CLI::IsMember({"tradeoff", "partitioners", "strategies", "merging", "fixtures"}));
  app.add_option("--kt", config.k_total, "Packets in the frame")->capture_default_str();
  app.add_option("--receivers", receivers, "Receiver grid a:b:step")->capture_default_str();
  app.add_option("--pe", config.p_e, "Erasure probability")->capture_default_str();
  app.add_option("--trials", config.trials, "Trials per grid point")->capture_default_str();
  app.add_option("--g", g_list, "Comma-separated g policies: integers, quarter, third, half, full");
  app.add_option("--partitioner", partitioner, "direct|smart|classic (comma-separated)");
  app.add_option("--strategy", strategy, "sequential|semi_online (comma-separated)");
  app.add_option("--merge", merge, "on|off|both");
  app.add_option("--decode-mode", decode_mode, "idealized|concrete_gf")->capture_default_str();
  app.add_option("--field-bits", config.field_bits, "Field degree for multi-set sub-generations")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Base seed")->capture_default_str();
  app.add_option("--out", out_path, "CSV output file (default stdout)");
  app.add_option("--sfm", single.path, "Analyze one state feedback matrix file")->check(CLI::ExistingFile);
  app.add_option("--trace", single.trace, "Write the slot trace CSV (with --sfm)");
  app.add_flag("--dump-solution", single.dump_solution, "Print the IDNC solution (with --sfm)");
  CLI11_PARSE(app, argc, argv);

  try {
    config.decode_mode = sgnc::parse_decode_mode(decode_mode);

    if (experiment == "fixtures") {
      const auto lines = sgnc::run_fixture_report();
      std::cout << sgnc::format_fixture_report(lines);
      for (const auto& l : lines)
        if (!l.pass) return 1;
      return 0;
    }

    if (!single.path.empty()) {
      if (!g_list.empty()) single.g = g_list;
      if (!partitioner.empty()) single.partitioner = partitioner;
      if (!strategy.empty()) single.strategy = strategy;
      if (!merge.empty()) single.merge = merge;
      return analyze_matrix(single, config);
    }
    if (!single.trace.empty()) throw sgnc::ConfigError("trace: requires --sfm");
    if (single.dump_solution) throw sgnc::ConfigError("dump-solution: requires --sfm");

    config.experiment = experiment;
    parse_grid(receivers, config);
    config.g_policies = split(g_list, ',');
    config.partitioners = split(partitioner, ',');
    config.strategies = split(strategy, ',');
    if (merge == "both") config.merging = {"off", "on"};
    else config.merging = split(merge, ',');

    const auto rows = sgnc::run_experiment(config);
    if (out_path.empty()) {
      sgnc::write_csv(std::cout, rows);
    } else {
      std::ofstream out(out_path);
      if (!out) throw sgnc::ConfigError("out: cannot open " + out_path);
      sgnc::write_csv(out, rows);
    }
  } catch (const sgnc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
