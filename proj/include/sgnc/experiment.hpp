#pragma once

// Parameter sweeps over random systematic-phase instances and the fixture
// regression report.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgnc/transmit.hpp"

namespace sgnc {

/// A sub-generation size: an absolute value ("3") or a fraction of U_IDNC
/// ("half", "third", "quarter", "full").
struct GPolicy {
  std::string name;
  int absolute = 0;       // 0 for fractional policies
  double fraction = 0.0;

  static GPolicy parse(const std::string& text);
  /// max(1, round(fraction * U_IDNC)), or the absolute value clamped to U_IDNC.
  int resolve(int u_idnc) const;
};

struct ExperimentConfig {
  std::string experiment = "tradeoff";  // tradeoff|partitioners|strategies|merging
  int k_total = 20;
  int receivers_from = 5;
  int receivers_to = 50;
  int receivers_step = 5;
  double p_e = 0.2;
  int trials = 500;
  // Empty lists select the defaults of the experiment.
  std::vector<std::string> g_policies;
  std::vector<std::string> partitioners;  // direct|smart|classic
  std::vector<std::string> strategies;    // sequential|semi_online
  std::vector<std::string> merging;       // off|on
  DecodeMode decode_mode = DecodeMode::idealized;
  int field_bits = 8;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::vector<int> receiver_grid() const;
};

struct CsvRow {
  std::string experiment;
  int n_receivers = 0;
  std::string g_policy;
  std::string partitioner;
  std::string strategy;
  std::string merging;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

std::vector<CsvRow> run_experiment(const ExperimentConfig& config);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

/// Seed of one systematic-phase instance.
std::uint64_t trial_seed(std::uint64_t seed, int n_receivers, int trial);

struct ReportLine {
  std::string fixture;
  std::string metric;
  std::string expected;
  std::string actual;
  bool pass = false;
};

std::vector<ReportLine> run_fixture_report();
std::string format_fixture_report(const std::vector<ReportLine>& lines);

}  // namespace sgnc
