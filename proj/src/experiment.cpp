#include "sgnc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "sgnc/error.hpp"
#include "sgnc/fixtures.hpp"
#include "sgnc/idnc.hpp"
#include "sgnc/partition.hpp"
#include "sgnc/random.hpp"

namespace sgnc {

GPolicy GPolicy::parse(const std::string& text) {
  GPolicy p;
  p.name = text;
  if (text == "full") p.fraction = 1.0;
  else if (text == "half") p.fraction = 0.5;
  else if (text == "third") p.fraction = 1.0 / 3.0;
  else if (text == "quarter") p.fraction = 0.25;
  else {
    try {
      std::size_t used = 0;
      p.absolute = std::stoi(text, &used);
      if (used != text.size() || p.absolute < 1) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("g_policy: cannot parse '" + text + "'");
    }
  }
  return p;
}

int GPolicy::resolve(int u_idnc) const {
  if (u_idnc < 1) return 1;
  if (absolute > 0) return std::min(absolute, u_idnc);
  return std::clamp(static_cast<int>(std::lround(fraction * u_idnc)), 1, u_idnc);
}

namespace {

const std::vector<std::string> kExperiments = {"tradeoff", "partitioners", "strategies", "merging"};

bool measured(const std::string& experiment) { return experiment == "strategies" || experiment == "merging"; }

template <class T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
  return given.empty() ? fallback : given;
}

struct Cells {
  std::vector<std::string> g;
  std::vector<std::string> partitioners;
  std::vector<std::string> strategies;
  std::vector<std::string> merging;
};

Cells cells_for(const ExperimentConfig& c) {
  Cells out;
  if (c.experiment == "tradeoff") {
    out.g = or_default(c.g_policies, {"1", "2", "3", "4", "half", "full"});
    out.partitioners = or_default(c.partitioners, {"direct"});
    out.strategies = {"analytic"};
    out.merging = {"off"};
  } else if (c.experiment == "partitioners") {
    out.g = or_default(c.g_policies, {"quarter", "half"});
    out.partitioners = or_default(c.partitioners, {"direct", "smart"});
    out.strategies = {"analytic"};
    out.merging = {"off"};
  } else if (c.experiment == "strategies") {
    out.g = or_default(c.g_policies, {"third", "half", "full"});
    out.partitioners = or_default(c.partitioners, {"smart"});
    out.strategies = or_default(c.strategies, {"sequential", "semi_online"});
    out.merging = or_default(c.merging, {"off"});
  } else {
    out.g = or_default(c.g_policies, {"third", "half", "full"});
    out.partitioners = or_default(c.partitioners, {"smart"});
    out.strategies = or_default(c.strategies, {"semi_online"});
    out.merging = or_default(c.merging, {"off", "on"});
  }
  return out;
}

struct Instance {
  SystematicOutcome outcome;
  IdncSolution solution;
  std::optional<IdncSolution> reduced;
  int u_idnc = 0;
};

Partition build_partition(const std::string& partitioner, const IdncSolution& solution, int g,
                          const StateFeedbackMatrix& sfm) {
  if (partitioner == "direct") return partition_direct(solution, g, sfm);
  if (partitioner == "smart") return partition_smart(solution, g, sfm);
  return partition_classic(sfm, std::min(g, sfm.packets()));
}

struct Stats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Stats summarize(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(sq / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end())
    throw ConfigError("experiment: unknown value '" + experiment + "'");
  if (k_total < 1) throw ConfigError("k_total: must be positive");
  if (receivers_from < 1 || receivers_to < receivers_from || receivers_step < 1)
    throw ConfigError("receiver_grid: need 1 <= from <= to and step >= 1");
  if (!(p_e >= 0.0 && p_e <= 1.0)) throw ConfigError("p_e: outside [0, 1]");
  if (trials < 1) throw ConfigError("trials: must be positive");
  for (const auto& g : g_policies) GPolicy::parse(g);
  for (const auto& p : partitioners)
    if (p != "direct" && p != "smart" && p != "classic") throw ConfigError("partitioner: unknown value '" + p + "'");
  for (const auto& s : strategies) parse_strategy(s);
  for (const auto& m : merging)
    if (m != "on" && m != "off") throw ConfigError("merging: expected on or off, got '" + m + "'");
  if (field_bits != 1 && field_bits != 2 && field_bits != 4 && field_bits != 8)
    throw ConfigError("field_bits: must be 1, 2, 4 or 8");
  if (!measured(experiment) && (!strategies.empty() || !merging.empty()))
    throw ConfigError("strategy: only the strategies and merging experiments transmit");
  for (const auto& s : strategies)
    for (const auto& m : merging)
      if (m == "on" && parse_strategy(s) != Strategy::semi_online)
        throw ConfigError("merging: requires the semi_online strategy");
}

std::vector<int> ExperimentConfig::receiver_grid() const {
  std::vector<int> grid;
  for (int n = receivers_from; n <= receivers_to; n += receivers_step) grid.push_back(n);
  return grid;
}

std::uint64_t trial_seed(std::uint64_t seed, int n_receivers, int trial) {
  return hash_words(seed, static_cast<std::uint64_t>(Domain::trial), n_receivers, trial);
}

std::vector<CsvRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Cells cells = cells_for(config);
  const bool transmit = measured(config.experiment);

  std::vector<CsvRow> rows;
  for (int n_rx : config.receiver_grid()) {
    std::vector<Instance> instances;
    instances.reserve(config.trials);
    for (int t = 0; t < config.trials; ++t) {
      Instance inst;
      ErasureChannel channel{config.p_e, trial_seed(config.seed, n_rx, t), {}};
      inst.outcome = run_systematic(config.k_total, n_rx, channel);
      if (inst.outcome.coded_phase_needed()) {
        const auto& sfm = inst.outcome.sfm;
        inst.solution = solve(build_graph(sfm), sfm);
        inst.u_idnc = static_cast<int>(inst.solution.cardinality());
      }
      instances.push_back(std::move(inst));
    }

    // key: g, partitioner, strategy, merging -> metric -> samples
    std::map<std::tuple<std::string, std::string, std::string, std::string>, std::map<std::string, std::vector<double>>>
        samples;
    for (auto& inst : instances) {
      const auto& sfm = inst.outcome.sfm;
      for (const auto& g_name : cells.g) {
        const GPolicy policy = GPolicy::parse(g_name);
        for (const auto& part : cells.partitioners) {
          for (const auto& strat : cells.strategies) {
            for (const auto& merge : cells.merging) {
              auto& bucket = samples[{g_name, part, strat, merge}];
              if (!inst.outcome.coded_phase_needed()) {
                bucket["U"].push_back(0.0);
                bucket["D"].push_back(0.0);
                continue;
              }
              const int g = policy.resolve(inst.u_idnc);
              if (!transmit) {
                const auto metrics = analytic_metrics(build_partition(part, inst.solution, g, sfm), sfm);
                bucket["U"].push_back(metrics.u_g);
                bucket["D"].push_back(metrics.d_g());
                continue;
              }
              const IdncSolution* source = &inst.solution;
              if (g >= 2 || part == "classic") {
                if (!inst.reduced) inst.reduced = reduce_diversity(inst.solution, sfm);
                source = &*inst.reduced;
              }
              StrategyConfig sc;
              sc.strategy = parse_strategy(strat);
              sc.merging = merge == "on";
              sc.decode_mode = config.decode_mode;
              sc.field_bits = config.field_bits;
              ErasureChannel channel{config.p_e, trial_seed(config.seed, n_rx, static_cast<int>(&inst - instances.data())), {}};
              const auto m = measure(run_strategy(build_partition(part, *source, g, sfm), sfm, channel, sc));
              bucket["U"].push_back(static_cast<double>(m.completion_slots));
              bucket["D"].push_back(m.avg_delay());
            }
          }
        }
      }
    }

    for (const auto& [key, metrics] : samples) {
      for (const auto& [metric, xs] : metrics) {
        const Stats s = summarize(xs);
        CsvRow row;
        row.experiment = config.experiment;
        row.n_receivers = n_rx;
        std::tie(row.g_policy, row.partitioner, row.strategy, row.merging) = key;
        row.metric = metric;
        row.mean = s.mean;
        row.stderr_ = s.stderr_;
        row.trials = static_cast<int>(xs.size());
        row.seed = config.seed;
        rows.push_back(std::move(row));
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
    return std::tie(a.n_receivers, a.g_policy, a.partitioner, a.strategy, a.merging, a.metric) <
           std::tie(b.n_receivers, b.g_policy, b.partitioner, b.strategy, b.merging, b.metric);
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << "experiment,n_receivers,g_policy,partitioner,strategy,merging,metric,mean,stderr,trials,seed\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.n_receivers << ',' << r.g_policy << ',' << r.partitioner << ',' << r.strategy
        << ',' << r.merging << ',' << r.metric << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.mean, r.stderr_);
    out << buf << ',' << r.trials << ',' << r.seed << '\n';
  }
}

namespace {

std::string fraction(long long num, long long den) { return std::to_string(num) + "/" + std::to_string(den); }

struct Report {
  std::vector<ReportLine> lines;

  void integer(const std::string& fixture, const std::string& metric, long long expected, long long actual) {
    lines.push_back({fixture, metric, std::to_string(expected), std::to_string(actual), expected == actual});
  }
  void ratio(const std::string& fixture, const std::string& metric, long long num, long long den,
             const AnalyticMetrics& m) {
    lines.push_back({fixture, metric, fraction(num, den), fraction(m.delay_sum, m.total_targets),
                     m.delay_sum * den == num * m.total_targets});
  }
  void text(const std::string& fixture, const std::string& metric, const std::string& expected,
            const std::string& actual) {
    lines.push_back({fixture, metric, expected, actual, expected == actual});
  }
};

std::string set_contents(const IdncSolution& s, const StateFeedbackMatrix& sfm) {
  std::vector<std::vector<int>> sets;
  for (const auto& set : s.sets) {
    std::vector<int> ids;
    for (int p : set.packets) ids.push_back(sfm.packet_id(p));
    sets.push_back(ids);
  }
  std::sort(sets.begin(), sets.end());
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out << (i ? "," : "") << '{';
    for (std::size_t j = 0; j < sets[i].size(); ++j) out << (j ? "," : "") << sets[i][j];
    out << '}';
  }
  out << '}';
  return out.str();
}

}  // namespace

std::vector<ReportLine> run_fixture_report() {
  Report r;
  {
    const auto sfm = fixtures::f2();
    const auto sol = solve_exact(build_graph(sfm), sfm);
    const int u = static_cast<int>(sol.cardinality());
    const auto idnc = analytic_metrics(partition_direct(sol, 1, sfm), sfm);
    const auto rlnc = analytic_metrics(partition_direct(sol, u, sfm), sfm);
    r.integer("F2", "U_IDNC", 4, idnc.u_g);
    r.ratio("F2", "D_IDNC", 30, 12, idnc);
    r.integer("F2", "U_RLNC", 2, rlnc.u_g);
    r.ratio("F2", "D_RLNC", 24, 12, rlnc);
  }
  {
    const auto sfm = fixtures::f1();
    const auto profile = demand_profile(sfm);
    const auto sol = solve_exact(build_graph(sfm), sfm);
    const int u = static_cast<int>(sol.cardinality());
    r.integer("F1", "W_max", 4, profile.w_max);
    r.integer("F1", "sum T_k", 14, profile.total_targets);
    r.text("F1", "IDNC sets", "{{1,5},{1,6},{2,3,7},{4,8}}", set_contents(sol, sfm));
    const auto idnc = analytic_metrics(partition_direct(sol, 1, sfm), sfm);
    r.integer("F1", "U_IDNC", 4, idnc.u_g);
    r.ratio("F1", "D_IDNC", 32, 14, idnc);
    const auto rlnc = analytic_metrics(partition_direct(sol, u, sfm), sfm);
    r.integer("F1", "U_RLNC", 4, rlnc.u_g);
    r.ratio("F1", "D_RLNC", 50, 14, rlnc);
    const auto g2 = analytic_metrics(partition_direct(sol, 2, sfm), sfm);
    r.integer("F1", "U_g (g=2)", 4, g2.u_g);
    r.ratio("F1", "D_g (g=2)", 38, 14, g2);
    const auto classic = analytic_metrics(partition_classic(sfm, 4), sfm);
    r.integer("F1", "classic U_g (g=4)", 7, classic.u_g);

    ErasureChannel clean;
    const auto m = measure(run_sequential(partition_direct(sol, 1, sfm), sfm, clean, StrategyConfig{}));
    r.integer("F1", "measured IDNC slots (P_e=0)", 4, m.completion_slots);
    r.integer("F1", "measured IDNC delay sum (P_e=0)", 32, m.delay_sum);
  }
  {
    const auto sfm = fixtures::partition_example();
    const auto sol = fixtures::partition_example_solution();
    const auto dp = partition_direct(sol, 3, sfm);
    const auto sp = partition_smart(sol, 3, sfm);
    r.integer("partition", "direct W_max^1 (g=3)", 3, dp.subgens.front().w_max);
    r.integer("partition", "smart W_max^1 (g=3)", 2, sp.subgens.front().w_max);
    r.integer("partition", "direct U_g", 4, analytic_metrics(dp, sfm).u_g);
    r.integer("partition", "smart U_g", 3, analytic_metrics(sp, sfm).u_g);
  }
  {
    // Receivers want 2, 3, 4 packets of G1 and received 2, 1, 3 coded packets.
    const auto plan = merge_subgenerations({{2 - 2, 3 - 1, 4 - 3}});
    r.integer("round update", "W_max^1 after round 1", 2, plan.group_wmax.empty() ? 0 : plan.group_wmax.front());
  }
  {
    const auto plan = merge_subgenerations({{2, 0}, {0, 3}});
    r.integer("merge", "sub-generations after merge", 1, static_cast<long long>(plan.groups.size()));
    r.integer("merge", "sum W_max before", 5, plan.wmax_sum_before);
    r.integer("merge", "sum W_max after", 3, plan.wmax_sum_after);
  }
  return std::move(r.lines);
}

std::string format_fixture_report(const std::vector<ReportLine>& lines) {
  std::size_t w_fix = 7, w_metric = 6, w_exp = 8;
  for (const auto& l : lines) {
    w_fix = std::max(w_fix, l.fixture.size());
    w_metric = std::max(w_metric, l.metric.size());
    w_exp = std::max(w_exp, l.expected.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size() + 2, ' '); };
  std::ostringstream out;
  out << pad("fixture", w_fix) << pad("metric", w_metric) << pad("expected", w_exp) << "actual  result\n";
  int failed = 0;
  for (const auto& l : lines) {
    out << pad(l.fixture, w_fix) << pad(l.metric, w_metric) << pad(l.expected, w_exp) << l.actual << "  "
        << (l.pass ? "PASS" : "FAIL") << '\n';
    failed += l.pass ? 0 : 1;
  }
  out << lines.size() - failed << '/' << lines.size() << " passed\n";
  return out.str();
}

}  // namespace sgnc
