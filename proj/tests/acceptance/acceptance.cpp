// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "sgnc/experiment.hpp"
#include "sgnc/fixtures.hpp"
#include "sgnc/galois.hpp"
#include "sgnc/idnc.hpp"
#include "sgnc/partition.hpp"
#include "sgnc/transmit.hpp"

namespace {

using namespace sgnc;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

bool ratio_is(const AnalyticMetrics& m, long long num, long long den) {
  return m.delay_sum * den == num * m.total_targets;
}

std::string ratio(const AnalyticMetrics& m) {
  return std::to_string(m.delay_sum) + "/" + std::to_string(m.total_targets);
}

// Systematic-phase instances with K_T = 20 and P_e = 0.2.
struct Instance {
  StateFeedbackMatrix sfm;
  IdncSolution solution;
  IdncSolution reduced;
  std::uint64_t seed = 0;
  int u_idnc = 0;
};

std::vector<Instance> instances(int n_receivers, int trials, std::uint64_t base) {
  std::vector<Instance> out;
  for (int t = 0; t < trials; ++t) {
    Instance inst;
    inst.seed = trial_seed(base, n_receivers, t);
    const auto outcome = run_systematic(20, n_receivers, ErasureChannel{0.2, inst.seed, {}});
    if (!outcome.coded_phase_needed()) continue;
    inst.sfm = outcome.sfm;
    inst.solution = solve(build_graph(inst.sfm), inst.sfm);
    inst.reduced = reduce_diversity(inst.solution, inst.sfm);
    inst.u_idnc = static_cast<int>(inst.solution.cardinality());
    out.push_back(std::move(inst));
  }
  return out;
}

Measurement transmit(const Instance& inst, int g, Strategy strategy, bool merging, TransmissionLog* keep = nullptr) {
  StrategyConfig sc;
  sc.strategy = strategy;
  sc.merging = merging;
  const auto& source = g >= 2 ? inst.reduced : inst.solution;
  auto log = run_strategy(partition_smart(source, g, inst.sfm), inst.sfm, ErasureChannel{0.2, inst.seed, {}}, sc);
  const auto m = measure(log);
  if (keep) *keep = std::move(log);
  return m;
}

const std::vector<int> kGrid = {10, 25, 40};
constexpr int kTrials = 1000;

Outcome criterion_1() {
  Outcome o;
  const auto sfm = fixtures::f2();
  const auto sol = solve_exact(build_graph(sfm), sfm);
  const auto idnc = analytic_metrics(partition_direct(sol, 1, sfm), sfm);
  const auto rlnc = analytic_metrics(partition_direct(sol, static_cast<int>(sol.cardinality()), sfm), sfm);
  if (rlnc.u_g != 2) fail(o, "U_RLNC=" + std::to_string(rlnc.u_g));
  if (!ratio_is(rlnc, 2, 1)) fail(o, "D_RLNC=" + ratio(rlnc));
  if (idnc.u_g != 4) fail(o, "U_IDNC=" + std::to_string(idnc.u_g));
  if (!ratio_is(idnc, 5, 2)) fail(o, "D_IDNC=" + ratio(idnc));
  if (o.pass) o.detail = "U_RLNC=2 D_RLNC=" + ratio(rlnc) + " U_IDNC=4 D_IDNC=" + ratio(idnc);
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto sfm = fixtures::f1();
  const auto sol = solve_exact(build_graph(sfm), sfm);
  std::set<std::vector<int>> got, want = {{2, 3, 7}, {4, 8}, {1, 5}, {1, 6}};
  for (const auto& set : sol.sets) {
    std::vector<int> ids;
    for (int p : set.packets) ids.push_back(sfm.packet_id(p));
    got.insert(ids);
  }
  if (sol.cardinality() != 4) fail(o, "U_IDNC=" + std::to_string(sol.cardinality()));
  if (got != want) fail(o, "solution sets differ: " + format_solution(sol, sfm));
  const auto idnc = analytic_metrics(partition_direct(sol, 1, sfm), sfm);
  const auto rlnc = analytic_metrics(partition_direct(sol, 4, sfm), sfm);
  const auto g2 = analytic_metrics(partition_direct(sol, 2, sfm), sfm);
  const auto classic = analytic_metrics(partition_classic(sfm, 4), sfm);
  if (!ratio_is(idnc, 32, 14)) fail(o, "D_IDNC=" + ratio(idnc));
  if (!ratio_is(rlnc, 50, 14)) fail(o, "D_RLNC=" + ratio(rlnc));
  if (g2.u_g != 4 || !ratio_is(g2, 38, 14)) fail(o, "g=2 U=" + std::to_string(g2.u_g) + " D=" + ratio(g2));
  if (classic.u_g != 7) fail(o, "classic g=4 U=" + std::to_string(classic.u_g));
  if (o.pass)
    o.detail = "D_IDNC=" + ratio(idnc) + " D_RLNC=" + ratio(rlnc) + " g=2: U=4 D=" + ratio(g2) + " classic U=7";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  std::mt19937_64 rng(3);
  long long checks = 0;
  int violations = 0;
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++violations;
      fail(o, what);
    }
  };
  for (int trial = 0; trial < 10000; ++trial) {
    const auto sfm = oracle::random_sfm(rng, 15, 15);
    const auto sol = solve(build_graph(sfm), sfm);
    const int u = static_cast<int>(sol.cardinality());
    const int w_max = demand_profile(sfm).w_max;
    const std::string tag = "instance " + std::to_string(trial);
    for (int g = 1; g <= u; ++g) {
      for (const auto& part : {partition_direct(sol, g, sfm), partition_smart(sol, g, sfm)}) {
        const auto m = analytic_metrics(part, sfm);
        check(w_max <= m.u_g && m.u_g <= u, tag + ": U_g outside [U_RLNC, U_IDNC] at g=" + std::to_string(g));
        if (g <= 2) check(m.u_g == u, tag + ": U_g != U_IDNC at g=" + std::to_string(g));
        if (g == u) check(m.u_g == w_max, tag + ": U_g != U_RLNC at g=U_IDNC");
        if (g >= 2)
          for (const auto& sg : part.subgens)
            if (static_cast<int>(sg.members.size()) == g)
              check(sg.w_max >= 2 && sg.w_max <= g, tag + ": w_max outside [2,g] at g=" + std::to_string(g));
        check(2.0 * m.d_g() <= g + u + 1e-9, tag + ": D_g > (g+U_IDNC)/2 at g=" + std::to_string(g));
      }
    }
    for (int g = 1; g <= sfm.packets(); ++g) {
      const auto m = analytic_metrics(partition_classic(sfm, g), sfm);
      const int chunks = (sfm.packets() + g - 1) / g;
      check(m.u_g >= std::max(w_max, chunks), tag + ": classic U_g below max(W_max, M)");
    }
  }
  std::ostringstream s;
  s << violations << " violations in " << checks << " checks over 10000 instances";
  if (!o.pass) s << "; first: " << o.detail;
  o.detail = s.str();
  return o;
}

Outcome criterion_4() {
  Outcome o;
  std::mt19937_64 rng(4);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sfm = oracle::random_sfm(rng, 12, 10);
    const auto sol = solve_exact(build_graph(sfm), sfm);
    const int expected = oracle::min_clique_cover(sfm);
    if (static_cast<int>(sol.cardinality()) != expected || !is_valid_solution(sfm, sol)) {
      ++mismatches;
      fail(o, "instance " + std::to_string(trial));
    }
  }
  o.detail = std::to_string(mismatches) + " mismatches in 1000 instances" + (o.pass ? "" : "; first " + o.detail);
  return o;
}

Outcome criterion_5() {
  Outcome o;
  std::mt19937_64 rng(5);
  for (int m : {1, 4, 8}) {
    const Field& f = Field::get(m);
    std::uniform_int_distribution<int> elem(0, f.size() - 1), size(1, 8), byte(0, 255);
    int decoded = 0;
    while (decoded < 1000) {
      const int n = size(rng);
      std::vector<Payload> source(n, Payload(16));
      for (auto& p : source)
        for (auto& b : p) b = static_cast<std::uint8_t>(byte(rng));
      std::vector<std::vector<Element>> rows(n, std::vector<Element>(n));
      std::vector<Payload> coded;
      for (auto& row : rows) {
        for (auto& e : row) e = static_cast<Element>(elem(rng));
        coded.push_back(encode(f, source, row).payload);
      }
      const auto result = rank_and_solve(f, rows, coded);
      if (!result.decoded) continue;
      ++decoded;
      if (*result.decoded != source) fail(o, "GF(2^" + std::to_string(m) + ") round trip mismatch");
    }
  }
  const Field& f = Field::get(8);
  std::uniform_int_distribution<int> elem(0, 255);
  const int samples = 200000;
  int singular = 0;
  for (int s = 0; s < samples; ++s) {
    Decoder d(f, 5, 0);
    std::vector<Element> row(5);
    for (int r = 0; r < 5; ++r) {
      for (auto& e : row) e = static_cast<Element>(elem(rng));
      d.add(row, {});
    }
    singular += d.complete() ? 0 : 1;
  }
  const double p = oracle::singular_probability(256.0, 5);
  const double sigma = std::sqrt(p * (1 - p) / samples);
  const double observed = static_cast<double>(singular) / samples;
  char buf[160];
  std::snprintf(buf, sizeof buf, "3000 round trips ok; singular 5x5 GF(256) %.5f vs %.5f (%.2f sigma)", observed, p,
                (observed - p) / sigma);
  if (std::abs(observed - p) > 3 * sigma) fail(o, buf);
  if (o.pass) o.detail = buf;
  return o;
}

Outcome criterion_6() {
  Outcome o;
  std::ostringstream s;
  for (int n : kGrid) {
    std::vector<double> seq, semi;
    for (const auto& inst : instances(n, kTrials, 6)) {
      const int g = GPolicy::parse("half").resolve(inst.u_idnc);
      seq.push_back(static_cast<double>(transmit(inst, g, Strategy::sequential, false).completion_slots));
      semi.push_back(static_cast<double>(transmit(inst, g, Strategy::semi_online, false).completion_slots));
    }
    const double a = oracle::summarize(seq).mean, b = oracle::summarize(semi).mean;
    const double rel = std::abs(a - b) / a;
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%d %.3f vs %.3f (%.2f%%) ", n, a, b, 100 * rel);
    s << buf;
    if (rel > 0.01) fail(o, buf);
  }
  o.detail = s.str();
  return o;
}

Outcome criterion_7() {
  Outcome o;
  std::ostringstream s;
  for (int n : kGrid) {
    const auto insts = instances(n, kTrials, 7);
    for (const char* policy : {"third", "half", "full"}) {
      std::vector<double> seq, semi, diff;
      for (const auto& inst : insts) {
        const int g = GPolicy::parse(policy).resolve(inst.u_idnc);
        seq.push_back(transmit(inst, g, Strategy::sequential, false).avg_delay());
        semi.push_back(transmit(inst, g, Strategy::semi_online, false).avg_delay());
        diff.push_back(seq.back() - semi.back());
      }
      const double a = oracle::summarize(seq).mean, b = oracle::summarize(semi).mean;
      const auto d = oracle::summarize(diff);
      char buf[128];
      std::snprintf(buf, sizeof buf, "N=%d %s %.3f/%.3f ", n, policy, a, b);
      s << buf;
      if (std::string(policy) == "full") {
        if (std::abs(d.mean) > 3 * d.stderr_ + 1e-12) fail(o, std::string("not equal: ") + buf);
      } else if (!(b < a)) {
        fail(o, std::string("semi-online not lower: ") + buf);
      }
    }
  }
  o.detail = "sequential/semi-online delay " + s.str();
  return o;
}

Outcome criterion_8() {
  Outcome o;
  std::ostringstream s;
  long long merges = 0;
  int violations = 0;
  for (int n : kGrid) {
    const auto insts = instances(n, kTrials, 8);
    for (const char* policy : {"third", "half", "full"}) {
      std::vector<double> u_off, u_on, d_off, d_on;
      for (const auto& inst : insts) {
        const int g = GPolicy::parse(policy).resolve(inst.u_idnc);
        const auto off = transmit(inst, g, Strategy::semi_online, false);
        TransmissionLog log;
        const auto on = transmit(inst, g, Strategy::semi_online, true, &log);
        for (const auto& rec : log.merges) {
          ++merges;
          if (rec.wmax_sum_after > rec.wmax_sum_before) ++violations;
        }
        u_off.push_back(static_cast<double>(off.completion_slots));
        u_on.push_back(static_cast<double>(on.completion_slots));
        d_off.push_back(off.avg_delay());
        d_on.push_back(on.avg_delay());
      }
      const double uo = oracle::summarize(u_off).mean, un = oracle::summarize(u_on).mean;
      const double dof = oracle::summarize(d_off).mean, dn = oracle::summarize(d_on).mean;
      char buf[128];
      std::snprintf(buf, sizeof buf, "N=%d %s U %.3f->%.3f D %.3f->%.3f", n, policy, uo, un, dof, dn);
      if (un > uo * 1.005 || dn > dof * 1.005) fail(o, buf);
    }
  }
  if (violations > 0) fail(o, std::to_string(violations) + " merges increased sum W_max");
  s << merges << " merges, " << violations << " increased sum W_max";
  o.detail = o.pass ? s.str() : o.detail + "; " + s.str();
  return o;
}

Outcome criterion_9() {
  Outcome o;
  std::ostringstream s;
  for (int n : kGrid) {
    const auto insts = instances(n, kTrials, 9);
    for (const char* policy : {"quarter", "half"}) {
      std::vector<double> dp, sp;
      for (const auto& inst : insts) {
        const int g = GPolicy::parse(policy).resolve(inst.u_idnc);
        dp.push_back(analytic_metrics(partition_direct(inst.solution, g, inst.sfm), inst.sfm).u_g);
        sp.push_back(analytic_metrics(partition_smart(inst.solution, g, inst.sfm), inst.sfm).u_g);
      }
      const double a = oracle::summarize(dp).mean, b = oracle::summarize(sp).mean;
      char buf[96];
      std::snprintf(buf, sizeof buf, "N=%d %s %.3f/%.3f ", n, policy, a, b);
      s << buf;
      if (b > a * 1.005) fail(o, buf);
    }
  }
  o.detail = "direct/smart U_g " + s.str();
  return o;
}

Outcome criterion_10() {
  Outcome o;
  std::mt19937_64 rng(10);
  int runs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sfm = oracle::random_sfm(rng, 15, 15);
    const auto sol = solve(build_graph(sfm), sfm);
    const auto reduced = reduce_diversity(sol, sfm);
    const int u = static_cast<int>(sol.cardinality());
    const int g = std::uniform_int_distribution<int>(1, u)(rng);
    const int gc = std::uniform_int_distribution<int>(1, sfm.packets())(rng);
    const auto& source = g >= 2 ? reduced : sol;
    const std::vector<Partition> parts = {partition_direct(source, g, sfm), partition_smart(source, g, sfm),
                                          partition_classic(sfm, gc)};
    for (const auto& part : parts) {
      const auto expected = analytic_metrics(part, sfm);
      for (int mode = 0; mode < 3; ++mode) {
        StrategyConfig sc;
        sc.strategy = mode == 0 ? Strategy::sequential : Strategy::semi_online;
        sc.merging = mode == 2;
        const auto m = measure(run_strategy(part, sfm, ErasureChannel{0.0, static_cast<std::uint64_t>(trial), {}}, sc));
        ++runs;
        if (m.completion_slots != expected.u_g || m.delay_sum != expected.delay_sum ||
            m.total_targets != expected.total_targets)
          fail(o, "instance " + std::to_string(trial) + " mode " + std::to_string(mode));
      }
    }
  }
  o.detail = std::to_string(runs) + " erasure-free runs" + (o.pass ? " match analytic U_g and D_g" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"fixture F2 analytic metrics", criterion_1},
      {"fixture F1 solution and metrics", criterion_2},
      {"completion and delay bounds on random instances", criterion_3},
      {"exact solver matches exhaustive clique cover", criterion_4},
      {"codec round trip and rank deficiency rate", criterion_5},
      {"sequential and semi-online completion agree", criterion_6},
      {"semi-online delay ordering", criterion_7},
      {"merging never hurts", criterion_8},
      {"smart partitioning no worse than direct", criterion_9},
      {"erasure-free runs reproduce analytic metrics", criterion_10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
