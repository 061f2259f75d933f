#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "sgnc/error.hpp"
#include "sgnc/fixtures.hpp"
#include "sgnc/partition.hpp"

using namespace sgnc;

TEST_CASE("F1 partitions") {
  const auto sfm = fixtures::f1();
  const auto sol = solve_exact(build_graph(sfm), sfm);

  const auto g2 = partition_direct(sol, 2, sfm);
  CHECK(format_partition(g2, sfm) == "1: [1 2] packets=[2 3 4 7 8] wmax=2\n2: [3 4] packets=[1 5 6] wmax=2\n");
  const auto m2 = analytic_metrics(g2, sfm);
  CHECK(m2.u_g == 4);
  CHECK(m2.delay_sum == 38);
  CHECK(m2.total_targets == 14);
  CHECK(m2.per_subgen_wmax == std::vector<int>{2, 2});

  const auto idnc = analytic_metrics(partition_direct(sol, 1, sfm), sfm);
  CHECK(idnc.u_g == 4);
  CHECK(idnc.delay_sum == 32);
  const auto rlnc = analytic_metrics(partition_direct(sol, 4, sfm), sfm);
  CHECK(rlnc.u_g == 4);
  CHECK(rlnc.delay_sum == 50);

  const auto classic = partition_classic(sfm, 4);
  CHECK(classic.mode == PartitionMode::classic);
  CHECK(format_partition(classic, sfm) ==
        "1: [1 2 3 4] packets=[1 2 3 4] wmax=3\n2: [5 6 7 8] packets=[5 6 7 8] wmax=4\n");
  CHECK(analytic_metrics(classic, sfm).u_g == 7);

  CHECK(max_diversity(partition_direct(sol, 1, sfm)) == 2);
  CHECK(diversity(g2, 0, sfm) == 2);
}

TEST_CASE("F2 metrics") {
  const auto sfm = fixtures::f2();
  const auto sol = solve_exact(build_graph(sfm), sfm);
  const auto idnc = analytic_metrics(partition_direct(sol, 1, sfm), sfm);
  CHECK(idnc.u_g == 4);
  CHECK(idnc.delay_sum * 2 == idnc.total_targets * 5);
  const auto rlnc = analytic_metrics(partition_direct(sol, 4, sfm), sfm);
  CHECK(rlnc.u_g == 2);
  CHECK(rlnc.d_g() == doctest::Approx(2.0));
}

TEST_CASE("smart partitioning avoids a W_max increase") {
  const auto sfm = fixtures::partition_example();
  const auto sol = fixtures::partition_example_solution();
  const auto dp = partition_direct(sol, 3, sfm);
  const auto sp = partition_smart(sol, 3, sfm);
  CHECK(dp.subgens[0].w_max == 3);
  CHECK(sp.subgens[0].w_max == 2);
  CHECK(sp.subgens[0].set_indices == std::vector<int>{1, 2, 4});
  CHECK(analytic_metrics(dp, sfm).u_g == 4);
  CHECK(analytic_metrics(sp, sfm).u_g == 3);
}

TEST_CASE("invalid sub-generation sizes") {
  const auto sfm = fixtures::f1();
  const auto sol = solve_exact(build_graph(sfm), sfm);
  CHECK_THROWS_AS(partition_direct(sol, 0, sfm), InvalidG);
  CHECK_THROWS_AS(partition_smart(sol, 5, sfm), InvalidG);
  CHECK_THROWS_AS(partition_classic(sfm, 9), InvalidG);
}

TEST_CASE("smart partitioning never beats the exhaustive grouping") {
  std::mt19937_64 rng(41);
  int checked = 0;
  while (checked < 150) {
    const auto sfm = oracle::random_sfm(rng, 5, 8);
    const auto sol = solve_exact(build_graph(sfm), sfm);
    const int u = static_cast<int>(sol.cardinality());
    if (u < 2 || u > 7) continue;
    std::vector<std::vector<int>> sets;
    for (const auto& s : sol.sets) sets.push_back(s.packets);
    for (int g = 2; g <= u; ++g) {
      const auto sp = partition_smart(sol, g, sfm);
      int sum = 0;
      for (const auto& sg : sp.subgens) sum += sg.w_max;
      CHECK(oracle::best_grouping(sfm, sets, sp.count(), g) <= sum);
      CHECK(analytic_metrics(sp, sfm).u_g == sum);
    }
    ++checked;
  }
}

TEST_CASE("sub-generation bounds on random instances") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    const auto sfm = oracle::random_sfm(rng, 12, 12);
    const auto sol = solve(build_graph(sfm), sfm);
    const int u = static_cast<int>(sol.cardinality());
    const int w_max = demand_profile(sfm).w_max;
    for (int g = 1; g <= u; ++g) {
      const auto part = partition_direct(sol, g, sfm);
      const auto m = analytic_metrics(part, sfm);
      CHECK(m.u_g >= w_max);
      CHECK(m.u_g <= u);
      CHECK(2 * m.d_g() <= g + u + 1e-9);
      for (const auto& sg : part.subgens)
        if (g >= 2 && static_cast<int>(sg.members.size()) == g) CHECK((sg.w_max >= 2 && sg.w_max <= g));
    }
    CHECK(analytic_metrics(partition_direct(sol, u, sfm), sfm).u_g == w_max);
  }
}

TEST_CASE("broadcast order skips packets already served") {
  // Sets {1,3} and {2,3} share packet 3; the singleton {4} serves more new
  // targets than the second shared set.
  const auto sfm = sfm_from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  IdncSolution sol;
  sol.sets = {make_coding_set({0, 2}, sfm), make_coding_set({1, 2}, sfm), make_coding_set({3}, sfm)};
  const auto part = partition_direct(sol, 1, sfm);
  CHECK(broadcast_order(part, sfm) == std::vector<int>{0, 2, 1});
}
