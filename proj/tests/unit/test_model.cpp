#include <cmath>
#include <numeric>
#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "sgnc/error.hpp"
#include "sgnc/fixtures.hpp"
#include "sgnc/model.hpp"

using namespace sgnc;

TEST_CASE("matrix validation") {
  CHECK_THROWS_AS(sfm_from_rows({{1, 0}, {1}}), DimensionMismatch);
  CHECK_THROWS_AS(sfm_from_rows({{1, 2}}), DimensionMismatch);
  CHECK_THROWS_AS(sfm_from_rows({{1, 0}, {0, 0}}), EmptyRowOrColumn);
  CHECK_THROWS_AS(sfm_from_rows({{1, 0}, {1, 0}}), EmptyRowOrColumn);
  CHECK_THROWS_AS(sfm_from_rows({}), EmptyRowOrColumn);
  CHECK_THROWS_AS(sfm_from_rows({{1, 1}}, {3, 3}), DimensionMismatch);
  CHECK_THROWS_AS(sfm_from_rows({{1, 1}}, {0, 1}), DimensionMismatch);

  const auto sfm = sfm_from_rows({{1, 1}}, {4, 9});
  CHECK(sfm.column_of(9) == 1);
  CHECK_THROWS_AS(sfm.column_of(5), UnknownPacket);
}

TEST_CASE("demand profiles of the fixtures") {
  const auto f1 = demand_profile(fixtures::f1());
  CHECK(f1.wants_sizes == std::vector<int>{3, 4, 3, 4});
  CHECK(f1.w_max == 4);
  CHECK(f1.target_sizes == std::vector<int>{1, 2, 1, 2, 2, 3, 1, 2});
  CHECK(f1.total_targets == 14);

  const auto f2 = demand_profile(fixtures::f2());
  CHECK(f2.wants_sizes == std::vector<int>(6, 2));
  CHECK(f2.w_max == 2);
  CHECK(f2.target_sizes == std::vector<int>(4, 3));
  CHECK(f2.total_targets == 12);

  const auto sfm = fixtures::f1();
  CHECK(sfm.wants_set(1) == std::vector<int>{2, 3, 4, 5});
  CHECK(sfm.target_set(5) == std::vector<int>{1, 2, 3});
}

TEST_CASE("wants and targets count the same entries") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto sfm = oracle::random_sfm(rng, 12, 12);
    const auto p = demand_profile(sfm);
    CHECK(std::accumulate(p.wants_sizes.begin(), p.wants_sizes.end(), 0) == p.total_targets);
    CHECK(p.w_max <= sfm.packets());
  }
}

TEST_CASE("text format round trip") {
  const auto sfm = sfm_from_rows({{1, 0, 1}, {0, 1, 1}}, {2, 5, 7});
  const auto text = format_sfm(sfm);
  CHECK(parse_sfm(text) == sfm);

  const auto parsed = parse_sfm("# comment\n2 2\n1 0  # trailing\n0 1\n");
  CHECK(parsed.receivers() == 2);
  CHECK(parsed.packet_ids() == std::vector<int>{1, 2});

  CHECK_THROWS_AS(parse_sfm("1 2\n1 x\n"), ParseError);
  CHECK_THROWS_AS(parse_sfm("1 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_sfm("2 2\n1 1\n"), DimensionMismatch);
  CHECK_THROWS_AS(parse_sfm("1 2\n1 1 1\n"), DimensionMismatch);
  CHECK_THROWS_AS(load_sfm("/nonexistent/file.sfm"), ParseError);
}

TEST_CASE("fixture files match the built-in fixtures") {
  CHECK(load_sfm(SGNC_DATA_DIR "/fixtures/f1.sfm") == fixtures::f1());
  CHECK(load_sfm(SGNC_DATA_DIR "/fixtures/f2.sfm") == fixtures::f2());
}

TEST_CASE("erasure channel") {
  ErasureChannel bad{1.5, 0, {}};
  CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
  ErasureChannel ok{0.3, 5, {}};
  CHECK(ok.erased(1, 2, 3) == ok.erased(1, 2, 3));
  ErasureChannel never{0.0, 5, {}};
  ErasureChannel always{1.0, 5, {}};
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(never.erased(0, 1, i));
    CHECK(always.erased(0, 1, i));
  }
}

TEST_CASE("systematic phase edge cases") {
  const auto clean = run_systematic(20, 5, ErasureChannel{0.0, 1, {}});
  CHECK_FALSE(clean.coded_phase_needed());
  CHECK_THROWS_AS(clean.require_coded_phase(), DegenerateOutcome);

  const auto lost = run_systematic(6, 4, ErasureChannel{1.0, 1, {}});
  REQUIRE(lost.coded_phase_needed());
  CHECK(lost.sfm.receivers() == 4);
  CHECK(lost.sfm.packets() == 6);
  CHECK(lost.receiver_ids == std::vector<int>{1, 2, 3, 4});

  CHECK_THROWS_AS(run_systematic(0, 4, ErasureChannel{}), DimensionMismatch);
  CHECK_THROWS_AS(run_systematic(4, 2, ErasureChannel{0.1, 1, {0.1}}), DimensionMismatch);
}

TEST_CASE("systematic losses follow the binomial law") {
  // Each of K_T * N_T receptions is lost with probability P_e.
  const int k = 20, n = 10, runs = 2000;
  const double pe = 0.2;
  long long ones = 0;
  for (int r = 0; r < runs; ++r) {
    const auto out = run_systematic(k, n, ErasureChannel{pe, static_cast<std::uint64_t>(r), {}});
    if (out.coded_phase_needed()) ones += demand_profile(out.sfm).total_targets;
  }
  const double trials = static_cast<double>(k) * n * runs;
  const double mean = trials * pe;
  const double sigma = std::sqrt(trials * pe * (1 - pe));
  CHECK(std::abs(static_cast<double>(ones) - mean) < 4 * sigma);
}
