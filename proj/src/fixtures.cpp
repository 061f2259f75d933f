#include "sgnc/fixtures.hpp"

namespace sgnc::fixtures {

StateFeedbackMatrix f1() {
  return sfm_from_rows({
      {1, 1, 0, 1, 0, 0, 0, 0},
      {0, 0, 1, 1, 1, 1, 0, 0},
      {0, 1, 0, 0, 0, 1, 0, 1},
      {0, 0, 0, 0, 1, 1, 1, 1},
  });
}

StateFeedbackMatrix f2() {
  return sfm_from_rows({
      {1, 1, 0, 0},
      {1, 0, 1, 0},
      {1, 0, 0, 1},
      {0, 1, 1, 0},
      {0, 1, 0, 1},
      {0, 0, 1, 1},
  });
}

StateFeedbackMatrix partition_example() {
  return sfm_from_rows({
      {1, 1, 1, 0},
      {1, 0, 0, 1},
      {0, 1, 0, 1},
      {0, 0, 1, 1},
      {1, 0, 0, 0},
      {1, 0, 0, 0},
      {0, 1, 0, 0},
      {0, 1, 0, 0},
      {0, 0, 1, 0},
  });
}

IdncSolution partition_example_solution() {
  const auto sfm = partition_example();
  IdncSolution s;
  for (int k = 0; k < sfm.packets(); ++k) s.sets.push_back(make_coding_set({k}, sfm));
  return s;
}

}  // namespace sgnc::fixtures
