#pragma once

// Small worked instances used by the fixture report and the tests.

#include "sgnc/idnc.hpp"
#include "sgnc/model.hpp"

namespace sgnc::fixtures {

/// 4 receivers x 8 packets: R1 {1,2,4}, R2 {3,4,5,6}, R3 {2,6,8}, R4 {5,6,7,8}.
StateFeedbackMatrix f1();

/// 6 receivers x 4 packets, each receiver wanting a distinct pair.
StateFeedbackMatrix f2();

/// 9 receivers x 4 mutually conflicting packets with targets 4, 4, 3, 3.
/// Direct partitioning with g=3 groups the first three packets (W_max 3);
/// smart partitioning swaps the third for the fourth (W_max 2).
StateFeedbackMatrix partition_example();
IdncSolution partition_example_solution();

}  // namespace sgnc::fixtures
