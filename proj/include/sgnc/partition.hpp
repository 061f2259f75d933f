#pragma once

// Sub-generations built from an IDNC solution (or from consecutive packets,
// for the classic baseline) and their analytic completion time and delay.

#include <string>
#include <vector>

#include "sgnc/idnc.hpp"
#include "sgnc/model.hpp"

namespace sgnc {

enum class PartitionMode { framework, classic };

/// A group of coding sets coded together with random coefficients.
struct SubGeneration {
  int index = 0;                  // 1-based position in the partition
  std::vector<int> set_indices;   // 1-based positions in the source solution
  std::vector<CodingSet> members;
  std::vector<int> packets;       // union of member packets, ascending
  std::vector<int> wants;         // W_n^m per receiver
  int w_max = 0;                  // W_max^m
  int targets = 0;                // sum of T_k over `packets`
};

struct Partition {
  std::vector<SubGeneration> subgens;
  int g = 1;
  PartitionMode mode = PartitionMode::framework;

  int count() const noexcept { return static_cast<int>(subgens.size()); }
};

SubGeneration make_subgeneration(int index, std::vector<int> set_indices, std::vector<CodingSet> members,
                                 const StateFeedbackMatrix& sfm);

/// Consecutive chunks of g sets; the last chunk may be smaller.
Partition partition_direct(const IdncSolution& solution, int g, const StateFeedbackMatrix& sfm);

/// Fills sub-generations one at a time, preferring the earliest remaining
/// set that does not raise the current W_max^m.
Partition partition_smart(const IdncSolution& solution, int g, const StateFeedbackMatrix& sfm);

/// Consecutive groups of g packets in column order.
Partition partition_classic(const StateFeedbackMatrix& sfm, int g);

struct AnalyticMetrics {
  int u_g = 0;                      // sum of W_max^m
  long long delay_sum = 0;          // sum of u_{n,k}
  int total_targets = 0;            // sum of T_k
  std::vector<int> per_subgen_wmax; // in partition order

  double d_g() const noexcept {
    return total_targets == 0 ? 0.0 : static_cast<double>(delay_sum) / total_targets;
  }
};

/// Positions of the sub-generations in sending order: repeatedly the one
/// serving the most (receiver, packet) pairs not served by an earlier one,
/// ties to the lower position. Without shared packets this is a stable sort
/// by descending target count. Both the analytic metrics and the
/// transmission strategies send in this order.
std::vector<int> broadcast_order(const Partition& partition, const StateFeedbackMatrix& sfm);

/// U_g and D_g assuming no erasures and block decoding per sub-generation:
/// receiver n decodes its wanted packets of G_m once the W_n^m-th coded
/// packet of G_m arrives. A packet in several sub-generations counts at
/// its earliest decode.
AnalyticMetrics analytic_metrics(const Partition& partition, const StateFeedbackMatrix& sfm);

/// Number of member sets containing a column across the partition.
int diversity(const Partition& partition, int column, const StateFeedbackMatrix& sfm);
int max_diversity(const Partition& partition);

/// One line per sub-generation: `m: [set indices] packets=[...] wmax=w`.
std::string format_partition(const Partition& partition, const StateFeedbackMatrix& sfm);

}  // namespace sgnc
