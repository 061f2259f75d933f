#pragma once

// Coded transmission phase under erasures: Sequential and Semi-online
// strategies, sub-generation merging and measured metrics.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgnc/model.hpp"
#include "sgnc/partition.hpp"

namespace sgnc {

enum class Strategy { sequential, semi_online };
enum class DecodeMode { idealized, concrete_gf };

struct StrategyConfig {
  Strategy strategy = Strategy::sequential;
  bool merging = false;            // semi-online only
  std::vector<int> g_schedule;     // sequential only; last entry repeats
  DecodeMode decode_mode = DecodeMode::idealized;
  int field_bits = 8;              // for sub-generations of two or more sets
  std::size_t payload_bytes = 32;  // concrete mode
  bool record_trace = false;
  long long max_slots = 1'000'000;

  /// Throws ConfigError on inconsistent combinations.
  void validate() const;
};

struct ReceiverEvent {
  int receiver = 0;                  // SFM row
  bool received = false;
  std::vector<int> decoded_packets;  // columns decoded in this slot
};

struct SlotEvent {
  long long slot = 0;  // 1-based within the coded phase
  int round = 0;
  int subgen = 0;
  int field_bits = 1;
  std::vector<ReceiverEvent> receivers;  // targeted receivers only
};

struct RoundInfo {
  int round = 0;
  long long first_slot = 0;
  long long last_slot = 0;
  std::vector<int> subgens;     // labels sent in this round, in order
  std::vector<int> field_bits;  // one per entry of `subgens`
};

struct MergeRecord {
  int round = 0;               // merge applied after this round
  int wmax_sum_before = 0;
  int wmax_sum_after = 0;
  int groups_before = 0;
  int groups_after = 0;
};

struct TransmissionLog {
  int receivers = 0;
  int packets = 0;
  std::vector<SlotEvent> slots;  // filled when record_trace is set
  std::vector<RoundInfo> rounds;
  std::vector<MergeRecord> merges;
  long long slots_sent = 0;
  /// decode_slot[n * packets + k]: 0 when not wanted, -1 while pending.
  std::vector<long long> decode_slot;
  long long non_innovative = 0;  // concrete mode: received but rank unchanged
  bool complete = false;

  long long decode_time(int receiver, int column) const {
    return decode_slot[static_cast<std::size_t>(receiver) * packets + column];
  }
};

TransmissionLog run_sequential(const Partition& partition, const StateFeedbackMatrix& sfm,
                               const ErasureChannel& channel, const StrategyConfig& config);
TransmissionLog run_semi_online(const Partition& partition, const StateFeedbackMatrix& sfm,
                                const ErasureChannel& channel, const StrategyConfig& config);
/// Dispatches on config.strategy.
TransmissionLog run_strategy(const Partition& partition, const StateFeedbackMatrix& sfm,
                             const ErasureChannel& channel, const StrategyConfig& config);

struct MergePlan {
  std::vector<std::vector<int>> groups;  // live sub-generation indices
  std::vector<int> group_wmax;
  int wmax_sum_before = 0;
  int wmax_sum_after = 0;
};

/// remaining[m][n] is the number of coded packets receiver n still needs
/// from sub-generation m. Sub-generations with no remaining demand are
/// dropped; the rest are grouped greedily (descending W_max, then index)
/// so that no receiver has demand in two members of a group.
MergePlan merge_subgenerations(const std::vector<std::vector<int>>& remaining);

struct Measurement {
  long long completion_slots = 0;
  long long delay_sum = 0;
  int total_targets = 0;

  double avg_delay() const noexcept {
    return total_targets == 0 ? 0.0 : static_cast<double>(delay_sum) / total_targets;
  }
};

/// Throws IncompleteLog when a wanted packet was never decoded.
Measurement measure(const TransmissionLog& log);

/// CSV rows `slot,round,subgen,receiver,received,decoded_packets`; receivers
/// and packets are reported by their 1-based ids, packets joined with ';'.
void write_trace_csv(std::ostream& out, const TransmissionLog& log, const StateFeedbackMatrix& sfm);

std::string to_string(Strategy s);
std::string to_string(DecodeMode m);
Strategy parse_strategy(const std::string& text);
DecodeMode parse_decode_mode(const std::string& text);

}  // namespace sgnc
