#pragma once

// Packet demand state after the systematic phase, the erasure channel and
// the systematic phase itself.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sgnc {

/// Binary receiver x packet demand matrix. Entry (n, k) is set when
/// receiver n still wants the packet in column k. Columns carry the original
/// (1-based) packet indices in `packet_ids()`.
///
/// A default-constructed matrix is the empty marker produced when the
/// systematic phase left nothing to code.
class StateFeedbackMatrix {
 public:
  StateFeedbackMatrix() = default;

  /// Validates and builds a reduced matrix: equal row lengths, 0/1 entries,
  /// no all-zero row or column, distinct positive packet ids. Empty
  /// `packet_ids` means 1..K.
  static StateFeedbackMatrix from_rows(const std::vector<std::vector<int>>& rows,
                                       std::vector<int> packet_ids = {});

  int receivers() const noexcept { return receivers_; }
  int packets() const noexcept { return packets_; }
  bool empty() const noexcept { return receivers_ == 0; }

  bool wants(int receiver, int column) const {
    return cells_[static_cast<std::size_t>(receiver) * packets_ + column] != 0;
  }
  std::span<const std::uint8_t> row(int receiver) const {
    return {cells_.data() + static_cast<std::size_t>(receiver) * packets_,
            static_cast<std::size_t>(packets_)};
  }

  const std::vector<int>& packet_ids() const noexcept { return packet_ids_; }
  int packet_id(int column) const { return packet_ids_.at(column); }
  /// Column of an original packet index; throws UnknownPacket.
  int column_of(int packet_id) const;

  /// Columns wanted by a receiver (the Wants set), ascending.
  std::vector<int> wants_set(int receiver) const;
  /// Receivers wanting a column (the Target set), ascending.
  std::vector<int> target_set(int column) const;

  friend bool operator==(const StateFeedbackMatrix&, const StateFeedbackMatrix&) = default;

 private:
  int receivers_ = 0;
  int packets_ = 0;
  std::vector<std::uint8_t> cells_;
  std::vector<int> packet_ids_;
};

inline StateFeedbackMatrix sfm_from_rows(const std::vector<std::vector<int>>& rows,
                                         std::vector<int> packet_ids = {}) {
  return StateFeedbackMatrix::from_rows(rows, std::move(packet_ids));
}

struct DemandProfile {
  std::vector<int> wants_sizes;   // W_n
  int w_max = 0;
  std::vector<int> target_sizes;  // T_k
  int total_targets = 0;
};

DemandProfile demand_profile(const StateFeedbackMatrix& sfm);

/// i.i.d. memoryless erasures, one Bernoulli draw per (receiver, stream,
/// index). Stream 0 is the systematic phase; coded sub-generations use their
/// own streams. Feedback is lossless and free.
struct ErasureChannel {
  double erasure_prob = 0.0;
  std::uint64_t seed = 0;
  /// Optional per-receiver override (indexed by original receiver index).
  std::vector<double> per_receiver_prob;

  double prob(int receiver) const;
  bool erased(int receiver, std::uint64_t stream, std::uint64_t index) const;
  void validate() const;
};

struct SystematicOutcome {
  StateFeedbackMatrix sfm;        // empty when every receiver got everything
  int k_total = 0;
  int n_total = 0;
  std::vector<int> receiver_ids;  // original (1-based) index of each SFM row

  bool coded_phase_needed() const noexcept { return !sfm.empty(); }
  /// The SFM, or DegenerateOutcome when nothing was missed.
  const StateFeedbackMatrix& require_coded_phase() const;
};

/// Sends K_T packets uncoded once to N_T receivers and reduces the result to
/// the receivers and packets that still need coding.
SystematicOutcome run_systematic(int k_total, int n_total, const ErasureChannel& channel);

/// Text format: optional "packets: i1 i2 ..." line, a "N K" line, then N
/// rows of K space-separated 0/1 entries. '#' starts a comment.
StateFeedbackMatrix parse_sfm(std::istream& in);
StateFeedbackMatrix parse_sfm(const std::string& text);
StateFeedbackMatrix load_sfm(const std::string& path);
std::string format_sfm(const StateFeedbackMatrix& sfm);

}  // namespace sgnc
