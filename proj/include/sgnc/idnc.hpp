#pragma once

// IDNC graph, coding sets and IDNC solutions (clique covers of the graph).

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sgnc/model.hpp"

namespace sgnc {

/// Packets are vertices; an edge joins two packets that no receiver wants
/// together (they may be XORed into one instantly decodable packet).
class IdncGraph {
 public:
  IdncGraph() = default;
  explicit IdncGraph(const StateFeedbackMatrix& sfm);

  int vertices() const noexcept { return vertices_; }
  bool adjacent(int i, int j) const {
    return adjacency_[static_cast<std::size_t>(i) * vertices_ + j] != 0;
  }
  bool conflict(int i, int j) const { return i != j && !adjacent(i, j); }
  bool is_clique(std::span<const int> packets) const;
  int edge_count() const;

 private:
  int vertices_ = 0;
  std::vector<std::uint8_t> adjacency_;
};

IdncGraph build_graph(const StateFeedbackMatrix& sfm);

/// Packets XORed together in one IDNC transmission; `targets` is T(u), the
/// sum of the packets' target-set sizes.
struct CodingSet {
  std::vector<int> packets;  // column indices, ascending
  int targets = 0;

  bool contains(int column) const;
  friend bool operator==(const CodingSet&, const CodingSet&) = default;
};

CodingSet make_coding_set(std::vector<int> packets, const StateFeedbackMatrix& sfm);

struct IdncSolution {
  std::vector<CodingSet> sets;

  std::size_t cardinality() const noexcept { return sets.size(); }
  friend bool operator==(const IdncSolution&, const IdncSolution&) = default;
};

/// Largest instance solve_exact accepts by default.
inline constexpr int kExactSolverLimit = 25;

/// Minimum clique cover with maximal coding sets. Cardinality equals the
/// chromatic number of the conflict graph. Throws SizeLimitExceeded above
/// `max_vertices` (at most 64).
IdncSolution solve_exact(const IdncGraph& graph, const StateFeedbackMatrix& sfm,
                         int max_vertices = kExactSolverLimit);

/// Greedy clique cover: seed with the uncovered packet of largest T_k, grow
/// with compatible packets by descending T_k, then maximalize.
IdncSolution solve_heuristic(const IdncGraph& graph, const StateFeedbackMatrix& sfm);

/// solve_exact when the instance fits, otherwise solve_heuristic.
IdncSolution solve(const IdncGraph& graph, const StateFeedbackMatrix& sfm,
                   int max_vertices = kExactSolverLimit);

/// Chromatic number of the conflict graph (DSATUR branch and bound).
int conflict_chromatic_number(const IdncGraph& graph, const StateFeedbackMatrix& sfm);

/// Drops every packet already covered by an earlier set. Throws
/// EmptySetProduced when a set vanishes.
IdncSolution reduce_diversity(const IdncSolution& solution, const StateFeedbackMatrix& sfm);

/// Number of sets containing a column; throws UnknownPacket.
int diversity(const IdncSolution& solution, int column, const StateFeedbackMatrix& sfm);

/// Broadcast order: descending T(u), then descending targets of packets
/// that appear in no other set, then ascending lowest packet index.
void sort_by_targets(IdncSolution& solution, const StateFeedbackMatrix& sfm);

/// At most one wanted packet per receiver.
bool satisfies_coding_constraint(const StateFeedbackMatrix& sfm, std::span<const int> packets);
/// Covers every packet, every set is a coding set, no two sets mergeable.
bool is_valid_solution(const StateFeedbackMatrix& sfm, const IdncSolution& solution);
/// No outside packet can be added to any set.
bool all_sets_maximal(const StateFeedbackMatrix& sfm, const IdncSolution& solution);

/// One line per set, space-separated original packet ids.
std::string format_solution(const IdncSolution& solution, const StateFeedbackMatrix& sfm);
IdncSolution parse_solution(std::istream& in, const StateFeedbackMatrix& sfm);

}  // namespace sgnc
