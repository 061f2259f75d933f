#include "sgnc/idnc.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "sgnc/error.hpp"

namespace sgnc {

IdncGraph::IdncGraph(const StateFeedbackMatrix& sfm) : vertices_(sfm.packets()) {
  const auto k = static_cast<std::size_t>(vertices_);
  adjacency_.assign(k * k, 1);
  for (std::size_t i = 0; i < k; ++i) adjacency_[i * k + i] = 0;
  for (int n = 0; n < sfm.receivers(); ++n) {
    const auto wants = sfm.wants_set(n);
    for (std::size_t a = 0; a < wants.size(); ++a) {
      for (std::size_t b = a + 1; b < wants.size(); ++b) {
        adjacency_[wants[a] * k + wants[b]] = 0;
        adjacency_[wants[b] * k + wants[a]] = 0;
      }
    }
  }
}

bool IdncGraph::is_clique(std::span<const int> packets) const {
  for (std::size_t a = 0; a < packets.size(); ++a)
    for (std::size_t b = a + 1; b < packets.size(); ++b)
      if (!adjacent(packets[a], packets[b])) return false;
  return true;
}

int IdncGraph::edge_count() const {
  int edges = 0;
  for (int i = 0; i < vertices_; ++i)
    for (int j = i + 1; j < vertices_; ++j) edges += adjacent(i, j) ? 1 : 0;
  return edges;
}

IdncGraph build_graph(const StateFeedbackMatrix& sfm) { return IdncGraph(sfm); }

bool CodingSet::contains(int column) const {
  return std::binary_search(packets.begin(), packets.end(), column);
}

CodingSet make_coding_set(std::vector<int> packets, const StateFeedbackMatrix& sfm) {
  std::sort(packets.begin(), packets.end());
  packets.erase(std::unique(packets.begin(), packets.end()), packets.end());
  CodingSet set;
  for (int k : packets) {
    if (k < 0 || k >= sfm.packets()) throw UnknownPacket("column " + std::to_string(k) + " out of range");
    for (int n = 0; n < sfm.receivers(); ++n) set.targets += sfm.wants(n, k) ? 1 : 0;
  }
  set.packets = std::move(packets);
  return set;
}

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(int i) { return Mask{1} << i; }

std::vector<int> columns_of(Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

/// Bitmask view of a small instance.
struct MaskInstance {
  int k = 0;
  Mask all = 0;
  std::vector<Mask> compatible;  // IDNC graph neighbours
  std::vector<Mask> conflicts;   // complement graph neighbours
  std::vector<Mask> wants;       // one per receiver
  std::vector<int> targets;      // T_k

  MaskInstance(const IdncGraph& graph, const StateFeedbackMatrix& sfm) : k(graph.vertices()) {
    all = k == 64 ? ~Mask{0} : bit(k) - 1;
    compatible.assign(k, 0);
    conflicts.assign(k, 0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (graph.adjacent(i, j)) compatible[i] |= bit(j);
        else if (i != j) conflicts[i] |= bit(j);
      }
    }
    for (int n = 0; n < sfm.receivers(); ++n) {
      Mask w = 0;
      for (int c : sfm.wants_set(n)) w |= bit(c);
      wants.push_back(w);
    }
    targets.assign(k, 0);
    for (int c = 0; c < k; ++c)
      for (int n = 0; n < sfm.receivers(); ++n) targets[c] += sfm.wants(n, c) ? 1 : 0;
  }

  /// Packets that must land in distinct sets: the largest single Wants set
  /// or a greedy clique of the conflict graph, whichever is larger.
  int lower_bound(Mask uncovered) const {
    int best = 0;
    for (Mask w : wants) best = std::max(best, std::popcount(w & uncovered));
    Mask picked = 0;
    int size = 0;
    for (Mask m = uncovered; m; m &= m - 1) {
      const int p = std::countr_zero(m);
      if ((picked & ~conflicts[p]) == 0) {
        picked |= bit(p);
        ++size;
      }
    }
    return std::max(best, size);
  }
};

/// DSATUR branch and bound for the chromatic number of the conflict graph.
class DsaturSearch {
 public:
  DsaturSearch(const MaskInstance& inst, int lower) : inst_(inst), lower_(lower), best_(inst.k) {
    classes_.assign(inst.k + 1, 0);
  }

  int run() {
    if (inst_.k == 0) return 0;
    search(inst_.all, 0);
    return best_;
  }

 private:
  void search(Mask uncolored, int used) {
    if (done_) return;
    if (uncolored == 0) {
      best_ = used;
      done_ = best_ <= lower_;
      return;
    }
    int v = -1;
    int v_sat = -1;
    int v_deg = -1;
    for (Mask m = uncolored; m; m &= m - 1) {
      const int u = std::countr_zero(m);
      int sat = 0;
      for (int c = 0; c < used; ++c) sat += (classes_[c] & inst_.conflicts[u]) ? 1 : 0;
      const int deg = std::popcount(inst_.conflicts[u] & uncolored);
      if (sat > v_sat || (sat == v_sat && deg > v_deg)) {
        v = u;
        v_sat = sat;
        v_deg = deg;
      }
    }
    const Mask rest = uncolored & ~bit(v);
    for (int c = 0; c < used; ++c) {
      if (classes_[c] & inst_.conflicts[v]) continue;
      classes_[c] |= bit(v);
      search(rest, used);
      classes_[c] &= ~bit(v);
      if (done_) return;
    }
    if (used + 1 < best_) {
      classes_[used] = bit(v);
      search(rest, used + 1);
      classes_[used] = 0;
    }
  }

  const MaskInstance& inst_;
  int lower_;
  int best_;
  bool done_ = false;
  std::vector<Mask> classes_;
};

/// Bron-Kerbosch with pivoting over the IDNC graph.
void maximal_cliques(const MaskInstance& inst, Mask r, Mask p, Mask x, std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  int pivot = -1;
  int pivot_deg = -1;
  for (Mask m = p | x; m; m &= m - 1) {
    const int u = std::countr_zero(m);
    const int deg = std::popcount(p & inst.compatible[u]);
    if (deg > pivot_deg) {
      pivot = u;
      pivot_deg = deg;
    }
  }
  for (Mask m = p & ~inst.compatible[pivot]; m; m &= m - 1) {
    const int v = std::countr_zero(m);
    maximal_cliques(inst, r | bit(v), p & inst.compatible[v], x & inst.compatible[v], out);
    p &= ~bit(v);
    x |= bit(v);
  }
}

/// Depth-limited search for a cover by `budget` maximal cliques. Branches on
/// the most constrained uncovered packet and tries cliques by descending
/// targets of the packets they newly cover, then lexicographically.
class CoverSearch {
 public:
  CoverSearch(const MaskInstance& inst, std::vector<Mask> cliques)
      : inst_(inst), cliques_(std::move(cliques)), by_packet_(inst.k) {
    for (std::size_t c = 0; c < cliques_.size(); ++c)
      for (int p : columns_of(cliques_[c])) by_packet_[p].push_back(static_cast<int>(c));
  }

  std::optional<std::vector<Mask>> find(int budget) {
    chosen_.clear();
    failed_.clear();
    if (!dfs(0, budget)) return std::nullopt;
    std::vector<Mask> out;
    for (int c : chosen_) out.push_back(cliques_[c]);
    return out;
  }

 private:
  struct Candidate {
    int clique;
    Mask fresh;
    int gain;
    std::vector<int> packets;
  };

  bool dfs(Mask covered, int remaining) {
    if (covered == inst_.all) return true;
    if (remaining == 0) return false;
    const Mask uncovered = inst_.all & ~covered;
    if (inst_.lower_bound(uncovered) > remaining) return false;
    if (auto it = failed_.find(covered); it != failed_.end() && it->second >= remaining) return false;

    int pivot = -1;
    for (Mask m = uncovered; m; m &= m - 1) {
      const int p = std::countr_zero(m);
      if (pivot < 0 || by_packet_[p].size() < by_packet_[pivot].size() ||
          (by_packet_[p].size() == by_packet_[pivot].size() && inst_.targets[p] > inst_.targets[pivot]))
        pivot = p;
    }

    for (const auto& cand : candidates(pivot, uncovered)) {
      chosen_.push_back(cand.clique);
      if (dfs(covered | cliques_[cand.clique], remaining - 1)) return true;
      chosen_.pop_back();
    }
    auto& known = failed_[covered];
    known = std::max(known, remaining);
    return false;
  }

  std::vector<Candidate> candidates(int pivot, Mask uncovered) const {
    std::vector<Candidate> all;
    for (int c : by_packet_[pivot]) {
      Candidate cand{c, cliques_[c] & uncovered, 0, columns_of(cliques_[c])};
      for (Mask m = cand.fresh; m; m &= m - 1) cand.gain += inst_.targets[std::countr_zero(m)];
      all.push_back(std::move(cand));
    }
    std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
      if (a.gain != b.gain) return a.gain > b.gain;
      return a.packets < b.packets;
    });
    // A clique whose fresh packets are covered by another candidate's fresh
    // packets cannot do better than that candidate.
    std::vector<Candidate> kept;
    for (std::size_t i = 0; i < all.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
        if (i == j) continue;
        const bool subset = (all[i].fresh & ~all[j].fresh) == 0;
        dominated = subset && (all[i].fresh != all[j].fresh || j < i);
      }
      if (!dominated) kept.push_back(all[i]);
    }
    return kept;
  }

  const MaskInstance& inst_;
  std::vector<Mask> cliques_;
  std::vector<std::vector<int>> by_packet_;
  std::vector<int> chosen_;
  std::unordered_map<Mask, int> failed_;
};

void check_exact_size(const IdncGraph& graph, int max_vertices) {
  const int limit = std::min(max_vertices, 64);
  if (graph.vertices() > limit)
    throw SizeLimitExceeded(std::to_string(graph.vertices()) + " packets exceed the exact solver limit of " +
                            std::to_string(limit));
}

}  // namespace

int conflict_chromatic_number(const IdncGraph& graph, const StateFeedbackMatrix& sfm) {
  check_exact_size(graph, 64);
  const MaskInstance inst(graph, sfm);
  DsaturSearch search(inst, inst.lower_bound(inst.all));
  return search.run();
}

IdncSolution solve_exact(const IdncGraph& graph, const StateFeedbackMatrix& sfm, int max_vertices) {
  check_exact_size(graph, max_vertices);
  if (graph.vertices() != sfm.packets()) throw DimensionMismatch("graph does not match matrix");
  const MaskInstance inst(graph, sfm);
  DsaturSearch coloring(inst, inst.lower_bound(inst.all));
  const int chromatic = coloring.run();

  std::vector<Mask> cliques;
  maximal_cliques(inst, 0, inst.all, 0, cliques);
  CoverSearch cover(inst, std::move(cliques));
  auto found = cover.find(chromatic);
  if (!found) throw std::logic_error("no maximal clique cover matches the chromatic number");

  IdncSolution solution;
  for (Mask m : *found) solution.sets.push_back(make_coding_set(columns_of(m), sfm));
  sort_by_targets(solution, sfm);
  return solution;
}

IdncSolution solve_heuristic(const IdncGraph& graph, const StateFeedbackMatrix& sfm) {
  const int k = graph.vertices();
  const auto profile = demand_profile(sfm);
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return profile.target_sizes[a] > profile.target_sizes[b]; });

  auto fits = [&](const std::vector<int>& set, int p) {
    return std::all_of(set.begin(), set.end(), [&](int q) { return q != p && graph.adjacent(p, q); });
  };

  std::vector<bool> covered(k, false);
  IdncSolution solution;
  for (int seed : order) {
    if (covered[seed]) continue;
    std::vector<int> set{seed};
    for (int p : order)
      if (!covered[p] && fits(set, p)) set.push_back(p);
    for (int p : order)
      if (covered[p] && fits(set, p)) set.push_back(p);
    for (int p : set) covered[p] = true;
    solution.sets.push_back(make_coding_set(std::move(set), sfm));
  }
  sort_by_targets(solution, sfm);
  return solution;
}

IdncSolution solve(const IdncGraph& graph, const StateFeedbackMatrix& sfm, int max_vertices) {
  if (graph.vertices() <= std::min(max_vertices, 64)) return solve_exact(graph, sfm, max_vertices);
  return solve_heuristic(graph, sfm);
}

IdncSolution reduce_diversity(const IdncSolution& solution, const StateFeedbackMatrix& sfm) {
  std::vector<bool> seen(sfm.packets(), false);
  IdncSolution out;
  for (std::size_t i = 0; i < solution.sets.size(); ++i) {
    std::vector<int> kept;
    for (int p : solution.sets[i].packets) {
      if (!seen[p]) kept.push_back(p);
      seen[p] = true;
    }
    if (kept.empty())
      throw EmptySetProduced("coding set " + std::to_string(i + 1) + " is covered by earlier sets");
    out.sets.push_back(make_coding_set(std::move(kept), sfm));
  }
  return out;
}

int diversity(const IdncSolution& solution, int column, const StateFeedbackMatrix& sfm) {
  if (column < 0 || column >= sfm.packets()) throw UnknownPacket("column " + std::to_string(column) + " out of range");
  int count = 0;
  for (const auto& set : solution.sets) count += set.contains(column) ? 1 : 0;
  return count;
}

void sort_by_targets(IdncSolution& solution, const StateFeedbackMatrix& sfm) {
  std::vector<int> div(sfm.packets(), 0);
  for (const auto& set : solution.sets)
    for (int p : set.packets) ++div[p];
  const auto profile = demand_profile(sfm);
  auto exclusive = [&](const CodingSet& set) {
    int t = 0;
    for (int p : set.packets) t += div[p] == 1 ? profile.target_sizes[p] : 0;
    return t;
  };
  std::stable_sort(solution.sets.begin(), solution.sets.end(), [&](const CodingSet& a, const CodingSet& b) {
    if (a.targets != b.targets) return a.targets > b.targets;
    const int ea = exclusive(a);
    const int eb = exclusive(b);
    if (ea != eb) return ea > eb;
    return a.packets < b.packets;
  });
}

bool satisfies_coding_constraint(const StateFeedbackMatrix& sfm, std::span<const int> packets) {
  for (int n = 0; n < sfm.receivers(); ++n) {
    int wanted = 0;
    for (int p : packets) wanted += sfm.wants(n, p) ? 1 : 0;
    if (wanted > 1) return false;
  }
  return true;
}

bool is_valid_solution(const StateFeedbackMatrix& sfm, const IdncSolution& solution) {
  std::vector<bool> covered(sfm.packets(), false);
  for (const auto& set : solution.sets) {
    if (set.packets.empty() || !satisfies_coding_constraint(sfm, set.packets)) return false;
    for (int p : set.packets) covered[p] = true;
  }
  if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) return false;
  for (std::size_t a = 0; a < solution.sets.size(); ++a) {
    for (std::size_t b = a + 1; b < solution.sets.size(); ++b) {
      std::vector<int> merged;
      std::set_union(solution.sets[a].packets.begin(), solution.sets[a].packets.end(),
                     solution.sets[b].packets.begin(), solution.sets[b].packets.end(),
                     std::back_inserter(merged));
      if (satisfies_coding_constraint(sfm, merged)) return false;
    }
  }
  return true;
}

bool all_sets_maximal(const StateFeedbackMatrix& sfm, const IdncSolution& solution) {
  for (const auto& set : solution.sets) {
    for (int p = 0; p < sfm.packets(); ++p) {
      if (set.contains(p)) continue;
      auto grown = set.packets;
      grown.push_back(p);
      if (satisfies_coding_constraint(sfm, grown)) return false;
    }
  }
  return true;
}

std::string format_solution(const IdncSolution& solution, const StateFeedbackMatrix& sfm) {
  std::ostringstream out;
  for (const auto& set : solution.sets) {
    for (std::size_t i = 0; i < set.packets.size(); ++i) out << (i ? " " : "") << sfm.packet_id(set.packets[i]);
    out << '\n';
  }
  return out.str();
}

IdncSolution parse_solution(std::istream& in, const StateFeedbackMatrix& sfm) {
  IdncSolution solution;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ss(line);
    std::vector<int> cols;
    int id;
    while (ss >> id) cols.push_back(sfm.column_of(id));
    if (!ss.eof()) throw ParseError("bad packet id in solution line: " + line);
    if (!cols.empty()) solution.sets.push_back(make_coding_set(std::move(cols), sfm));
  }
  return solution;
}

}  // namespace sgnc
