#include "sgnc/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "sgnc/error.hpp"

namespace sgnc {

namespace {

void check_g(int g, int upper, const char* what) {
  if (g < 1 || g > upper)
    throw InvalidG("g=" + std::to_string(g) + " outside [1, " + std::to_string(upper) + "] (" + what + ")");
}

std::vector<int> union_of(const std::vector<CodingSet>& members) {
  std::vector<int> out;
  for (const auto& set : members) out.insert(out.end(), set.packets.begin(), set.packets.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int w_max_of(const std::vector<int>& packets, const StateFeedbackMatrix& sfm) {
  int best = 0;
  for (int n = 0; n < sfm.receivers(); ++n) {
    int w = 0;
    for (int p : packets) w += sfm.wants(n, p) ? 1 : 0;
    best = std::max(best, w);
  }
  return best;
}

}  // namespace

SubGeneration make_subgeneration(int index, std::vector<int> set_indices, std::vector<CodingSet> members,
                                 const StateFeedbackMatrix& sfm) {
  SubGeneration sg;
  sg.index = index;
  sg.set_indices = std::move(set_indices);
  sg.members = std::move(members);
  sg.packets = union_of(sg.members);
  sg.wants.assign(sfm.receivers(), 0);
  for (int n = 0; n < sfm.receivers(); ++n)
    for (int p : sg.packets) sg.wants[n] += sfm.wants(n, p) ? 1 : 0;
  sg.w_max = sg.wants.empty() ? 0 : *std::max_element(sg.wants.begin(), sg.wants.end());
  for (int p : sg.packets)
    for (int n = 0; n < sfm.receivers(); ++n) sg.targets += sfm.wants(n, p) ? 1 : 0;
  return sg;
}

Partition partition_direct(const IdncSolution& solution, int g, const StateFeedbackMatrix& sfm) {
  const int total = static_cast<int>(solution.cardinality());
  check_g(g, total, "number of coding sets");
  Partition out;
  out.g = g;
  for (int start = 0; start < total; start += g) {
    std::vector<int> idx;
    std::vector<CodingSet> members;
    for (int i = start; i < std::min(total, start + g); ++i) {
      idx.push_back(i + 1);
      members.push_back(solution.sets[i]);
    }
    out.subgens.push_back(make_subgeneration(out.count() + 1, std::move(idx), std::move(members), sfm));
  }
  return out;
}

Partition partition_smart(const IdncSolution& solution, int g, const StateFeedbackMatrix& sfm) {
  const int total = static_cast<int>(solution.cardinality());
  check_g(g, total, "number of coding sets");
  std::vector<int> remaining(total);
  std::iota(remaining.begin(), remaining.end(), 0);

  Partition out;
  out.g = g;
  while (!remaining.empty()) {
    std::vector<int> idx;
    std::vector<CodingSet> members;
    std::vector<int> packets;
    int w_max = 0;
    for (int slot = 0; slot < g && !remaining.empty(); ++slot) {
      auto pick = remaining.begin();
      int pick_wmax = -1;
      for (auto it = remaining.begin(); it != remaining.end(); ++it) {
        auto grown = packets;
        grown.insert(grown.end(), solution.sets[*it].packets.begin(), solution.sets[*it].packets.end());
        std::sort(grown.begin(), grown.end());
        grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
        const int w = w_max_of(grown, sfm);
        if (it == remaining.begin()) pick_wmax = w;
        if (w <= w_max) {
          pick = it;
          pick_wmax = w;
          break;
        }
      }
      const int chosen = *pick;
      remaining.erase(pick);
      idx.push_back(chosen + 1);
      members.push_back(solution.sets[chosen]);
      packets = union_of(members);
      w_max = pick_wmax;
    }
    out.subgens.push_back(make_subgeneration(out.count() + 1, std::move(idx), std::move(members), sfm));
  }
  return out;
}

Partition partition_classic(const StateFeedbackMatrix& sfm, int g) {
  const int k = sfm.packets();
  check_g(g, k, "number of packets");
  Partition out;
  out.g = g;
  out.mode = PartitionMode::classic;
  for (int start = 0; start < k; start += g) {
    std::vector<int> idx;
    std::vector<CodingSet> members;
    for (int c = start; c < std::min(k, start + g); ++c) {
      idx.push_back(sfm.packet_id(c));
      members.push_back(make_coding_set({c}, sfm));
    }
    out.subgens.push_back(make_subgeneration(out.count() + 1, std::move(idx), std::move(members), sfm));
  }
  return out;
}

std::vector<int> broadcast_order(const Partition& partition, const StateFeedbackMatrix& sfm) {
  std::vector<char> served(static_cast<std::size_t>(sfm.receivers()) * sfm.packets(), 0);
  auto fresh_targets = [&](const SubGeneration& sg) {
    int t = 0;
    for (int p : sg.packets)
      for (int n = 0; n < sfm.receivers(); ++n)
        t += sfm.wants(n, p) && !served[static_cast<std::size_t>(n) * sfm.packets() + p] ? 1 : 0;
    return t;
  };

  std::vector<int> order;
  std::vector<char> used(partition.subgens.size(), 0);
  for (std::size_t step = 0; step < partition.subgens.size(); ++step) {
    int best = -1, best_t = -1;
    for (std::size_t i = 0; i < partition.subgens.size(); ++i) {
      if (used[i]) continue;
      const int t = fresh_targets(partition.subgens[i]);
      if (t > best_t) {
        best = static_cast<int>(i);
        best_t = t;
      }
    }
    used[best] = 1;
    order.push_back(best);
    for (int p : partition.subgens[best].packets)
      for (int n = 0; n < sfm.receivers(); ++n)
        if (sfm.wants(n, p)) served[static_cast<std::size_t>(n) * sfm.packets() + p] = 1;
  }
  return order;
}

AnalyticMetrics analytic_metrics(const Partition& partition, const StateFeedbackMatrix& sfm) {
  AnalyticMetrics m;
  constexpr int kPending = std::numeric_limits<int>::max();
  std::vector<int> earliest(static_cast<std::size_t>(sfm.receivers()) * sfm.packets(), kPending);

  int offset = 0;
  for (int pos : broadcast_order(partition, sfm)) {
    const auto& sg = partition.subgens[pos];
    for (int n = 0; n < sfm.receivers(); ++n) {
      if (sg.wants[n] == 0) continue;
      const int u = offset + sg.wants[n];
      for (int p : sg.packets) {
        if (!sfm.wants(n, p)) continue;
        auto& slot = earliest[static_cast<std::size_t>(n) * sfm.packets() + p];
        slot = std::min(slot, u);
      }
    }
    offset += sg.w_max;
  }

  for (const auto& sg : partition.subgens) m.per_subgen_wmax.push_back(sg.w_max);
  m.u_g = offset;
  for (int n = 0; n < sfm.receivers(); ++n) {
    for (int p = 0; p < sfm.packets(); ++p) {
      if (!sfm.wants(n, p)) continue;
      const int u = earliest[static_cast<std::size_t>(n) * sfm.packets() + p];
      if (u == kPending) throw InvalidG("partition does not cover packet " + std::to_string(sfm.packet_id(p)));
      m.delay_sum += u;
      ++m.total_targets;
    }
  }
  return m;
}

int diversity(const Partition& partition, int column, const StateFeedbackMatrix& sfm) {
  if (column < 0 || column >= sfm.packets()) throw UnknownPacket("column " + std::to_string(column) + " out of range");
  int count = 0;
  for (const auto& sg : partition.subgens)
    for (const auto& set : sg.members) count += set.contains(column) ? 1 : 0;
  return count;
}

int max_diversity(const Partition& partition) {
  std::vector<int> counts;
  for (const auto& sg : partition.subgens) {
    for (const auto& set : sg.members) {
      for (int p : set.packets) {
        if (static_cast<std::size_t>(p) >= counts.size()) counts.resize(p + 1, 0);
        ++counts[p];
      }
    }
  }
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

std::string format_partition(const Partition& partition, const StateFeedbackMatrix& sfm) {
  std::ostringstream out;
  for (const auto& sg : partition.subgens) {
    out << sg.index << ": [";
    for (std::size_t i = 0; i < sg.set_indices.size(); ++i) out << (i ? " " : "") << sg.set_indices[i];
    out << "] packets=[";
    for (std::size_t i = 0; i < sg.packets.size(); ++i) out << (i ? " " : "") << sfm.packet_id(sg.packets[i]);
    out << "] wmax=" << sg.w_max << '\n';
  }
  return out.str();
}

}  // namespace sgnc
