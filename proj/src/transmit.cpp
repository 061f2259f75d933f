#include "sgnc/transmit.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

#include "sgnc/error.hpp"
#include "sgnc/galois.hpp"
#include "sgnc/random.hpp"

namespace sgnc {

namespace {

constexpr std::uint64_t kScheduleStreamBase = std::uint64_t{1} << 31;
constexpr std::uint64_t kMergedStreamBase = std::uint64_t{1} << 32;

// A batch of packets coded together: an original sub-generation, a
// scheduled round of sets, or a merged group.
struct Group {
  int label = 0;
  std::uint64_t stream = 0;
  std::vector<int> packets;  // columns, ascending
  int member_sets = 0;
  int field_bits = 1;
  std::uint64_t sent = 0;
  std::vector<int> need;                   // per receiver
  std::vector<std::vector<int>> pending;   // decoder columns per receiver
  std::vector<std::optional<Decoder>> decoders;

  int max_need() const { return need.empty() ? 0 : *std::max_element(need.begin(), need.end()); }
};

class Simulation {
 public:
  Simulation(const StateFeedbackMatrix& sfm, const ErasureChannel& channel, const StrategyConfig& config)
      : sfm_(sfm), channel_(channel), config_(config) {
    log_.receivers = sfm.receivers();
    log_.packets = sfm.packets();
    log_.decode_slot.assign(static_cast<std::size_t>(sfm.receivers()) * sfm.packets(), 0);
    for (int n = 0; n < sfm.receivers(); ++n)
      for (int k = 0; k < sfm.packets(); ++k)
        if (sfm.wants(n, k)) slot_of(n, k) = -1;
    if (config.decode_mode == DecodeMode::concrete_gf) {
      payloads_.resize(sfm.packets());
      for (int k = 0; k < sfm.packets(); ++k) {
        payloads_[k].resize(config.payload_bytes);
        for (std::size_t b = 0; b < config.payload_bytes; ++b)
          payloads_[k][b] = static_cast<std::uint8_t>(
              hash_words(channel.seed, static_cast<std::uint64_t>(Domain::payload), k, b) & 0xFF);
      }
    }
  }

  Group make_group(int label, std::uint64_t stream, const std::vector<CodingSet>& members) const {
    Group g;
    g.label = label;
    g.stream = stream;
    g.member_sets = static_cast<int>(members.size());
    for (const auto& set : members) g.packets.insert(g.packets.end(), set.packets.begin(), set.packets.end());
    std::sort(g.packets.begin(), g.packets.end());
    g.packets.erase(std::unique(g.packets.begin(), g.packets.end()), g.packets.end());
    g.field_bits = g.member_sets == 1 ? 1 : config_.field_bits;
    const int n_rx = sfm_.receivers();
    g.need.assign(n_rx, 0);
    g.pending.assign(n_rx, {});
    g.decoders.resize(n_rx);
    for (int n = 0; n < n_rx; ++n) {
      for (int p : g.packets)
        if (sfm_.wants(n, p)) g.pending[n].push_back(p);
      g.need[n] = static_cast<int>(g.pending[n].size());
      reset_decoder(g, n);
    }
    return g;
  }

  /// Merges live groups; receivers with demand in one member keep its
  /// decoder state.
  Group merge(const std::vector<Group*>& members, int label, std::uint64_t stream) const {
    Group g;
    g.label = label;
    g.stream = stream;
    const int n_rx = sfm_.receivers();
    g.need.assign(n_rx, 0);
    g.pending.assign(n_rx, {});
    g.decoders.resize(n_rx);
    for (const Group* m : members) {
      g.member_sets += m->member_sets;
      g.packets.insert(g.packets.end(), m->packets.begin(), m->packets.end());
    }
    std::sort(g.packets.begin(), g.packets.end());
    g.packets.erase(std::unique(g.packets.begin(), g.packets.end()), g.packets.end());
    g.field_bits = g.member_sets == 1 ? 1 : config_.field_bits;
    for (int n = 0; n < n_rx; ++n) {
      for (Group* m : members) {
        if (m->need[n] == 0) continue;
        g.need[n] += m->need[n];
        g.pending[n].insert(g.pending[n].end(), m->pending[n].begin(), m->pending[n].end());
        if (m->decoders[n] && m->field_bits == g.field_bits) g.decoders[n] = std::move(m->decoders[n]);
      }
      if (g.need[n] > 0 && !g.decoders[n]) reset_decoder(g, n);
    }
    return g;
  }

  void transmit(Group& g, int round) {
    const std::uint64_t t = g.sent++;
    const long long slot = ++log_.slots_sent;
    if (slot > config_.max_slots) throw Error("slot cap of " + std::to_string(config_.max_slots) + " exceeded");

    const bool concrete = config_.decode_mode == DecodeMode::concrete_gf;
    const Field& field = Field::get(g.field_bits);
    std::vector<Element> coeffs(g.packets.size(), 1);
    Payload coded;
    if (g.member_sets > 1) {
      for (std::size_t i = 0; i < g.packets.size(); ++i)
        coeffs[i] = field.element_from(
            hash_words(channel_.seed, static_cast<std::uint64_t>(Domain::coefficient), g.stream, t, g.packets[i]));
    }
    if (concrete) {
      coded.assign(config_.payload_bytes, 0);
      for (std::size_t i = 0; i < g.packets.size(); ++i)
        field.mul_add_region(coded, payloads_[g.packets[i]], coeffs[i]);
    }

    SlotEvent event;
    event.slot = slot;
    event.round = round;
    event.subgen = g.label;
    event.field_bits = g.field_bits;
    for (int n = 0; n < sfm_.receivers(); ++n) {
      if (g.need[n] == 0) continue;
      ReceiverEvent rx;
      rx.receiver = n;
      rx.received = !channel_.erased(n, g.stream, t);
      if (rx.received) {
        if (concrete) {
          if (absorb(g, n, field, coeffs, coded)) --g.need[n];
          else ++log_.non_innovative;
        } else {
          --g.need[n];
        }
        if (g.need[n] == 0) {
          if (concrete) verify(g, n);
          for (int p : g.pending[n]) {
            auto& s = slot_of(n, p);
            if (s == -1) {
              s = slot;
              rx.decoded_packets.push_back(p);
            }
          }
          std::sort(rx.decoded_packets.begin(), rx.decoded_packets.end());
          g.decoders[n].reset();
        }
      }
      event.receivers.push_back(std::move(rx));
    }
    if (config_.record_trace) log_.slots.push_back(std::move(event));
  }

  /// Sends every live group its largest remaining need, in order. With
  /// `until_done` a group keeps sending until every targeted receiver ACKs.
  void run_round(std::vector<Group*> groups, int round, bool until_done = false) {
    RoundInfo info;
    info.round = round;
    info.first_slot = log_.slots_sent + 1;
    for (Group* g : groups) {
      if (g->max_need() == 0) continue;
      do {
        const int r = g->max_need();
        for (int i = 0; i < r; ++i) transmit(*g, round);
      } while (until_done && g->max_need() > 0);
      info.subgens.push_back(g->label);
      info.field_bits.push_back(g->field_bits);
    }
    info.last_slot = log_.slots_sent;
    if (!info.subgens.empty()) log_.rounds.push_back(std::move(info));
  }

  TransmissionLog finish() {
    log_.complete = std::none_of(log_.decode_slot.begin(), log_.decode_slot.end(), [](long long s) { return s < 0; });
    return std::move(log_);
  }

  TransmissionLog& log() { return log_; }

 private:
  long long& slot_of(int n, int column) {
    return log_.decode_slot[static_cast<std::size_t>(n) * sfm_.packets() + column];
  }

  void reset_decoder(Group& g, int n) const {
    if (config_.decode_mode != DecodeMode::concrete_gf || g.need[n] == 0) return;
    g.decoders[n].emplace(Field::get(g.field_bits), static_cast<int>(g.pending[n].size()), config_.payload_bytes);
  }

  // The receiver holds every packet of the group outside its decoder columns
  // and strips them from the payload before elimination.
  bool absorb(Group& g, int n, const Field& field, const std::vector<Element>& coeffs, const Payload& coded) {
    const auto& cols = g.pending[n];
    std::vector<Element> row(cols.size(), 0);
    Payload payload = coded;
    for (std::size_t i = 0; i < g.packets.size(); ++i) {
      const int p = g.packets[i];
      auto it = std::find(cols.begin(), cols.end(), p);
      if (it != cols.end()) row[it - cols.begin()] = coeffs[i];
      else field.mul_add_region(payload, payloads_[p], coeffs[i]);
    }
    return g.decoders[n]->add(row, payload);
  }

  void verify(const Group& g, int n) const {
    const auto& dec = *g.decoders[n];
    for (std::size_t i = 0; i < g.pending[n].size(); ++i) {
      auto got = dec.decoded(static_cast<int>(i));
      const auto& want = payloads_[g.pending[n][i]];
      if (!std::equal(got.begin(), got.end(), want.begin(), want.end()))
        throw InconsistentSystem("decoded payload differs from the source packet");
    }
  }

  const StateFeedbackMatrix& sfm_;
  const ErasureChannel& channel_;
  const StrategyConfig& config_;
  std::vector<Payload> payloads_;
  TransmissionLog log_;
};

void check_inputs(const Partition& partition, const ErasureChannel& channel, const StrategyConfig& config) {
  config.validate();
  channel.validate();
  bool multi_set = std::any_of(partition.subgens.begin(), partition.subgens.end(),
                               [](const SubGeneration& sg) { return sg.members.size() >= 2; });
  multi_set = multi_set || std::any_of(config.g_schedule.begin(), config.g_schedule.end(), [](int g) { return g >= 2; });
  if (multi_set && max_diversity(partition) > 1)
    throw NonReducedDiversity("packets appear in several coding sets; reduce diversity before grouping sets");
}

}  // namespace

void StrategyConfig::validate() const {
  if (merging && strategy != Strategy::semi_online) throw ConfigError("merging requires the semi-online strategy");
  if (!g_schedule.empty() && strategy != Strategy::sequential)
    throw ConfigError("a g schedule requires the sequential strategy");
  for (int g : g_schedule)
    if (g < 1) throw ConfigError("g schedule entries must be positive");
  if (field_bits != 1 && field_bits != 2 && field_bits != 4 && field_bits != 8)
    throw ConfigError("field bits must be 1, 2, 4 or 8");
  if (decode_mode == DecodeMode::concrete_gf && payload_bytes == 0) throw ConfigError("payload must be non-empty");
  if (max_slots < 1) throw ConfigError("slot cap must be positive");
}

TransmissionLog run_sequential(const Partition& partition, const StateFeedbackMatrix& sfm,
                               const ErasureChannel& channel, const StrategyConfig& config) {
  check_inputs(partition, channel, config);
  Simulation sim(sfm, channel, config);
  const auto order = broadcast_order(partition, sfm);

  if (config.g_schedule.empty()) {
    int round = 0;
    for (int pos : order) {
      const auto& sg = partition.subgens[pos];
      Group g = sim.make_group(sg.index, static_cast<std::uint64_t>(sg.index), sg.members);
      sim.run_round({&g}, ++round, true);
    }
    return sim.finish();
  }

  std::vector<CodingSet> flat;
  for (int pos : order)
    for (const auto& set : partition.subgens[pos].members) flat.push_back(set);
  std::size_t next = 0;
  for (int round = 1; next < flat.size(); ++round) {
    const auto idx = std::min<std::size_t>(round - 1, config.g_schedule.size() - 1);
    const auto take = std::min<std::size_t>(config.g_schedule[idx], flat.size() - next);
    std::vector<CodingSet> members(flat.begin() + next, flat.begin() + next + take);
    next += take;
    Group g = sim.make_group(round, kScheduleStreamBase + round, members);
    sim.run_round({&g}, round, true);
  }
  return sim.finish();
}

TransmissionLog run_semi_online(const Partition& partition, const StateFeedbackMatrix& sfm,
                                const ErasureChannel& channel, const StrategyConfig& config) {
  check_inputs(partition, channel, config);
  Simulation sim(sfm, channel, config);

  std::vector<Group> live;
  for (int pos : broadcast_order(partition, sfm)) {
    const auto& sg = partition.subgens[pos];
    live.push_back(sim.make_group(sg.index, static_cast<std::uint64_t>(sg.index), sg.members));
  }

  std::uint64_t merged_count = 0;
  int next_label = partition.count() + 1;
  for (int round = 1; !live.empty(); ++round) {
    std::vector<Group*> ptrs;
    for (auto& g : live) ptrs.push_back(&g);
    sim.run_round(ptrs, round);
    live.erase(std::remove_if(live.begin(), live.end(), [](const Group& g) { return g.max_need() == 0; }), live.end());
    if (!config.merging || live.size() < 2) continue;

    std::vector<std::vector<int>> remaining;
    for (const auto& g : live) remaining.push_back(g.need);
    const MergePlan plan = merge_subgenerations(remaining);
    MergeRecord record;
    record.round = round;
    record.wmax_sum_before = plan.wmax_sum_before;
    record.wmax_sum_after = plan.wmax_sum_after;
    record.groups_before = static_cast<int>(live.size());
    record.groups_after = static_cast<int>(plan.groups.size());
    if (record.groups_after == record.groups_before) continue;
    sim.log().merges.push_back(record);

    std::vector<Group> merged;
    for (const auto& members : plan.groups) {
      if (members.size() == 1) {
        merged.push_back(std::move(live[members.front()]));
        continue;
      }
      std::vector<Group*> parts;
      for (int i : members) parts.push_back(&live[i]);
      merged.push_back(sim.merge(parts, next_label++, kMergedStreamBase + merged_count++));
    }
    live = std::move(merged);
  }
  return sim.finish();
}

TransmissionLog run_strategy(const Partition& partition, const StateFeedbackMatrix& sfm,
                             const ErasureChannel& channel, const StrategyConfig& config) {
  return config.strategy == Strategy::sequential ? run_sequential(partition, sfm, channel, config)
                                                 : run_semi_online(partition, sfm, channel, config);
}

MergePlan merge_subgenerations(const std::vector<std::vector<int>>& remaining) {
  MergePlan plan;
  std::vector<int> live;
  std::vector<int> wmax(remaining.size(), 0);
  for (std::size_t m = 0; m < remaining.size(); ++m) {
    for (int r : remaining[m]) wmax[m] = std::max(wmax[m], r);
    if (wmax[m] > 0) {
      live.push_back(static_cast<int>(m));
      plan.wmax_sum_before += wmax[m];
    }
  }
  std::vector<int> order = live;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return wmax[a] > wmax[b]; });

  std::vector<std::vector<int>> load;
  for (int m : order) {
    const auto& need = remaining[m];
    std::size_t target = plan.groups.size();
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
      bool clash = false;
      for (std::size_t n = 0; n < need.size() && !clash; ++n) clash = need[n] > 0 && load[gi][n] > 0;
      if (!clash) {
        target = gi;
        break;
      }
    }
    if (target == plan.groups.size()) {
      plan.groups.emplace_back();
      load.emplace_back(need.size(), 0);
    }
    plan.groups[target].push_back(m);
    for (std::size_t n = 0; n < need.size(); ++n) load[target][n] += need[n];
  }

  std::vector<std::size_t> by_first(plan.groups.size());
  for (std::size_t i = 0; i < by_first.size(); ++i) {
    std::sort(plan.groups[i].begin(), plan.groups[i].end());
    by_first[i] = i;
  }
  std::sort(by_first.begin(), by_first.end(),
            [&](std::size_t a, std::size_t b) { return plan.groups[a].front() < plan.groups[b].front(); });
  std::vector<std::vector<int>> sorted_groups;
  for (std::size_t i : by_first) {
    sorted_groups.push_back(plan.groups[i]);
    const int w = load[i].empty() ? 0 : *std::max_element(load[i].begin(), load[i].end());
    plan.group_wmax.push_back(w);
    plan.wmax_sum_after += w;
  }
  plan.groups = std::move(sorted_groups);
  return plan;
}

Measurement measure(const TransmissionLog& log) {
  Measurement m;
  for (long long s : log.decode_slot) {
    if (s < 0) throw IncompleteLog("a wanted packet was never decoded");
    if (s == 0) continue;
    m.completion_slots = std::max(m.completion_slots, s);
    m.delay_sum += s;
    ++m.total_targets;
  }
  return m;
}

void write_trace_csv(std::ostream& out, const TransmissionLog& log, const StateFeedbackMatrix& sfm) {
  out << "slot,round,subgen,receiver,received,decoded_packets\n";
  for (const auto& e : log.slots) {
    for (const auto& rx : e.receivers) {
      out << e.slot << ',' << e.round << ',' << e.subgen << ',' << rx.receiver + 1 << ',' << (rx.received ? 1 : 0)
          << ',';
      for (std::size_t i = 0; i < rx.decoded_packets.size(); ++i)
        out << (i ? ";" : "") << sfm.packet_id(rx.decoded_packets[i]);
      out << '\n';
    }
  }
}

std::string to_string(Strategy s) { return s == Strategy::sequential ? "sequential" : "semi_online"; }
std::string to_string(DecodeMode m) { return m == DecodeMode::idealized ? "idealized" : "concrete_gf"; }

Strategy parse_strategy(const std::string& text) {
  if (text == "sequential") return Strategy::sequential;
  if (text == "semi_online" || text == "semi-online") return Strategy::semi_online;
  throw ConfigError("unknown strategy '" + text + "'");
}

DecodeMode parse_decode_mode(const std::string& text) {
  if (text == "idealized") return DecodeMode::idealized;
  if (text == "concrete_gf" || text == "concrete") return DecodeMode::concrete_gf;
  throw ConfigError("unknown decode mode '" + text + "'");
}

}  // namespace sgnc
