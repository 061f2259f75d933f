#include "sgnc/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "sgnc/error.hpp"
#include "sgnc/random.hpp"

namespace sgnc {

StateFeedbackMatrix StateFeedbackMatrix::from_rows(const std::vector<std::vector<int>>& rows,
                                                   std::vector<int> packet_ids) {
  if (rows.empty()) throw EmptyRowOrColumn("state feedback matrix has no rows");
  const std::size_t k = rows.front().size();
  if (k == 0) throw EmptyRowOrColumn("state feedback matrix has no columns");

  StateFeedbackMatrix sfm;
  sfm.receivers_ = static_cast<int>(rows.size());
  sfm.packets_ = static_cast<int>(k);
  sfm.cells_.reserve(rows.size() * k);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (rows[n].size() != k) {
      throw DimensionMismatch("row " + std::to_string(n + 1) + " has " +
                              std::to_string(rows[n].size()) + " entries, expected " +
                              std::to_string(k));
    }
    bool any = false;
    for (int v : rows[n]) {
      if (v != 0 && v != 1) throw DimensionMismatch("entries must be 0 or 1");
      any |= v == 1;
      sfm.cells_.push_back(static_cast<std::uint8_t>(v));
    }
    if (!any) throw EmptyRowOrColumn("receiver " + std::to_string(n + 1) + " wants nothing");
  }
  for (std::size_t c = 0; c < k; ++c) {
    bool any = false;
    for (std::size_t n = 0; n < rows.size() && !any; ++n) any = rows[n][c] == 1;
    if (!any) throw EmptyRowOrColumn("column " + std::to_string(c + 1) + " is wanted by nobody");
  }

  if (packet_ids.empty()) {
    packet_ids.resize(k);
    for (std::size_t c = 0; c < k; ++c) packet_ids[c] = static_cast<int>(c + 1);
  }
  if (packet_ids.size() != k) throw DimensionMismatch("packet id count does not match columns");
  std::unordered_set<int> seen;
  for (int id : packet_ids) {
    if (id < 1) throw DimensionMismatch("packet ids are 1-based");
    if (!seen.insert(id).second) throw DimensionMismatch("duplicate packet id " + std::to_string(id));
  }
  sfm.packet_ids_ = std::move(packet_ids);
  return sfm;
}

int StateFeedbackMatrix::column_of(int packet_id) const {
  auto it = std::find(packet_ids_.begin(), packet_ids_.end(), packet_id);
  if (it == packet_ids_.end()) throw UnknownPacket("packet " + std::to_string(packet_id) + " not in matrix");
  return static_cast<int>(it - packet_ids_.begin());
}

std::vector<int> StateFeedbackMatrix::wants_set(int receiver) const {
  std::vector<int> out;
  for (int k = 0; k < packets_; ++k)
    if (wants(receiver, k)) out.push_back(k);
  return out;
}

std::vector<int> StateFeedbackMatrix::target_set(int column) const {
  std::vector<int> out;
  for (int n = 0; n < receivers_; ++n)
    if (wants(n, column)) out.push_back(n);
  return out;
}

DemandProfile demand_profile(const StateFeedbackMatrix& sfm) {
  DemandProfile p;
  p.wants_sizes.assign(sfm.receivers(), 0);
  p.target_sizes.assign(sfm.packets(), 0);
  for (int n = 0; n < sfm.receivers(); ++n) {
    for (int k = 0; k < sfm.packets(); ++k) {
      if (!sfm.wants(n, k)) continue;
      ++p.wants_sizes[n];
      ++p.target_sizes[k];
      ++p.total_targets;
    }
  }
  if (!p.wants_sizes.empty()) p.w_max = *std::max_element(p.wants_sizes.begin(), p.wants_sizes.end());
  return p;
}

double ErasureChannel::prob(int receiver) const {
  if (!per_receiver_prob.empty()) return per_receiver_prob.at(receiver);
  return erasure_prob;
}

bool ErasureChannel::erased(int receiver, std::uint64_t stream, std::uint64_t index) const {
  const double p = prob(receiver);
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  const auto word = hash_words(seed, static_cast<std::uint64_t>(Domain::erasure),
                               static_cast<std::uint64_t>(receiver), stream, index);
  return to_unit(word) < p;
}

void ErasureChannel::validate() const {
  auto check = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DimensionMismatch("erasure probability outside [0, 1]");
  };
  check(erasure_prob);
  for (double p : per_receiver_prob) check(p);
}

const StateFeedbackMatrix& SystematicOutcome::require_coded_phase() const {
  if (sfm.empty()) throw DegenerateOutcome("no packet was missed in the systematic phase");
  return sfm;
}

SystematicOutcome run_systematic(int k_total, int n_total, const ErasureChannel& channel) {
  if (k_total < 1 || n_total < 1) throw DimensionMismatch("K_T and N_T must be positive");
  channel.validate();
  if (!channel.per_receiver_prob.empty() &&
      channel.per_receiver_prob.size() != static_cast<std::size_t>(n_total))
    throw DimensionMismatch("per-receiver erasure vector must have N_T entries");

  // missed[n][k] = 1 when receiver n lost slot k.
  std::vector<std::vector<int>> missed(n_total, std::vector<int>(k_total, 0));
  for (int k = 0; k < k_total; ++k)
    for (int n = 0; n < n_total; ++n)
      missed[n][k] = channel.erased(n, 0, static_cast<std::uint64_t>(k)) ? 1 : 0;

  SystematicOutcome out;
  out.k_total = k_total;
  out.n_total = n_total;

  std::vector<int> cols;
  for (int k = 0; k < k_total; ++k) {
    for (int n = 0; n < n_total; ++n) {
      if (missed[n][k]) {
        cols.push_back(k);
        break;
      }
    }
  }
  if (cols.empty()) return out;

  std::vector<std::vector<int>> rows;
  for (int n = 0; n < n_total; ++n) {
    std::vector<int> row;
    row.reserve(cols.size());
    bool any = false;
    for (int k : cols) {
      row.push_back(missed[n][k]);
      any |= missed[n][k] == 1;
    }
    if (!any) continue;
    rows.push_back(std::move(row));
    out.receiver_ids.push_back(n + 1);
  }
  std::vector<int> ids;
  ids.reserve(cols.size());
  for (int k : cols) ids.push_back(k + 1);
  out.sfm = StateFeedbackMatrix::from_rows(rows, std::move(ids));
  return out;
}

namespace {

std::string strip_comment(std::string line) {
  if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
  return line;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

StateFeedbackMatrix parse_sfm(std::istream& in) {
  std::vector<int> ids;
  int n = -1;
  int k = -1;
  std::vector<std::vector<int>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ss(line);
    if (line.find("packets:") != std::string::npos) {
      if (!rows.empty()) throw ParseError("line " + std::to_string(lineno) + ": packets header after rows");
      std::string tag;
      ss >> tag;
      int id;
      while (ss >> id) ids.push_back(id);
      if (!ss.eof()) throw ParseError("line " + std::to_string(lineno) + ": bad packet id");
      continue;
    }
    if (n < 0) {
      if (!(ss >> n >> k) || n < 1 || k < 1) throw ParseError("line " + std::to_string(lineno) + ": expected 'N K'");
      continue;
    }
    std::vector<int> row;
    int v;
    while (ss >> v) row.push_back(v);
    if (!ss.eof()) throw ParseError("line " + std::to_string(lineno) + ": non-numeric entry");
    if (static_cast<int>(row.size()) != k)
      throw DimensionMismatch("line " + std::to_string(lineno) + ": expected " + std::to_string(k) + " entries");
    rows.push_back(std::move(row));
  }
  if (n < 0) throw ParseError("missing 'N K' header");
  if (static_cast<int>(rows.size()) != n)
    throw DimensionMismatch("expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  return StateFeedbackMatrix::from_rows(rows, std::move(ids));
}

StateFeedbackMatrix parse_sfm(const std::string& text) {
  std::istringstream in(text);
  return parse_sfm(in);
}

StateFeedbackMatrix load_sfm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_sfm(in);
}

std::string format_sfm(const StateFeedbackMatrix& sfm) {
  std::ostringstream out;
  out << "packets:";
  for (int id : sfm.packet_ids()) out << ' ' << id;
  out << '\n' << sfm.receivers() << ' ' << sfm.packets() << '\n';
  for (int n = 0; n < sfm.receivers(); ++n) {
    for (int k = 0; k < sfm.packets(); ++k) out << (k ? " " : "") << (sfm.wants(n, k) ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace sgnc
