#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sgnc/error.hpp"
#include "sgnc/experiment.hpp"
#include "sgnc/fixtures.hpp"
#include "sgnc/galois.hpp"
#include "sgnc/idnc.hpp"
#include "sgnc/model.hpp"
#include "sgnc/partition.hpp"
#include "sgnc/transmit.hpp"

namespace py = pybind11;
using namespace sgnc;

namespace {

std::vector<std::vector<int>> sets_as_ids(const IdncSolution& s, const StateFeedbackMatrix& sfm) {
  std::vector<std::vector<int>> out;
  for (const auto& set : s.sets) {
    std::vector<int> ids;
    for (int p : set.packets) ids.push_back(sfm.packet_id(p));
    out.push_back(ids);
  }
  return out;
}

IdncSolution sets_from_ids(const std::vector<std::vector<int>>& sets, const StateFeedbackMatrix& sfm) {
  IdncSolution s;
  for (const auto& ids : sets) {
    std::vector<int> cols;
    for (int id : ids) cols.push_back(sfm.column_of(id));
    s.sets.push_back(make_coding_set(cols, sfm));
  }
  return s;
}

Partition make_partition(const StateFeedbackMatrix& sfm, const std::vector<std::vector<int>>& sets, int g,
                         const std::string& partitioner) {
  if (partitioner == "classic") return partition_classic(sfm, g);
  const auto solution = sets_from_ids(sets, sfm);
  if (partitioner == "direct") return partition_direct(solution, g, sfm);
  if (partitioner == "smart") return partition_smart(solution, g, sfm);
  throw ConfigError("partitioner: unknown value '" + partitioner + "'");
}

py::dict metrics_dict(const AnalyticMetrics& m) {
  py::dict d;
  d["u_g"] = m.u_g;
  d["delay_sum"] = m.delay_sum;
  d["total_targets"] = m.total_targets;
  d["d_g"] = m.d_g();
  d["per_subgen_wmax"] = m.per_subgen_wmax;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sgnc, m) {
  m.doc() = "Sub-generation network coding between IDNC and RLNC";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<InvalidG>(m, "InvalidG", error.ptr());
  py::register_exception<NonReducedDiversity>(m, "NonReducedDiversity", error.ptr());

  py::class_<StateFeedbackMatrix>(m, "StateFeedbackMatrix")
      .def(py::init(&StateFeedbackMatrix::from_rows), py::arg("rows"), py::arg("packet_ids") = std::vector<int>{})
      .def_property_readonly("receivers", &StateFeedbackMatrix::receivers)
      .def_property_readonly("packets", &StateFeedbackMatrix::packets)
      .def_property_readonly("packet_ids", &StateFeedbackMatrix::packet_ids)
      .def("empty", &StateFeedbackMatrix::empty)
      .def("wants", &StateFeedbackMatrix::wants, py::arg("receiver"), py::arg("column"))
      .def("rows", [](const StateFeedbackMatrix& s) {
        std::vector<std::vector<int>> rows;
        for (int n = 0; n < s.receivers(); ++n) rows.emplace_back(s.row(n).begin(), s.row(n).end());
        return rows;
      })
      .def("__eq__", [](const StateFeedbackMatrix& a, const StateFeedbackMatrix& b) { return a == b; })
      .def("__str__", &format_sfm);

  m.def("parse_sfm", py::overload_cast<const std::string&>(&parse_sfm), py::arg("text"));
  m.def("load_sfm", &load_sfm, py::arg("path"));
  m.def("format_sfm", &format_sfm);
  m.def("fixture", [](const std::string& name) {
    if (name == "f1") return fixtures::f1();
    if (name == "f2") return fixtures::f2();
    throw ConfigError("fixture: unknown name '" + name + "'");
  });

  m.def("demand_profile", [](const StateFeedbackMatrix& sfm) {
    const auto p = demand_profile(sfm);
    py::dict d;
    d["wants_sizes"] = p.wants_sizes;
    d["w_max"] = p.w_max;
    d["target_sizes"] = p.target_sizes;
    d["total_targets"] = p.total_targets;
    return d;
  });

  m.def(
      "run_systematic",
      [](int k_total, int n_total, double p_e, std::uint64_t seed) {
        const auto out = run_systematic(k_total, n_total, ErasureChannel{p_e, seed, {}});
        return py::make_tuple(out.coded_phase_needed() ? py::cast(out.sfm) : py::none(), out.receiver_ids);
      },
      py::arg("k_total"), py::arg("n_total"), py::arg("p_e"), py::arg("seed") = 0,
      "Returns (matrix or None, original receiver ids).");

  m.def(
      "solve",
      [](const StateFeedbackMatrix& sfm, bool exact) {
        const auto graph = build_graph(sfm);
        return sets_as_ids(exact ? solve_exact(graph, sfm, 64) : solve_heuristic(graph, sfm), sfm);
      },
      py::arg("sfm"), py::arg("exact") = true, "Minimum IDNC solution as lists of packet ids.");
  m.def("reduce_diversity", [](const StateFeedbackMatrix& sfm, const std::vector<std::vector<int>>& sets) {
    return sets_as_ids(reduce_diversity(sets_from_ids(sets, sfm), sfm), sfm);
  });
  m.def("is_valid_solution", [](const StateFeedbackMatrix& sfm, const std::vector<std::vector<int>>& sets) {
    return is_valid_solution(sfm, sets_from_ids(sets, sfm));
  });

  m.def(
      "partition",
      [](const StateFeedbackMatrix& sfm, const std::vector<std::vector<int>>& sets, int g,
         const std::string& partitioner) { return format_partition(make_partition(sfm, sets, g, partitioner), sfm); },
      py::arg("sfm"), py::arg("sets"), py::arg("g"), py::arg("partitioner") = "smart");
  m.def(
      "analytic_metrics",
      [](const StateFeedbackMatrix& sfm, const std::vector<std::vector<int>>& sets, int g,
         const std::string& partitioner) {
        return metrics_dict(analytic_metrics(make_partition(sfm, sets, g, partitioner), sfm));
      },
      py::arg("sfm"), py::arg("sets"), py::arg("g"), py::arg("partitioner") = "smart");

  m.def(
      "simulate",
      [](const StateFeedbackMatrix& sfm, const std::vector<std::vector<int>>& sets, int g,
         const std::string& partitioner, const std::string& strategy, bool merging, double p_e, std::uint64_t seed,
         const std::string& decode_mode, int field_bits) {
        StrategyConfig c;
        c.strategy = parse_strategy(strategy);
        c.merging = merging;
        c.decode_mode = parse_decode_mode(decode_mode);
        c.field_bits = field_bits;
        const auto log = run_strategy(make_partition(sfm, sets, g, partitioner), sfm, ErasureChannel{p_e, seed, {}}, c);
        const auto meas = measure(log);
        py::dict d;
        d["completion_slots"] = meas.completion_slots;
        d["delay_sum"] = meas.delay_sum;
        d["total_targets"] = meas.total_targets;
        d["avg_delay"] = meas.avg_delay();
        d["rounds"] = log.rounds.size();
        d["merges"] = log.merges.size();
        d["non_innovative"] = log.non_innovative;
        return d;
      },
      py::arg("sfm"), py::arg("sets"), py::arg("g"), py::arg("partitioner") = "smart",
      py::arg("strategy") = "sequential", py::arg("merging") = false, py::arg("p_e") = 0.0, py::arg("seed") = 0,
      py::arg("decode_mode") = "idealized", py::arg("field_bits") = 8);

  m.def("merge_subgenerations", [](const std::vector<std::vector<int>>& remaining) {
    const auto plan = merge_subgenerations(remaining);
    py::dict d;
    d["groups"] = plan.groups;
    d["group_wmax"] = plan.group_wmax;
    d["wmax_sum_before"] = plan.wmax_sum_before;
    d["wmax_sum_after"] = plan.wmax_sum_after;
    return d;
  });

  m.def(
      "gf_mul", [](int bits, int a, int b) { return Field::get(bits).mul(static_cast<Element>(a), static_cast<Element>(b)); },
      py::arg("bits"), py::arg("a"), py::arg("b"));
  m.def(
      "encode",
      [](int bits, const std::vector<py::bytes>& packets, const std::vector<int>& coefficients) {
        std::vector<Payload> payloads;
        for (const auto& p : packets) {
          const std::string s = p;
          payloads.emplace_back(s.begin(), s.end());
        }
        const std::vector<Element> coeffs(coefficients.begin(), coefficients.end());
        const auto coded = encode(Field::get(bits), payloads, coeffs);
        return py::bytes(reinterpret_cast<const char*>(coded.payload.data()), coded.payload.size());
      },
      py::arg("bits"), py::arg("packets"), py::arg("coefficients"));
  m.def(
      "solve_system",
      [](int bits, const std::vector<std::vector<int>>& rows, const std::vector<py::bytes>& payloads) {
        std::vector<std::vector<Element>> r;
        for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
        std::vector<Payload> p;
        for (const auto& b : payloads) {
          const std::string s = b;
          p.emplace_back(s.begin(), s.end());
        }
        const auto result = rank_and_solve(Field::get(bits), r, p);
        py::object decoded = py::none();
        if (result.decoded) {
          py::list out;
          for (const auto& d : *result.decoded) out.append(py::bytes(reinterpret_cast<const char*>(d.data()), d.size()));
          decoded = out;
        }
        return py::make_tuple(result.rank, decoded);
      },
      py::arg("bits"), py::arg("rows"), py::arg("payloads"), "Returns (rank, decoded payloads or None).");

  m.def(
      "run_experiment",
      [](const std::string& experiment, int k_total, int receivers_from, int receivers_to, int receivers_step,
         double p_e, int trials, std::vector<std::string> g_policies, std::vector<std::string> partitioners,
         std::vector<std::string> strategies, std::vector<std::string> merging, std::uint64_t seed) {
        ExperimentConfig c;
        c.experiment = experiment;
        c.k_total = k_total;
        c.receivers_from = receivers_from;
        c.receivers_to = receivers_to;
        c.receivers_step = receivers_step;
        c.p_e = p_e;
        c.trials = trials;
        c.g_policies = std::move(g_policies);
        c.partitioners = std::move(partitioners);
        c.strategies = std::move(strategies);
        c.merging = std::move(merging);
        c.seed = seed;
        std::ostringstream out;
        write_csv(out, run_experiment(c));
        return out.str();
      },
      py::arg("experiment") = "tradeoff", py::arg("k_total") = 20, py::arg("receivers_from") = 5,
      py::arg("receivers_to") = 50, py::arg("receivers_step") = 5, py::arg("p_e") = 0.2, py::arg("trials") = 500,
      py::arg("g_policies") = std::vector<std::string>{}, py::arg("partitioners") = std::vector<std::string>{},
      py::arg("strategies") = std::vector<std::string>{}, py::arg("merging") = std::vector<std::string>{},
      py::arg("seed") = 1, "CSV text of a parameter sweep.");

  m.def("fixture_report", []() {
    py::list out;
    for (const auto& l : run_fixture_report())
      out.append(py::make_tuple(l.fixture, l.metric, l.expected, l.actual, l.pass));
    return out;
  });
}
