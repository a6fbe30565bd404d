#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shufflab/error.hpp"
#include "shufflab/experiments.hpp"
#include "shufflab/oracle.hpp"
#include "shufflab/reduction.hpp"
#include "shufflab/strategies.hpp"

namespace py = pybind11;
using namespace shufflab;

namespace {

py::dict metrics_dict(const IndexMetrics& m) {
  py::dict d;
  d["N"] = m.N;
  d["blocks"] = m.blocks;
  d["r"] = m.redundancy;
  d["A"] = m.access_overhead;
  d["A_exact"] = m.access_overhead_exact;
  d["avg_blocks_per_unit"] = m.avg_blocks_per_unit;
  d["queries"] = m.queries;
  d["transition_total"] = m.transition_cost_total;
  d["element_total"] = m.element_transition_cost_total;
  d["u"] = m.update_cost_u;
  d["element_u"] = m.element_u;
  return d;
}

}  // namespace

PYBIND11_MODULE(_shufflab, m) {
  m.doc() = "shufflab core bindings";

  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<IllegalOpError>(m, "IllegalOpError", PyExc_ValueError);
  py::register_exception<ReplayError>(m, "ReplayError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ApplicabilityError>(m, "ApplicabilityError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<ShuffleOp>(m, "ShuffleOp")
      .def(py::init<std::vector<BinId>, std::vector<Count>>(), py::arg("collected"), py::arg("allocation"))
      .def_readwrite("collected", &ShuffleOp::collected)
      .def_readwrite("allocation", &ShuffleOp::allocation)
      .def("__repr__", [](const ShuffleOp& op) {
        return "ShuffleOp(collected=" + py::repr(py::cast(op.collected)).cast<std::string>() +
               ", allocation=" + py::repr(py::cast(op.allocation)).cast<std::string>() + ")";
      });

  m.def(
      "apply_ops",
      [](std::size_t t, const std::vector<ShuffleOp>& ops) {
        const auto r = replay(t, ops);
        const auto bins = r.state.bins();
        return py::make_tuple(std::vector<Count>(bins.begin(), bins.end()), r.ledger.total());
      },
      py::arg("t"), py::arg("ops"), "Replay ops on t empty bins; returns (bins, total cost).");

  m.def(
      "run_strategy",
      [](const std::string& name, Count n, Count t) {
        const auto run = run_strategy({parse_strategy(name), n, t});
        return py::make_tuple(run.total_cost, run.ops);
      },
      py::arg("strategy"), py::arg("n"), py::arg("t"), "Returns (cost, ops).");

  m.def(
      "optimal_cost",
      [](Count n, Count t, bool splits) {
        const auto r = splits ? optimal_cost_full(n, t) : optimal_cost_merging(n, t);
        return py::make_tuple(r.optimal_cost, r.witness);
      },
      py::arg("n"), py::arg("t"), py::arg("splits") = false, "Returns (optimal cost, witness ops).");

  m.def(
      "optimal_cost_table", [](Count n_max, Count t) { return optimal_cost_table(n_max, t); }, py::arg("n_max"),
      py::arg("t"));

  m.def(
      "theorem_bounds",
      [](Count n, Count t) {
        const auto b = theorem_bounds(n, t);
        return py::make_tuple(b.bound_i, b.bound_ii, b.second_phase);
      },
      py::arg("n"), py::arg("t"));

  m.def("check_constraints", [] {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& c : check_constraints(BoundParams{})) out.emplace_back(c.name, c.satisfied);
    return out;
  });

  m.def(
      "tradeoff_region",
      [](double q, double u, double B) { return std::string(to_string(tradeoff_region(q, u, B))); },
      py::arg("q"), py::arg("u"), py::arg("B"));

  m.def(
      "run_index",
      [](const std::string& structure, Count B, Count M, Count ell, Count N, std::uint64_t seed) {
        const auto row = run_index_cell(IndexConfig{B, M, ell, parse_structure(structure)}, N, seed);
        if (!row.error.empty()) throw Error(row.error);
        return metrics_dict(row.metrics);
      },
      py::arg("structure"), py::arg("B"), py::arg("M"), py::arg("ell"), py::arg("N"), py::arg("seed") = 0,
      "Simulate an index on N shuffled keys; returns its metrics.");

  m.def(
      "reduce",
      [](const std::string& structure, Count B, Count M, Count ell, std::uint64_t seed) {
        const IndexConfig cfg{B, M, ell, parse_structure(structure)};
        validate(cfg);
        const auto wl = build_grouped_workload(B, M, seed);
        const auto trace = simulate_rounds(cfg, wl);
        const Count A = std::max<Count>(1, measured_access_overhead(trace, wl));
        const auto cert = extract_certificate(trace, wl, A);
        const auto verdict = verify_certificate(cert);
        py::dict d;
        d["group"] = cert.group;
        d["A"] = cert.A;
        d["balls"] = cert.balls;
        d["shuffle_cost"] = cert.shuffle_cost;
        d["element_cost"] = cert.element_transition_cost;
        d["contaminated"] = contaminated_groups(trace, wl).size();
        d["verified"] = verdict.ok;
        d["ops"] = cert.ops;
        return d;
      },
      py::arg("structure"), py::arg("B"), py::arg("M"), py::arg("ell"), py::arg("seed") = 0,
      "Run the grouped workload and extract a verified shuffling certificate.");
}
