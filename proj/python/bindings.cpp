#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "decforest/core/structure.hpp"
#include "decforest/optimal/search.hpp"
#include "decforest/oracle/naive.hpp"
#include "decforest/registry/registry.hpp"
#include "decforest/workloads/workloads.hpp"

namespace py = pybind11;
using namespace decforest;

namespace {

OperationTrace initial(std::vector<Vertex> parents, std::vector<std::int64_t> weights, std::vector<bool> aux) {
  OperationTrace t;
  const std::size_t n = parents.size();
  t.parents = std::move(parents);
  t.weights = std::move(weights);
  t.aux = std::move(aux);
  t.weights.resize(n, 0);
  t.aux.resize(n, false);
  return t;
}

py::dict trace_dict(const OperationTrace& t) {
  py::dict d;
  d["parents"] = t.parents;
  d["weights"] = t.weights;
  d["text"] = format_trace(t);
  return d;
}

}  // namespace

PYBIND11_MODULE(_decforest, m) {
  m.doc() = "Decremental forest structures with tree-sum and subtree-sum queries";

  static py::exception<Error> error(m, "DecforestError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<ForestStructure>(m, "Structure")
      .def_property_readonly("name", &ForestStructure::name)
      .def("cut", &ForestStructure::cut, py::arg("v"))
      .def("update_weight", &ForestStructure::update_weight, py::arg("v"), py::arg("x"))
      .def("tree_sum", &ForestStructure::tree_sum, py::arg("v"))
      .def("subtree_sum", &ForestStructure::subtree_sum, py::arg("v"))
      .def("group_ops", [](const ForestStructure& s) {
        OpCounts c = s.group_counts();
        return py::make_tuple(c.adds, c.subs);
      });

  m.def("structure_names", &structure_names);
  m.def(
      "make_structure",
      [](const std::string& name, std::vector<Vertex> parents, std::vector<std::int64_t> weights, std::vector<bool> aux) {
        return make_structure(name, initial(std::move(parents), std::move(weights), std::move(aux)));
      },
      py::arg("name"), py::arg("parents"), py::arg("weights") = std::vector<std::int64_t>{},
      py::arg("aux") = std::vector<bool>{});

  m.def(
      "replay",
      [](const std::string& text, const std::string& name) {
        OperationTrace t = parse_trace(text);
        auto s = make_structure(name, t);
        NaiveStructure oracle{NaiveForest(t)};
        ReplayOptions opts;
        opts.reference = &oracle;
        ReplayReport rep = replay(t, *s, opts);
        std::vector<std::size_t> bad;
        for (const Mismatch& x : rep.mismatches) bad.push_back(x.index);
        return py::make_tuple(rep.answers, bad);
      },
      py::arg("trace"), py::arg("structure"), "Replays trace text; returns (answers, indices of mismatching ops).");

  m.def(
      "random_trace",
      [](std::size_t n, std::size_t ops, std::uint64_t seed, bool binary) {
        ValueRange r;
        r.binary = binary;
        return format_trace(gen_random_instance(n, ops, Shape::UniformAttachment, OpMix::tree_sums(), seed, r));
      },
      py::arg("n"), py::arg("ops"), py::arg("seed"), py::arg("binary") = false);
  m.def(
      "spine_trace", [](std::size_t np, std::uint64_t seed, bool unary) { return trace_dict(spine_trace(np, seed, unary)); },
      py::arg("n_prime"), py::arg("seed"), py::arg("unary") = false);
  m.def(
      "parity_trace",
      [](std::size_t np, std::size_t flips, std::uint64_t seed) { return trace_dict(parity_trace(np, flips, seed)); },
      py::arg("n_prime"), py::arg("flips"), py::arg("seed"));

  m.def(
      "optimal_depth",
      [](std::vector<Vertex> parents, std::size_t m_ops, std::size_t d) -> py::object {
        auto r = search_optimal(RootedForest::build(parents), m_ops, d);
        if (!r) return py::none();
        return py::int_(r->mid);
      },
      py::arg("parents"), py::arg("m"), py::arg("d") = 4,
      "Smallest worst-case number of group operations for m operations, or None above d.");
}
