#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relpos/relpos.hpp"

namespace py = pybind11;
using namespace relpos;

namespace {

py::dict decomposition_dict(const BrennerDecomposition& d) {
  py::dict out;
  out["invariants"] = d.invariants();
  out["common"] = d.common.basis();
  out["missing_one"] = std::vector<Matrix>{d.missing_one[0].basis(), d.missing_one[1].basis(),
                                           d.missing_one[2].basis()};
  out["exclusive"] = std::vector<Matrix>{d.exclusive[0].basis(), d.exclusive[1].basis(),
                                         d.exclusive[2].basis()};
  out["triangle"] = std::vector<Matrix>{d.triangle[0].basis(), d.triangle[1].basis(),
                                        d.triangle[2].basis()};
  out["outside"] = d.outside.basis();
  out["change_of_basis"] = d.change_of_basis;
  out["residual"] = d.residual;
  out["trusted"] = d.trusted;
  out["warnings"] = d.warnings;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decompositions of systems of subspaces of C^n";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<PreconditionFailure>(m, "PreconditionFailure", base.ptr());
  py::register_exception<ConditioningFailure>(m, "ConditioningFailure", base.ptr());
  (void)invalid;

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init<>())
      .def_readwrite("rank_rtol", &Tolerance::rank_rtol)
      .def_readwrite("gap_tol", &Tolerance::gap_tol)
      .def_readwrite("residual_tol", &Tolerance::residual_tol)
      .def_readwrite("cond_warn", &Tolerance::cond_warn)
      .def_readwrite("angle_eps", &Tolerance::angle_eps);

  py::class_<Subspace>(m, "Subspace")
      .def_static(
          "span", [](const Matrix& columns, const Tolerance& tol) { return span(columns, tol); },
          py::arg("columns"), py::arg("tol") = Tolerance{},
          "Column space of an n x m complex matrix.")
      .def_static("zero", &Subspace::zero)
      .def_static("whole", &Subspace::whole)
      .def_property_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("basis", &Subspace::basis)
      .def("projector", &Subspace::projector)
      .def("__repr__", [](const Subspace& s) {
        return "<Subspace dim " + std::to_string(s.dim()) + " of C^" + std::to_string(s.ambient_dim()) + ">";
      });

  m.def("meet", [](const Subspace& a, const Subspace& b, const Tolerance& t) { return meet(a, b, t); },
        py::arg("a"), py::arg("b"), py::arg("tol") = Tolerance{});
  m.def("join", [](const Subspace& a, const Subspace& b, const Tolerance& t) { return join(a, b, t); },
        py::arg("a"), py::arg("b"), py::arg("tol") = Tolerance{});
  m.def("gap", &gap);
  m.def("principal_angles", &principal_angles);

  py::class_<SubspaceSystem>(m, "SubspaceSystem")
      .def(py::init<Index, std::vector<Subspace>, std::vector<std::string>>(), py::arg("ambient_dim"),
           py::arg("subspaces"), py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("ambient_dim", &SubspaceSystem::ambient_dim)
      .def_property_readonly("labels", &SubspaceSystem::labels)
      .def_property_readonly("subspaces", &SubspaceSystem::subspaces)
      .def("dims", &SubspaceSystem::dims)
      .def("__len__", &SubspaceSystem::size);

  m.def("direct_sum", &direct_sum);
  m.def("is_commutative", &is_commutative, py::arg("system"), py::arg("tol") = Tolerance{});
  m.def("is_transitive", &is_transitive, py::arg("system"), py::arg("tol") = Tolerance{});
  m.def("detect_double_triangle", &detect_double_triangle, py::arg("system"), py::arg("tol") = Tolerance{});
  m.def("detect_pentagon", &detect_pentagon, py::arg("system"), py::arg("tol") = Tolerance{});
  m.def(
      "find_nontrivial_idempotent",
      [](const SubspaceSystem& s, int trials, std::uint64_t seed, const Tolerance& t) -> std::optional<Matrix> {
        auto w = find_nontrivial_idempotent(s, t, {trials, seed, 1e-6});
        if (!w) return std::nullopt;
        return w->map;
      },
      py::arg("system"), py::arg("trials") = 8, py::arg("seed") = 0, py::arg("tol") = Tolerance{},
      "An idempotent endomorphism other than 0 and I, or None.");

  m.def("brenner_invariants", &brenner_invariants, py::arg("system"), py::arg("tol") = Tolerance{});
  m.def(
      "brenner_decompose",
      [](const SubspaceSystem& s, const Tolerance& t) { return decomposition_dict(brenner_decompose(s, t)); },
      py::arg("system"), py::arg("tol") = Tolerance{});
  m.def(
      "is_isomorphic_three",
      [](const SubspaceSystem& a, const SubspaceSystem& b, const Tolerance& t) {
        const auto d = is_isomorphic_three(a, b, t);
        return py::make_tuple(d.isomorphic, d.map);
      },
      py::arg("a"), py::arg("b"), py::arg("tol") = Tolerance{},
      "(isomorphic, map) where map sends a onto b when isomorphic.");
  m.def(
      "normalize_double_triangle",
      [](const SubspaceSystem& s, const Tolerance& t) {
        const auto f = normalize_double_triangle(s, t);
        return py::make_tuple(f.k_dim, f.map, f.residual);
      },
      py::arg("system"), py::arg("tol") = Tolerance{});
  m.def("normal_form", &normal_form);

  m.def("atom", &atom);
  m.def("remark_example", &remark_example);
  m.def(
      "compose_from_multiplicities",
      [](const InvariantVector& v, std::uint64_t seed, double cond) {
        auto c = compose_from_multiplicities(v, seed, cond);
        return py::make_tuple(c.system, c.scramble);
      },
      py::arg("multiplicities"), py::arg("seed"), py::arg("cond_bound"));

  m.def("example9_truncated", &example9_truncated);
  m.def(
      "diagonal_graph_margin",
      [](Index n, const Tolerance& t) { return diagonal_graph_margin(n, t).min_positive_angle; },
      py::arg("n"), py::arg("tol") = Tolerance{});
}
