#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "posrep/rep_io.hpp"

namespace py = pybind11;
using namespace posrep;

namespace {

using GM = GroupModel<Rat>;
using M = Mat<Rat>;
using Rows = std::vector<std::vector<std::string>>;

Rows to_rows(const M& m) {
  Rows r(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r[i].push_back(Sc<Rat>::str(m(i, j)));
  return r;
}

M from_rows(const Rows& r) {
  M m(static_cast<int>(r.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i].size() != r.size()) throw Error(Err::ParseError, "matrix", "matrix must be square");
    for (size_t j = 0; j < r.size(); ++j) m(i, j) = Sc<Rat>::parse(r[i][j]);
  }
  return m;
}

py::dict rep_dict(const GM& m, const Complex& cx, const FramedRep<Rat>& rep) {
  py::dict rho, flags;
  for (int g : cx.fd.pairings) rho[py::str(cx.s.gluings()[g].name)] = to_rows(rep.rho.at(g));
  for (int i = 0; i < cx.fd.num_pv(); ++i) flags[py::str(cx.fd.pv_name[i])] = to_rows(canonical_form(m, rep.framing[i]));
  Verdict v = check_positive_rep(m, cx, rep);
  py::dict out;
  out["rho"] = rho;
  out["flags"] = flags;
  out["positive"] = v.ok;
  out["witness"] = v.witness;
  out["rep_text"] = format_rep(m, cx, rep);
  return out;
}

}  // namespace

PYBIND11_MODULE(_posrep, mod) {
  mod.doc() = "Exact parametrization of framed and positive surface group representations";

  mod.attr("PosrepError") = py::handle(PyErr_NewException("posrep._posrep.PosrepError", PyExc_RuntimeError, nullptr));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::module_::import("posrep._posrep").attr("PosrepError");
      py::object inst = type(e.what());
      inst.attr("code") = err_name(e.code());
      inst.attr("witness") = e.witness();
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  py::class_<Complex>(mod, "Surface")
      .def_static("parse", [](const std::string& text) { return Complex(TriSurface::parse(text)); })
      .def_static("load", [](const std::string& path) { return Complex(TriSurface::load(path)); })
      .def("to_text", [](const Complex& c) { return c.s.to_text(); })
      .def_property_readonly("euler_char", [](const Complex& c) { return c.s.euler_char(); })
      .def_property_readonly("genus", [](const Complex& c) { return c.s.genus(); })
      .def_property_readonly("boundary_components", [](const Complex& c) { return c.s.boundary_count(); })
      .def_property_readonly("internal_punctures", [](const Complex& c) { return c.s.internal_punctures(); })
      .def_property_readonly("external_punctures", [](const Complex& c) { return c.s.external_punctures(); })
      .def_property_readonly("polygon_mode", [](const Complex& c) { return c.s.polygon_mode(); })
      .def_property_readonly("expected_triangle_count", [](const Complex& c) { return c.s.expected_triangle_count(); })
      .def_property_readonly("triangles",
                             [](const Complex& c) {
                               std::vector<std::string> v;
                               for (auto& t : c.s.triangles()) v.push_back(t.name);
                               return v;
                             })
      .def_property_readonly("gluings",
                             [](const Complex& c) {
                               std::vector<std::string> v;
                               for (auto& g : c.s.gluings()) v.push_back(g.name);
                               return v;
                             })
      .def_property_readonly("pairings", [](const Complex& c) {
        std::vector<std::string> v;
        for (int g : c.fd.pairings) v.push_back(c.s.gluings()[g].name);
        return v;
      });

  py::class_<GM>(mod, "Model")
      .def(py::init([](const std::string& spec) { return GM::parse(spec); }))
      .def_property_readonly("spec", &GM::spec)
      .def_property_readonly("dim", &GM::dim)
      .def("omega", [](const GM& m) { return to_rows(m.omega()); })
      .def("u_theta", [](const GM& m) { return to_rows(m.u_theta()); })
      .def("in_group", [](const GM& m, const Rows& r) { return m.in_group(from_rows(r)); })
      .def("is_positive_unipotent", [](const GM& m, const Rows& r) { return m.is_positive_unipotent(from_rows(r)); })
      .def("left_map", [](const GM& m, const Rows& r) { return to_rows(m.left_map(from_rows(r))); })
      .def("right_map", [](const GM& m, const Rows& r) { return to_rows(m.right_map(from_rows(r))); })
      .def("levi_invariant", [](const GM& m, const Rows& r) { return m.levi_invariant(from_rows(r)); });

  mod.def(
      "random_params",
      [](const GM& m, const Complex& cx, std::uint64_t seed, bool positive) {
        Rng rng(seed);
        return format_params(m, cx, random_params(m, cx, rng, positive ? Regime::Positive : Regime::Transverse));
      },
      py::arg("model"), py::arg("surface"), py::arg("seed"), py::arg("positive") = true);

  mod.def(
      "build",
      [](const GM& m, const Complex& cx, const std::string& params) {
        ParamFile<Rat> pf = parse_params(m, cx, params);
        return rep_dict(m, cx, build_rep(m, cx, pf.params, Regime::Transverse, pf.gauge));
      },
      py::arg("model"), py::arg("surface"), py::arg("params"));

  mod.def(
      "extract",
      [](const GM& m, const Complex& cx, const std::string& rep_text) {
        FramedRep<Rat> rep = parse_rep(m, cx, rep_text);
        return format_params(m, cx, extract_params(m, cx, rep), std::optional<M>(rep.gauge));
      },
      py::arg("model"), py::arg("surface"), py::arg("rep_text"));

  mod.def(
      "check_rep",
      [](const GM& m, const Complex& cx, const std::string& rep_text) {
        FramedRep<Rat> rep = parse_rep(m, cx, rep_text);
        if (auto bad = verify_framing(m, cx, rep)) throw Error(Err::IncompatibleFraming, "", *bad);
        Verdict v = check_positive_rep(m, cx, rep);
        return py::make_tuple(v.ok, v.witness);
      },
      py::arg("model"), py::arg("surface"), py::arg("rep_text"));

  mod.def(
      "flip",
      [](const GM& m, const Complex& cx, const std::string& params, const std::string& edge) {
        int g = cx.s.gluing_by_name(edge);
        if (g < 0) throw Error(Err::NotFlippable, edge, "no internal edge named '" + edge + "'");
        FlipReport<Rat> r = flip_invariance_test(m, cx, parse_params(m, cx, params).params, g);
        py::dict out;
        out["outcome"] = flip_outcome_name(r.outcome);
        out["witness"] = r.witness;
        out["surface_text"] = r.flipped->s.to_text();
        out["params"] = r.params ? py::object(py::str(format_params(m, *r.flipped, *r.params))) : py::none();
        return out;
      },
      py::arg("model"), py::arg("surface"), py::arg("params"), py::arg("edge"));

  mod.def(
      "retract",
      [](const GM& m, const Complex& cx, const std::string& params, const std::string& t) {
        return format_params(m, cx, retraction_path(m, cx, parse_params(m, cx, params).params, Sc<Rat>::parse(t)));
      },
      py::arg("model"), py::arg("surface"), py::arg("params"), py::arg("t"));

  mod.def(
      "census",
      [](const GM& m, const Complex& cx, int samples, std::uint64_t seed, int threads) {
        py::dict out;
        std::map<std::vector<int>, int> hist;
        {
          py::gil_scoped_release nogil;
          hist = component_census(m, cx, samples, seed, threads);
        }
        for (auto& [label, count] : hist) out[py::tuple(py::cast(label))] = count;
        return out;
      },
      py::arg("model"), py::arg("surface"), py::arg("samples"), py::arg("seed"), py::arg("threads") = 0);
}
