// Python bindings. Report-shaped results cross the boundary as JSON text and
// are decoded in the package's __init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "kato/kato_complex.hpp"
#include "kato/kato_groups.hpp"
#include "kato/mackey.hpp"
#include "kato/milnor.hpp"
#include "kato/parse.hpp"
#include "kato/suites.hpp"
#include "kato/witt.hpp"

namespace py = pybind11;
using json = nlohmann::ordered_json;
using namespace kato;

namespace {

FieldPtr field_of(std::uint32_t q) { return parse_field_name("F_" + std::to_string(q)).first; }

json invariants_json(const InvariantVector& v) {
  json m = json::object();
  for (const auto& [pl, x] : v.entries) m[to_string(pl)] = x;
  return m;
}

std::string witt_binary(std::uint32_t q, const std::string& a, const std::string& b, bool multiply) {
  const FieldPtr f = field_of(q);
  const WittFq x = parse_witt_fq(a, f), y = parse_witt_fq(b, f);
  return to_string(multiply ? mul(x, y) : add(x, y));
}

std::string coker(std::uint32_t q, std::uint32_t r) {
  const CokerWp c = coker_wp(field_of(q), r);
  return json{{"order", c.group.order()},
              {"invariant_factors", c.group.invariant_factors()},
              {"generator", to_string(c.distinguished)}}
      .dump();
}

std::string invariants(const std::string& symbol, std::uint32_t q) {
  const InvariantVector v = invariant_vector(parse_kato_sum(symbol, field_of(q)));
  return json{{"modulus", v.modulus()}, {"invariants", invariants_json(v)}, {"total", v.total()}}.dump();
}

bool weil(const std::string& symbol, std::uint32_t q) {
  const MilnorRat s = parse_milnor(symbol, field_of(q));
  int D = 1;
  for (const auto& [e, c] : s.terms())
    for (const auto& x : e) D = std::max({D, x.num().degree(), x.den().degree()});
  return weil_check(s, D).ok;
}

std::string kh0_report(std::uint32_t q, std::uint32_t r, int D, int bound) {
  const FiniteTheoremReport t = verify_finite_theorem(field_of(q), r, D, bound);
  json checks = json::object();
  for (const auto& c : t.checks) checks[c.name] = c.pass;
  return json{{"kh0_order", t.kh0_order},
              {"kh0_invariant_factors", t.kh0_invariant_factors},
              {"f_star_surjective", t.f_star_surjective},
              {"checks", checks},
              {"ok", t.ok()}}
      .dump();
}

std::string mackey_reduce(const std::string& symbol, int L, bool wp_quotient) {
  const auto parsed = parse_mackey(symbol);
  if (const auto* s = std::get_if<MackeySymbolRat>(&parsed)) {
    const InvariantVector v = extended_symbol(*s);
    return json{{"symbol", to_string(*s)}, {"extended_symbol", invariants_json(v)}, {"total", v.total()}}.dump();
  }
  const MackeySymbol& s = std::get<MackeySymbol>(parsed);
  const int m = static_cast<int>(s.level()->degree() / s.base->degree());
  const MackeyGroupTruncation g = mackey_group(make_lattice(s.base, std::max(L, m)), s.weight(), s.a.length(), wp_quotient);
  return json{{"symbol", to_string(s)},
              {"canonical", to_string(canonical(s))},
              {"reduces_to_zero", g.group.is_zero(mackey_coordinates(g, s))},
              {"extended_symbol", extended_symbol(s)}}
      .dump();
}

std::string suite(const std::string& name, std::uint64_t seed) { return run_suite(name, seed).to_json().dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Witt vectors, Milnor K-groups and Kato symbols over finite fields and F_q(t)";
  py::register_exception<Error>(m, "KatoError", PyExc_ValueError);
  m.def("witt_add", [](std::uint32_t q, const std::string& a, const std::string& b) { return witt_binary(q, a, b, false); },
        py::arg("q"), py::arg("a"), py::arg("b"));
  m.def("witt_mul", [](std::uint32_t q, const std::string& a, const std::string& b) { return witt_binary(q, a, b, true); },
        py::arg("q"), py::arg("a"), py::arg("b"));
  m.def("coker_wp", &coker, py::arg("q"), py::arg("r"));
  m.def("invariants", &invariants, py::arg("symbol"), py::arg("q"));
  m.def("weil_check", &weil, py::arg("symbol"), py::arg("q"));
  m.def("kh0", &kh0_report, py::arg("q"), py::arg("r"), py::arg("D"), py::arg("symbol_bound") = 1);
  m.def("mackey_reduce", &mackey_reduce, py::arg("symbol"), py::arg("L") = 4, py::arg("wp_quotient") = false);
  m.def("run_suite", &suite, py::arg("name"), py::arg("seed") = 7, py::call_guard<py::gil_scoped_release>());
  m.def("suite_names", &suite_names);
  m.def("place_string", [](const std::string& s, std::uint32_t q) { return to_string(parse_place(s, field_of(q))); },
        py::arg("place"), py::arg("q"));
  m.def("ratfunc_string", [](const std::string& s, std::uint32_t q) { return to_string(parse_ratfunc(s, field_of(q))); },
        py::arg("f"), py::arg("q"));
}
