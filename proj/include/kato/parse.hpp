#pragma once

// Textual syntax for elements, functions, places and symbols. Every parser
// accepts the output of the matching to_string and throws ParseError on
// malformed input.
//
//   element     2  |  ⟨1,0⟩  |  <1,0>  |  g  (the class of x in F_p[x]/(f))
//   function    expressions in t over + - * / ^ and parentheses: "1+t^2",
//               "(t+1)/(t^2+t+1)", "g*t - 1"
//   place       "(t^2+t+1)"  |  "inf"
//   Witt        "(e0; e1; ...)"
//   Kato        "<(a0; a1) | b1, b2>", optionally "c*<...>" and sums with +
//   Milnor      "{f, g}", optionally "c*{...}" and sums with +
//   Mackey      "{(a0; a1); b1, b2}_{E/F}" with E, F named "F_{p^k}", "F_q",
//               or "F_{p^k}(t)" over the rational function field
//   form        "f * dt"  |  "f dt"  |  "dt"

#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "kato/forms.hpp"
#include "kato/kato_groups.hpp"
#include "kato/mackey.hpp"
#include "kato/milnor.hpp"
#include "kato/witt.hpp"

namespace kato {

/// "F_4", "F_{2^2}", "F_2": the field and whether "(t)" followed.
std::pair<FieldPtr, bool> parse_field_name(std::string_view s);

FqElem parse_elem(std::string_view s, FieldPtr f);
RatFunc parse_ratfunc(std::string_view s, FieldPtr f);
Poly parse_poly(std::string_view s, FieldPtr f);
Place parse_place(std::string_view s, FieldPtr f);
WittFq parse_witt_fq(std::string_view s, FieldPtr f);
WittRat parse_witt_rat(std::string_view s, FieldPtr f);
KatoSymbol parse_kato_symbol(std::string_view s, FieldPtr f);
KatoSum parse_kato_sum(std::string_view s, FieldPtr f);
MilnorRat parse_milnor(std::string_view s, FieldPtr f);
DiffForm parse_form(std::string_view s, FieldPtr f);
std::variant<MackeySymbol, MackeySymbolRat> parse_mackey(std::string_view s);

}  // namespace kato
