#pragma once

// Differential forms on F_q(t). Since {t} is a p-basis, Omega^1 is free on dt
// and Omega^n = 0 for n >= 2. Over F_q itself every positive-degree form is 0.

#include <optional>
#include <string>
#include <vector>

#include "kato/presentation.hpp"
#include "kato/ratfunc.hpp"

namespace kato {

/// Degree-0 form f or degree-1 form f dt.
struct DiffForm {
  int degree = 1;
  RatFunc f;

  static DiffForm zero(FieldPtr k, int degree = 1) { return {degree, RatFunc(k)}; }
  static DiffForm function(RatFunc f) { return {0, std::move(f)}; }
  static DiffForm one_form(RatFunc f) { return {1, std::move(f)}; }

  FieldPtr field() const noexcept { return f.field(); }
  bool is_zero() const noexcept { return f.is_zero(); }

  friend bool operator==(const DiffForm& a, const DiffForm& b) { return a.degree == b.degree && a.f == b.f; }
};

DiffForm operator+(const DiffForm& a, const DiffForm& b);
DiffForm operator-(const DiffForm& a, const DiffForm& b);
DiffForm operator-(const DiffForm& a);
/// Multiplication by a function.
DiffForm operator*(const RatFunc& g, const DiffForm& w);

DiffForm d(const DiffForm& x);
DiffForm d(const RatFunc& x);
DiffForm dlog(const RatFunc& b);

/// Cartier operator: f dt = sum_i f_i^p t^i dt  ->  f_{p-1} dt.
DiffForm cartier(const DiffForm& w);
/// f dt -> f^p t^{p-1} dt, a right inverse of cartier.
DiffForm inv_cartier(const DiffForm& w);
/// Exactness through the Cartier criterion: w in dF iff C(w) = 0.
bool is_exact(const DiffForm& w);

/// Smallest i with w in B_i = ker C^i, searched up to max_level.
struct BClass {
  DiffForm form;
  std::optional<int> level;  // empty: not in B_max_level
  int search_bound = 0;
  std::vector<DiffForm> chain;  // w, C(w), C^2(w), ...
};
BClass b_level(const DiffForm& w, int max_level);

/// Representative of C^{-1}(w) - w modulo exact forms.
DiffForm wp_form(const DiffForm& w);

/// Pool of forms (N/M) dt with deg N <= D and M monic of degree <= D.
std::vector<DiffForm> form_pool(FieldPtr k, int D);

struct WpSurjectivityReport {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t in_binf = 0;
  std::vector<std::string> failures;
};
/// For every pool form of B-level <= L, builds y = sum_{k>=1} C^k(x) and
/// checks wp(y) = x modulo B_1.
WpSurjectivityReport wp_surjective_on_Binf(FieldPtr k, int L, int D);

/// Local invariant Tr_{F(v)/F_p} Res_v(w) in Z/p of a 1-form.
std::uint64_t form_invariant(const DiffForm& w, const Place& v);

/// The r = 1 group coker(wp: Omega^n -> Omega^n / dOmega^{n-1}) on a pool of
/// forms c t^i dt / pi (pi of degree <= D). Classes are detected by their
/// local invariants at the places of degree <= D and infinity; relations are
/// the combinations whose invariants all vanish.
struct HGroupR1 {
  GroupPresentation group;
  std::vector<DiffForm> pool;
  std::vector<Place> places;
  std::vector<ZVec> invariants;  // per pool form
};
/// rational = false means the constant field F_q, where Omega^1 = 0.
HGroupR1 h_group_r1(FieldPtr k, int n, int D, bool rational = true);

std::string to_string(const DiffForm& w);

}  // namespace kato
