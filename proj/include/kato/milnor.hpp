#pragma once

// Milnor K-symbols {b_1, ..., b_n} over F_q and F_q(t): Steinberg rewriting,
// tame symbols at places, Weil reciprocity, and bounded presentations of
// K_n^M / p^r.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kato/presentation.hpp"
#include "kato/ratfunc.hpp"

namespace kato {

/// Integer combination of n-fold symbols with nonzero entries.
template <class T>
class MilnorSymbol {
 public:
  using Tuple = std::vector<T>;

  MilnorSymbol() = default;
  explicit MilnorSymbol(int weight) : n_(weight) {}
  /// The single symbol {entries} with a coefficient; throws ZeroEntry.
  static MilnorSymbol single(Tuple entries, long long coeff = 1);

  int weight() const noexcept { return n_; }
  const std::map<Tuple, long long>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  void add_term(const Tuple& entries, long long coeff);

  friend MilnorSymbol operator+(MilnorSymbol a, const MilnorSymbol& b) {
    a.check_weight(b);
    for (const auto& [t, c] : b.terms_) a.add_term(t, c);
    return a;
  }
  friend MilnorSymbol operator-(const MilnorSymbol& a) {
    MilnorSymbol out(a.n_);
    for (const auto& [t, c] : a.terms_) out.add_term(t, -c);
    return out;
  }
  friend MilnorSymbol operator-(const MilnorSymbol& a, const MilnorSymbol& b) { return a + (-b); }
  friend bool operator==(const MilnorSymbol& a, const MilnorSymbol& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

 private:
  void check_weight(const MilnorSymbol& b) const;
  int n_ = 0;
  std::map<Tuple, long long> terms_;
};

using MilnorFq = MilnorSymbol<FqElem>;
using MilnorRat = MilnorSymbol<RatFunc>;

/// Normal form: drops symbols containing 1, a pair (x, 1-x) or a pair (x, -x),
/// rewrites a repeated entry x as -1, and sorts entries with the sign of the
/// permutation. The result is a fixed point of the pass.
template <class T>
MilnorSymbol<T> steinberg_reduce(const MilnorSymbol<T>& s);

/// Boundary of a weight-2 symbol at v: the class of
/// (-1)^{v(f)v(g)} g^{v(f)} / f^{v(g)} in F(v)^x, multiplied over the terms.
/// With this normalization the boundary of {pi, u} is the reduction of u.
FqElem tame_symbol(const MilnorRat& s, const Place& v);

struct WeilReport {
  bool ok = false;
  std::vector<std::pair<Place, FqElem>> residues;  // nontrivial only
  FqElem product;
};
/// Product over the support of N_{F(v)/F_q}(boundary at v). Throws
/// SupportExceedsBound if an entry has degree above D.
WeilReport weil_check(const MilnorRat& s, int D);

struct KPresentation {
  GroupPresentation group;
  std::vector<std::string> pool;  // multiplicative generators
  std::size_t relation_instances = 0;
};

/// K_n^M(F_q)/p^r from all of F_q^x: generators are n-tuples, relations are
/// multiplicativity in each slot and adjacent Steinberg relations.
KPresentation k_mod_presentation(FieldPtr f, int n, std::uint32_t r);
/// K_n^M(F_q(t))/p^r on the pool of constants and monic irreducibles of
/// degree <= D. Entries are expanded through unique factorization; relations
/// are multiplicativity of constants and {x, 1-x}, {x, -x} for x = a/m with
/// deg a, deg m <= D.
KPresentation k_mod_presentation(FieldPtr f, int n, std::uint32_t r, int D);

/// Every f = a/m with deg a, deg m <= D: dlog f is exact iff dlog f = 0 iff
/// f is a p-th power.
struct DlogKernelReport {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t pth_powers = 0;
};
DlogKernelReport dlog_kernel_check(FieldPtr f, int D);

std::string to_string(const MilnorFq& s);
std::string to_string(const MilnorRat& s);

}  // namespace kato
