#pragma once

// Mackey products (W_r (x)^M G_m^{(x)n})(F) over lattices of finite
// extensions: projection-formula rewriting, transfer and restriction, bounded
// presentations over Z/p^r, and the extended symbol into H^{n+1}.
//
// Symbols are {a; b_1, ..., b_n}_{E/F'} with a in W_r(E) and b_i in E^x,
// where F' (the base of the symbol) lies between the lattice base and E.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kato/kato_groups.hpp"
#include "kato/presentation.hpp"
#include "kato/witt.hpp"

namespace kato {

/// Constant-field extensions F_{q^m} (or F_{q^m}(t) when `rational`) of the
/// base F_q for 1 <= m <= bound.
struct FieldLattice {
  FieldPtr base = nullptr;
  int bound = 1;
  bool rational = false;
  std::vector<FieldPtr> members;  // members[m-1] = F_{q^m}

  /// The member of degree m over the base; throws NotASubfield if absent.
  FieldPtr member(int m) const;
  /// [E : base]
  int degree_of(FieldPtr E) const;
  bool contains(FieldPtr E) const;
  /// E below E' in the lattice.
  bool comparable(FieldPtr E, FieldPtr Ep) const;
  std::string name(FieldPtr E) const;
};
FieldLattice make_lattice(FieldPtr base, int bound, bool rational = false);

/// {a; b_1, ..., b_n}_{level/base}, over finite fields.
struct MackeySymbol {
  FieldPtr base = nullptr;
  WittFq a;
  std::vector<FqElem> bs;
  long long coeff = 1;

  FieldPtr level() const noexcept { return a.field(); }
  int weight() const noexcept { return static_cast<int>(bs.size()); }
};
using MackeySum = std::vector<MackeySymbol>;

/// {a; b}_{E(t)/F'(t)} over constant-field extensions of F_q(t).
struct MackeySymbolRat {
  FieldPtr base = nullptr;  // constant field of the base
  WittRat a;
  std::vector<RatFunc> bs;
  long long coeff = 1;

  FieldPtr level() const noexcept { return a.field(); }
  int weight() const noexcept { return static_cast<int>(bs.size()); }
};

/// Validates that the data live over a common field containing `base`.
MackeySymbol make_mackey(FieldPtr base, WittFq a, std::vector<FqElem> bs, long long coeff = 1);
MackeySymbolRat make_mackey(FieldPtr base, WittRat a, std::vector<RatFunc> bs, long long coeff = 1);

/// Slot 0 is the Witt slot, slots 1..n the multiplicative ones.
enum class PfDirection { Up, Down };

/// Projection-formula rewrite in slot `slot` along E = level(s) below Ep.
/// Up: {.., tr(xi), ..}_{E} -> {res .., xi, res ..}_{Ep}, searching for xi.
/// Down: {res .., xi, res ..}_{Ep} -> {.., tr(xi), ..}_{E}; the other slots
/// must descend to E. Throws NoPreimage when no certificate exists.
MackeySymbol pf_rewrite(const MackeySymbol& s, PfDirection dir, FieldPtr other, int slot);

/// tr_{F'/F''}: relabels the base.
MackeySymbol transfer(const MackeySymbol& s, FieldPtr new_base);
/// res_{E/F'} of a symbol with base F' below E: the sum over the factors of
/// E (x)_{F'} level, each of multiplicity 1 (the algebra is etale).
MackeySum restriction(const MackeySymbol& s, FieldPtr up);
/// Representative fixed by conjugation over the base: the least Galois
/// conjugate of the data. Conjugate symbols are equal in the product.
MackeySymbol canonical(const MackeySymbol& s);
/// Canonical formal sum with coefficients collected.
std::map<std::string, long long> canonical_sum(const MackeySum& s);

/// Witt vector xi over Ep with witt_trace(xi, E) = x, if any.
std::optional<WittFq> solve_witt_trace(const WittFq& x, FieldPtr Ep);
/// y in Ep^x with norm(y, E) = x, if any.
std::optional<FqElem> solve_norm(const FqElem& x, FieldPtr Ep);

struct MackeyGroupTruncation {
  FieldLattice lattice;
  int n = 1;
  std::uint32_t r = 1;
  bool wp_quotient = false;
  GroupPresentation group;
  std::map<std::string, std::size_t> census;  // "multiplicative", "pf", "wp"
  std::vector<std::size_t> level_offsets;     // first column of each member
};
/// Generators: the Teichmuller basis of W_r(E) times zeta_E^{(x)n} at every
/// member E, with base the lattice base. Relations: multilinearity
/// (zeta_E^{|E|-1} = 1), every (PF) instance on basis data for every
/// comparable pair and slot, and optionally wp of the basis at every level.
MackeyGroupTruncation mackey_group(const FieldLattice& lattice, int n, std::uint32_t r, bool wp_quotient);
/// Column coordinates of a symbol whose base is the lattice base.
ZVec mackey_coordinates(const MackeyGroupTruncation& g, const MackeySymbol& s);

/// Extended symbol for base F_q(t): the Kato symbol over E(t) corestricted to
/// the base, as an invariant vector. Weight must be 1.
InvariantVector extended_symbol(const MackeySymbolRat& s);
/// Over a finite base: the H^1 class (weight 0, in Z/p^r via the Witt
/// trace) or 0 for weight >= 1, since H^{n+1}(F_q) = 0 for n >= 1.
std::uint64_t extended_symbol(const MackeySymbol& s);

/// A (PF) instance over F_q(t): the two sides of the projection formula.
struct PfInstanceRat {
  int slot = 0;
  MackeySymbolRat lower;  // level E
  MackeySymbolRat upper;  // level Ep
};
/// Every (PF) instance for comparable pairs of the rational lattice on the
/// pool: Witt data c t^i (i <= 1) and c/(t - alpha) at r = 1, Teichmuller and
/// V-shifted constants at r > 1; multiplicative data constants and t - alpha.
std::vector<PfInstanceRat> pf_instances_rat(const FieldLattice& lattice, std::uint32_t r);

struct TransferSurjectivity {
  bool ok = true;
  std::size_t generators = 0;
  std::vector<std::string> failures;
};
/// Every basis generator {[beta]; zeta_F^{(x)n}}_{F/F} is exhibited as the
/// transfer of a symbol over Fp, found by solving the Witt trace equation
/// and checked by recomputing the trace.
TransferSurjectivity transfer_surjectivity_check(FieldPtr F, FieldPtr Fp, int n, std::uint32_t r);

/// The square relating dlog to <1 | ->: the invariants of a dlog b (forms
/// route) agree with those of extended_symbol({a; b}) (symbol route), for a
/// random a of degree <= D (a = 1 on even samples) and random b.
struct DsmReport {
  bool ok = true;
  std::size_t samples = 0;
  std::size_t failures = 0;
};
DsmReport dsm_check(FieldPtr f, int D, std::uint64_t seed, std::size_t samples);

std::string to_string(const MackeySymbol& s);
std::string to_string(const MackeySymbolRat& s);

}  // namespace kato
