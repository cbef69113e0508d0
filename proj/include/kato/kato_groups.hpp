#pragma once

// H^{n+1}_{p^r}(F) through Kato's presentation W_r(F) (x) (F^x)^{(x)n} / J,
// for F = F_q and F = F_q(t); local invariants at places of F_q(t) and the
// Hasse-Brauer-Noether sum.
//
// Local invariants take values in Z/p^r: a class in W_r(F(v))/wp is sent to
// its Witt trace in W_r(F_p) = Z/p^r (see witt_invariant). The trace already
// carries the degree weighting, so the global condition is a plain sum.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kato/presentation.hpp"
#include "kato/ratfunc.hpp"
#include "kato/witt.hpp"

namespace kato {

/// coeff * <a | b_1, ..., b_n> over F_q(t).
struct KatoSymbol {
  WittRat a;
  std::vector<RatFunc> bs;
  long long coeff = 1;

  int weight() const noexcept { return static_cast<int>(bs.size()); }
  FieldPtr field() const noexcept { return a.field(); }
};
using KatoSum = std::vector<KatoSymbol>;

/// Validates nonzero b's and a common field; throws ZeroEntry or FieldMismatch.
KatoSymbol make_symbol(WittRat a, std::vector<RatFunc> bs, long long coeff = 1);

struct InvariantVector {
  std::uint32_t p = 0;
  std::uint32_t r = 0;
  std::map<Place, std::uint64_t> entries;  // nonzero entries only

  std::uint64_t modulus() const;
  std::uint64_t at(const Place& v) const;
  void add(const Place& v, std::uint64_t x);
  bool is_zero() const { return entries.empty(); }
  /// Sum of all local invariants mod p^r.
  std::uint64_t total() const;
  friend bool operator==(const InvariantVector& a, const InvariantVector& b) { return a.entries == b.entries; }
};

InvariantVector operator+(InvariantVector a, const InvariantVector& b);

/// Places where some b_i has a zero or pole or some coordinate of a a pole.
std::vector<Place> symbol_support(const KatoSymbol& s);

/// coeff * v(b) [a(v)] in W_r(F(v)) for n = 1; WildAtPlace if a has a pole at v.
WittFq residue_tame(const KatoSymbol& s, const Place& v);
/// Tr_{F(v)/F_p} Res_v(a dlog b) in Z/p, for r = 1 and n = 1.
std::uint64_t residue_schmid(const KatoSymbol& s, const Place& v);
/// Local invariant at v in Z/p^r: Schmid at r = 1, tame otherwise.
std::uint64_t local_invariant(const KatoSymbol& s, const Place& v);

/// Invariant vector of a sum of weight-1 symbols. Weight >= 2 gives the zero
/// vector (H^3 of F_q(t) vanishes); weight 0 raises UnsupportedDegree.
InvariantVector invariant_vector(const KatoSum& s);

/// Galois conjugation of coefficients: x -> x^{|sub|} applied `power` times.
KatoSymbol conjugate(const KatoSymbol& s, FieldPtr sub, std::uint32_t power = 1);
/// The place of F(t) under a place of E(t), E a constant extension of F.
Place place_below(const Place& w, FieldPtr sub);
/// Pulls back a rational function whose coefficients lie in `sub`.
std::optional<RatFunc> descend(const RatFunc& x, FieldPtr sub);
/// Witt trace Sum sigma^i(a) over a constant extension, pulled back to `sub`.
WittRat witt_trace_rat(const WittRat& a, FieldPtr sub);

/// Corestriction from E(t) to F(t), E = F_{q^m} and F = F_q.
struct CorResult {
  /// <Tr a | b> when every b_i descends to F(t) (projection formula).
  std::optional<KatoSymbol> rational;
  /// sum of the Galois conjugates, over E(t)
  KatoSum galois_sum;
  /// inv_v(cor s) = sum over w above v of inv_w(s)
  InvariantVector invariants;
};
CorResult corestriction_const(const KatoSymbol& s, FieldPtr sub);
/// Invariants of cor(sum) pushed to the places of F(t).
InvariantVector cor_invariants(const KatoSum& s, FieldPtr sub);

// ---------------------------------------------------------------------------
// bounded presentations

enum class RelationKind { Repeated, Diagonal, Wp, Multiplicative };
std::string to_string(RelationKind k);

struct RelationInstance {
  RelationKind kind;
  int position = 0;   // Witt coordinate for Diagonal
  KatoSum symbols;    // the relation element, as a formal sum
};

/// Pool for F_q(t): multiplicative generators (constants other than 1 and
/// monic irreducibles of degree <= D) and an additive pool of Witt vectors.
/// At r = 1 the additive pool is the F_p-span of c t^i (i <= D) and
/// c t^i / pi (pi in the pool, i < deg pi), with c in the F_p-basis of F_q;
/// at r > 1 it is W_r(F_q), spanned by the Teichmuller basis.
struct KatoPool {
  FieldPtr field = nullptr;
  std::uint32_t r = 1;
  int n = 1;
  int D = 1;
  std::vector<RatFunc> mult;       // multiplicative generators
  std::vector<WittRat> witt_basis;  // Z/p^r basis of the additive pool
  std::vector<Poly> irreducibles;
};
KatoPool make_pool(FieldPtr f, std::uint32_t r, int n, int D);

/// Coordinates of a in the additive pool, if it lies there.
std::optional<ZVec> witt_decompose(const KatoPool& pool, const WittRat& a);
/// Generator coordinates of a symbol, if its data lie in the pools.
std::optional<ZVec> symbol_coordinates(const KatoPool& pool, const KatoSymbol& s);

/// Instances of (a) b_i = b_j, (b) (0,..,x,..,0) (x) x (x) ..., (c) wp(a) (x) ...,
/// and multiplicativity of constants, closed under the pool.
/// At r = 1 the additive pool is enumerated in full when it has at most 2^14
/// elements; otherwise only combinations of at most `max_support` basis
/// vectors are used for (b) and (c).
std::vector<RelationInstance> relation_instances(const KatoPool& pool, int max_support = 3);

struct HGroupTruncation {
  KatoPool pool;
  GroupPresentation group;
  std::map<RelationKind, std::size_t> census;
  /// The generator symbols, in column order.
  std::vector<KatoSymbol> generators;
};
HGroupTruncation h_truncation(FieldPtr f, std::uint32_t r, int n, int D, int max_support = 3);

/// The finite-field case F = F_q: generators are Teichmuller basis vectors
/// times n-tuples from F_q^x.
struct HGroupFinite {
  GroupPresentation group;
  std::map<RelationKind, std::size_t> census;
};
HGroupFinite h_truncation_finite(FieldPtr f, std::uint32_t r, int n);

// ---------------------------------------------------------------------------
// Hasse-Brauer-Noether

struct HbnReport {
  std::size_t samples = 0;
  std::size_t sum_failures = 0;
  std::size_t wild_samples = 0;  // r = 1 samples with a pole of a in the support
  bool pair_witness = false;     // a symbol with invariants at exactly two places
  std::size_t probes = 0;
  std::size_t probe_failures = 0;
  bool ok() const { return sum_failures == 0 && pair_witness && probe_failures == 0; }
};
/// Random samples from `seed`: tame ones with constant a for every r and, at
/// r = 1, ones with a = N/M of degree <= D. The injectivity probe builds
/// `probes` combinations of pool generators with vanishing invariant vector
/// and checks they are zero in h_truncation (r = 1 only).
HbnReport hbn_check(FieldPtr f, std::uint32_t r, int D, std::uint64_t seed, std::size_t samples, std::size_t probes);

std::string to_string(const KatoSymbol& s);
std::string to_string(const InvariantVector& v);

}  // namespace kato
