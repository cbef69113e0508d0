#pragma once

// Finitely generated modules over Z/p^r given by generators and relations.
//
// Relations are reduced online into a Howell-form basis, so membership
// ("is this combination zero in the quotient?") is decided by plain
// reduction and the quotient order is read off the pivots.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kato {

using ZVec = std::vector<std::uint64_t>;

/// Arithmetic in Z/p^r.
class ZModPr {
 public:
  ZModPr(std::uint32_t p, std::uint32_t r);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t r() const noexcept { return r_; }
  std::uint64_t modulus() const noexcept { return n_; }

  std::uint64_t reduce(long long x) const noexcept;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept { return (a + b) % n_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return (a + n_ - b) % n_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept { return (a * b) % n_; }
  /// p-adic valuation, r for zero.
  std::uint32_t val(std::uint64_t a) const noexcept;
  /// Inverse of a unit.
  std::uint64_t unit_inverse(std::uint64_t u) const;
  std::uint64_t p_pow(std::uint32_t k) const noexcept { return pw_[k]; }

 private:
  std::uint32_t p_;
  std::uint32_t r_;
  std::uint64_t n_;
  std::vector<std::uint64_t> pw_;
};

/// Row basis of a submodule of (Z/p^r)^n in Howell form.
class HowellBasis {
 public:
  HowellBasis(ZModPr ring, std::size_t ncols);

  const ZModPr& ring() const noexcept { return ring_; }
  std::size_t ncols() const noexcept { return ncols_; }

  /// Adds a row to the spanned submodule; returns true if the span grew.
  bool insert(ZVec v);
  /// Reduces v against the basis; the result is zero iff v is in the span.
  ZVec reduce(ZVec v) const;
  bool contains(const ZVec& v) const;
  /// log_p of the order of the spanned submodule.
  std::uint64_t span_log_order() const;
  /// Pivot rows in column order.
  std::vector<ZVec> rows() const;

 private:
  ZModPr ring_;
  std::size_t ncols_;
  std::vector<std::optional<ZVec>> pivot_;  // indexed by pivot column
};

/// Smith invariants of the cokernel of `rows`: exponents k_i of Z/p^k_i with k_i > 0.
std::vector<std::uint32_t> cokernel_invariants(const ZModPr& ring, std::vector<ZVec> rows, std::size_t ncols);

/// Generators of {x : x A = 0} for the m x n matrix A given by rows.
std::vector<ZVec> left_kernel(const ZModPr& ring, const std::vector<ZVec>& rows, std::size_t ncols);

/// Quotient module (Z/p^r)^generators / <relations>.
class GroupPresentation {
 public:
  GroupPresentation(std::uint32_t p, std::uint32_t r, std::vector<std::string> generators = {});

  const ZModPr& ring() const noexcept { return basis_.ring(); }
  std::size_t generator_count() const noexcept { return generators_.size(); }
  const std::vector<std::string>& generators() const noexcept { return generators_; }
  const std::vector<ZVec>& relations() const noexcept { return relations_; }

  /// Appends a generator; only valid before any relation is added.
  std::size_t add_generator(std::string label);
  /// Adds a relation row. Only rows that enlarge the relation span are kept
  /// in relations(); returns whether this one did.
  bool add_relation(const ZVec& row);

  /// log_p |quotient|
  std::uint64_t log_order() const;
  /// |quotient|; throws TooLarge when it does not fit in 64 bits.
  std::uint64_t order() const;
  bool is_trivial() const { return log_order() == 0; }
  /// Invariant factor exponents, ascending.
  std::vector<std::uint32_t> invariant_factors() const;
  /// Whether the combination is zero in the quotient.
  bool is_zero(const ZVec& combination) const { return basis_.contains(combination); }
  ZVec unit_vector(std::size_t i) const;
  const HowellBasis& howell() const noexcept { return basis_; }

 private:
  std::vector<std::string> generators_;
  std::vector<ZVec> relations_;
  HowellBasis basis_;
};

}  // namespace kato
