#pragma once

// Finite fields F_{p^k} with table-driven arithmetic and a lazily built
// extension lattice.
//
// Elements are coded as integers in [0, q): the base-p digits of the code
// are the coefficients c_0, ..., c_{k-1} of the residue class
// c_0 + c_1 x + ... + c_{k-1} x^{k-1} modulo the defining polynomial.
// Fields are interned for the lifetime of the process, so a field is
// referred to by a plain `const FiniteField*`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kato/error.hpp"

namespace kato {

class FiniteField;
using FieldPtr = const FiniteField*;

/// Largest field size supported by the lookup tables.
inline constexpr std::uint32_t kMaxFieldSize = 1u << 20;

bool is_prime(std::uint64_t n) noexcept;

/// Polynomials over Z/p as coefficient vectors, lowest degree first.
namespace fp_poly {
using Poly = std::vector<std::uint32_t>;
void trim(Poly& a);
Poly mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p);
Poly rem(Poly a, const Poly& m, std::uint32_t p);
Poly gcd(Poly a, Poly b, std::uint32_t p);
bool is_irreducible(const Poly& f, std::uint32_t p);
}  // namespace fp_poly

class FiniteField {
 public:
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return k_; }
  std::uint32_t size() const noexcept { return q_; }
  const fp_poly::Poly& defining_poly() const noexcept { return poly_; }
  bool is_prime_field() const noexcept { return k_ == 1; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg(std::uint32_t a) const noexcept;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept;
  std::uint32_t frob(std::uint32_t a) const noexcept { return frob_[a]; }
  /// Image of the integer n under Z -> F_p -> F.
  std::uint32_t from_int(long long n) const noexcept;
  /// The class of x, a root of the defining polynomial.
  std::uint32_t generator() const noexcept { return k_ == 1 ? 1 % q_ : p_; }
  std::uint32_t primitive() const noexcept { return exp_[1 % (q_ - 1)]; }
  /// Discrete logarithm base `primitive()`; a must be nonzero.
  std::uint32_t log(std::uint32_t a) const noexcept { return log_[a]; }
  std::uint32_t exp(std::uint32_t e) const noexcept { return exp_[e % (q_ - 1)]; }
  std::vector<std::uint32_t> digits(std::uint32_t a) const;
  std::uint32_t from_digits(const std::vector<std::uint32_t>& d) const;
  bool in_prime_field(std::uint32_t a) const noexcept { return a < p_; }

  std::string name() const;

 private:
  friend FieldPtr make_field(std::uint32_t, std::uint32_t, std::optional<fp_poly::Poly>);
  FiniteField(std::uint32_t p, std::uint32_t k, fp_poly::Poly poly);

  std::uint32_t p_;
  std::uint32_t k_;
  std::uint32_t q_;
  fp_poly::Poly poly_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> frob_;
};

/// Interned field F_{p^k}. Without `poly`, the lexicographically least monic
/// irreducible of degree k is used (least significant coefficient varies fastest).
FieldPtr make_field(std::uint32_t p, std::uint32_t k,
                    std::optional<fp_poly::Poly> poly = std::nullopt);

/// Field element: a handle plus a code.
struct FqElem {
  FieldPtr field = nullptr;
  std::uint32_t v = 0;

  static FqElem zero(FieldPtr f) { return {f, 0}; }
  static FqElem one(FieldPtr f) { return {f, f->from_int(1)}; }
  static FqElem from_int(FieldPtr f, long long n) { return {f, f->from_int(n)}; }

  bool is_zero() const noexcept { return v == 0; }
  bool is_one() const noexcept { return field->from_int(1) == v; }
  std::vector<std::uint32_t> coeffs() const { return field->digits(v); }

  friend bool operator==(const FqElem& a, const FqElem& b) noexcept {
    return a.field == b.field && a.v == b.v;
  }
  friend auto operator<=>(const FqElem& a, const FqElem& b) noexcept { return a.v <=> b.v; }
};

void check_same_field(const FqElem& a, const FqElem& b);

FqElem operator+(const FqElem& a, const FqElem& b);
FqElem operator-(const FqElem& a, const FqElem& b);
FqElem operator-(const FqElem& a);
FqElem operator*(const FqElem& a, const FqElem& b);
FqElem operator/(const FqElem& a, const FqElem& b);
FqElem inverse(const FqElem& a);
FqElem pow(const FqElem& a, std::uint64_t e);
FqElem frobenius(const FqElem& a);

/// Ring embedding source -> target sending the source generator to a root of
/// its defining polynomial in the target (least code among the roots).
class Embedding {
 public:
  FieldPtr source() const noexcept { return src_; }
  FieldPtr target() const noexcept { return dst_; }
  FqElem image_of_generator() const noexcept { return {dst_, gen_image_}; }

  FqElem operator()(const FqElem& x) const;
  std::uint32_t apply(std::uint32_t code) const noexcept { return table_[code]; }
  /// Preimage of y if y lies in the image.
  std::optional<FqElem> preimage(const FqElem& y) const;

 private:
  friend const Embedding& embedding(FieldPtr, FieldPtr);
  Embedding(FieldPtr src, FieldPtr dst, std::uint32_t gen_image);

  FieldPtr src_;
  FieldPtr dst_;
  std::uint32_t gen_image_;
  std::vector<std::uint32_t> table_;
  std::vector<std::int64_t> inverse_;
};

/// Cached embedding; throws NotASubfield unless deg(source) divides deg(target).
const Embedding& embedding(FieldPtr source, FieldPtr target);

/// Relative trace and norm of x down to `sub`, returned as elements of `sub`.
FqElem trace(const FqElem& x, FieldPtr sub);
FqElem norm(const FqElem& x, FieldPtr sub);

/// All elements of a field in code order.
std::vector<FqElem> elements(FieldPtr f);

std::string to_string(const FqElem& x);

}  // namespace kato
