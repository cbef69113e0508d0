#pragma once

// The rational function field F_q(t): canonical elements, places of the
// projective line, valuations, reduction and local expansions.

#include <optional>
#include <string>
#include <vector>

#include "kato/poly.hpp"

namespace kato {

/// num/den with den monic and gcd(num, den) = 1; zero is 0/1.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(FieldPtr f);
  RatFunc(Poly num);
  RatFunc(Poly num, Poly den);

  static RatFunc constant(const FqElem& c) { return RatFunc(Poly::constant(c)); }
  static RatFunc t(FieldPtr f) { return RatFunc(Poly::t(f)); }
  static RatFunc one(FieldPtr f) { return constant(FqElem::one(f)); }

  FieldPtr field() const noexcept { return num_.field(); }
  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_one() const noexcept { return num_.is_one() && den_.is_one(); }
  bool is_constant() const noexcept { return num_.degree() <= 0 && den_.degree() == 0; }
  /// Degree bound max(deg num, deg den).
  int height() const noexcept { return std::max(num_.degree(), den_.degree()); }

  RatFunc derivative() const;
  RatFunc inverse() const;
  RatFunc mapped(const Embedding& e) const;
  RatFunc frobenius_coeffs(std::uint64_t power) const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const RatFunc& a, const RatFunc& b) noexcept {
    if (a.den_ == b.den_) return a.num_ < b.num_;
    return a.den_ < b.den_;
  }

 private:
  void normalize();
  Poly num_;
  Poly den_;
};

RatFunc pow(const RatFunc& a, long long e);
/// Equality by cross-multiplication, independent of the normal form.
bool cross_equal(const RatFunc& a, const RatFunc& b);

/// A place of F_q(t): a monic irreducible pi, or the infinite place.
class Place {
 public:
  static Place finite(Poly pi);
  static Place infinity(FieldPtr f) { return Place(f); }

  bool is_infinite() const noexcept { return !pi_.has_value(); }
  const Poly& pi() const { return *pi_; }
  FieldPtr base() const noexcept { return base_; }
  int degree() const noexcept { return pi_ ? pi_->degree() : 1; }

  friend bool operator==(const Place& a, const Place& b) noexcept {
    return a.base_ == b.base_ && a.pi_ == b.pi_;
  }
  /// Degree, then lexicographic, infinity last.
  friend bool operator<(const Place& a, const Place& b) noexcept;

 private:
  explicit Place(FieldPtr f) : base_(f) {}
  FieldPtr base_ = nullptr;
  std::optional<Poly> pi_;
};

std::string to_string(const Place& v);

/// Residue field F(v) with the base embedding F_q -> F(v) and the image of t.
struct ResidueField {
  FieldPtr field;
  const Embedding* base;
  FqElem root;  // image of t; unused at infinity
};
const ResidueField& residue_field(const Place& v);

/// All monic irreducibles of degree <= max_degree, then infinity.
std::vector<Place> enumerate_places(FieldPtr f, int max_degree);

int valuation(const RatFunc& f, const Place& v);
FqElem residue_class(const RatFunc& f, const Place& v);
/// Zeros and poles of f, sorted.
std::vector<Place> support(const RatFunc& f);

/// Expansion in the local parameter: t - theta at a finite place (theta the
/// image of t in the residue field) and 1/t at infinity.
struct LaurentJet {
  Place place;
  int leading_exponent = 0;
  std::vector<FqElem> coeffs;
  int precision = 0;
  bool is_zero = false;

  FqElem coeff_at(int exponent) const;
};

LaurentJet laurent_expand(const RatFunc& f, const Place& v, int precision);

/// Res_v(h dt) as an element of the residue field.
FqElem residue_dt(const RatFunc& h, const Place& v);

/// f = unit * prod pi^e over finite places, plus the valuation at infinity.
struct RatFactorization {
  FqElem unit;
  std::vector<std::pair<Poly, int>> factors;
};
RatFactorization factor(const RatFunc& f);

std::string to_string(const RatFunc& f);

}  // namespace kato
