#pragma once

// Dense univariate polynomials over a finite field, in the variable t.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kato/fq.hpp"

namespace kato {

class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldPtr f) : field_(f) {}
  Poly(FieldPtr f, std::vector<std::uint32_t> coeffs);

  static Poly constant(const FqElem& c);
  static Poly monomial(const FqElem& c, std::size_t deg);
  /// t - alpha
  static Poly linear(const FqElem& alpha);
  static Poly t(FieldPtr f) { return monomial(FqElem::one(f), 1); }

  FieldPtr field() const noexcept { return field_; }
  /// Degree, with -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == field_->from_int(1); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == field_->from_int(1); }
  const std::vector<std::uint32_t>& codes() const noexcept { return c_; }
  FqElem coeff(std::size_t i) const { return {field_, i < c_.size() ? c_[i] : 0u}; }
  FqElem lead() const { return coeff(c_.empty() ? 0 : c_.size() - 1); }

  FqElem eval(const FqElem& x) const;
  Poly derivative() const;
  Poly monic() const;
  Poly scaled(const FqElem& c) const;
  /// Coefficients mapped through a field embedding.
  Poly mapped(const Embedding& e) const;
  /// Coefficients mapped through the relative Frobenius x -> x^(q_sub).
  Poly frobenius_coeffs(std::uint64_t power) const;
  /// p(t) -> p(t + a)
  Poly taylor_shift(const FqElem& a) const;
  /// t^deg p(1/t)
  Poly reversed() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) noexcept {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }
  /// Degree first, then coefficients from the constant term upward by code
  /// with the highest coefficient most significant.
  friend bool operator<(const Poly& a, const Poly& b) noexcept;

 private:
  void trim();
  FieldPtr field_ = nullptr;
  std::vector<std::uint32_t> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
Poly pow(const Poly& a, std::uint64_t e);
bool divides(const Poly& d, const Poly& a);

/// Monic irreducibles of exact degree d over f in increasing order.
const std::vector<Poly>& monic_irreducibles(FieldPtr f, int d);
bool is_irreducible(const Poly& a);

/// a = lead * prod pi^e with pi monic irreducible, sorted by (deg, order).
struct Factorization {
  FqElem unit;
  std::vector<std::pair<Poly, int>> factors;
};
Factorization factor(const Poly& a);

std::string to_string(const Poly& a);

}  // namespace kato
