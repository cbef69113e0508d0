#pragma once

// Truncated p-typical Witt vectors W_r over F_q or F_q(t).
//
// Ring operations evaluate universal Witt polynomials. These are built by the
// ghost-component recursion; since only their reduction mod p is ever used,
// coordinate n is computed in Z/p^{n+1}, which is exact because
// a = b mod p implies a^{p^k} = b^{p^k} mod p^{k+1}.

#include <cstdint>
#include <string>
#include <vector>

#include "kato/fq.hpp"
#include "kato/presentation.hpp"
#include "kato/ratfunc.hpp"

namespace kato {

inline constexpr std::uint32_t kMaxWittLength = 4;

/// Polynomial with coefficients in Z/p over numbered variables.
struct MPoly {
  struct Term {
    std::uint32_t coeff;
    std::vector<std::uint16_t> exps;
  };
  std::size_t nvars = 0;
  std::vector<Term> terms;  // sorted by exponent vector
  std::vector<std::uint32_t> max_exp;  // per variable

  std::string to_string(const std::vector<std::string>& names) const;
};

/// Universal polynomials for W_r at the prime p. Variables X_0..X_{r-1} are
/// numbered 0..r-1 and Y_j is r+j.
struct WittPolyCache {
  std::uint32_t p;
  std::uint32_t r;
  std::vector<MPoly> sum_polys;
  std::vector<MPoly> prod_polys;
  std::vector<MPoly> neg_polys;
};

/// Memoized; throws LengthTooLarge for r > 4 or when p^{r-1} > 64.
const WittPolyCache& witt_polys(std::uint32_t p, std::uint32_t r);

template <class T>
class WittVector {
 public:
  WittVector() = default;
  explicit WittVector(std::vector<T> entries);

  static WittVector zero(FieldPtr f, std::uint32_t r);
  static WittVector one(FieldPtr f, std::uint32_t r);

  std::uint32_t length() const noexcept { return static_cast<std::uint32_t>(e_.size()); }
  FieldPtr field() const noexcept { return field_; }
  std::uint32_t p() const noexcept { return field_->p(); }
  const std::vector<T>& entries() const noexcept { return e_; }
  const T& operator[](std::size_t i) const { return e_.at(i); }
  bool is_zero() const;

  friend bool operator==(const WittVector& a, const WittVector& b) { return a.e_ == b.e_; }
  friend bool operator<(const WittVector& a, const WittVector& b) { return a.e_ < b.e_; }

 private:
  FieldPtr field_ = nullptr;
  std::vector<T> e_;
};

using WittFq = WittVector<FqElem>;
using WittRat = WittVector<RatFunc>;

template <class T> WittVector<T> add(const WittVector<T>& x, const WittVector<T>& y);
template <class T> WittVector<T> mul(const WittVector<T>& x, const WittVector<T>& y);
template <class T> WittVector<T> neg(const WittVector<T>& x);
template <class T> WittVector<T> sub(const WittVector<T>& x, const WittVector<T>& y);
/// n * x for an integer n (negative allowed).
template <class T> WittVector<T> int_mul(const WittVector<T>& x, long long n);
/// Coordinatewise p-th power.
template <class T> WittVector<T> frobenius_W(const WittVector<T>& x);
/// (x_0, ..., x_{r-1}) -> (0, x_0, ..., x_{r-2})
template <class T> WittVector<T> verschiebung(const WittVector<T>& x);
/// frobenius_W(x) - x
template <class T> WittVector<T> wp(const WittVector<T>& x);
/// Drops coordinates beyond the new length.
template <class T> WittVector<T> truncate(const WittVector<T>& x, std::uint32_t r);

template <class T> WittVector<T> operator+(const WittVector<T>& x, const WittVector<T>& y) { return add(x, y); }
template <class T> WittVector<T> operator-(const WittVector<T>& x, const WittVector<T>& y) { return sub(x, y); }
template <class T> WittVector<T> operator-(const WittVector<T>& x) { return neg(x); }
template <class T> WittVector<T> operator*(const WittVector<T>& x, const WittVector<T>& y) { return mul(x, y); }

WittFq teichmuller(const FqElem& b, std::uint32_t r);
WittRat teichmuller(const RatFunc& b, std::uint32_t r);

/// Applies a field embedding coordinatewise.
WittFq map_witt(const WittFq& x, const Embedding& e);
WittRat map_witt(const WittRat& x, const Embedding& e);
/// Constant Witt vector viewed over F_q(t).
WittRat to_rational(const WittFq& x);
/// Reduction at a place where all coordinates are regular; throws PoleAtPlace.
WittFq reduce_at(const WittRat& x, const Place& v);

/// Witt trace down to a subfield: the Witt sum of the Galois conjugates.
WittFq witt_trace(const WittFq& x, FieldPtr sub);

/// W_r(F_p) -> Z/p^r, via the last ghost component of integer lifts.
std::uint64_t witt_to_int(const WittFq& x);
WittFq int_to_witt(std::uint64_t n, FieldPtr fp, std::uint32_t r);
/// Class in W_r(F_q)/wp = Z/p^r, read through the Witt trace to W_r(F_p).
std::uint64_t witt_invariant(const WittFq& x);

/// Coordinates in the Z/p^r basis [1], [g], ..., [g^{k-1}] of W_r(F_q), where
/// g is the field generator.
ZVec witt_coordinates(const WittFq& x);
WittFq witt_from_coordinates(const ZVec& c, FieldPtr f, std::uint32_t r);

/// Dense indexing of W_r(F_q): index = sum code_i q^i.
std::uint64_t witt_index(const WittFq& x);
WittFq witt_from_index(std::uint64_t idx, FieldPtr f, std::uint32_t r);

/// W_r(F_q)/wp presented on the basis of witt_coordinates.
struct CokerWp {
  GroupPresentation group;
  /// |wp(W_r(F_q))| found by enumerating every Witt vector.
  std::uint64_t image_size = 0;
  /// A generator of the cokernel: [1] when its class generates, else the
  /// Teichmüller lift of the least element with nonzero trace.
  WittFq distinguished;
};

/// Throws TooLarge when q^r > 2^20.
CokerWp coker_wp(FieldPtr f, std::uint32_t r);

std::string to_string(const WittFq& x);
std::string to_string(const WittRat& x);

}  // namespace kato
