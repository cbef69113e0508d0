#pragma once

// The degree-truncated Kato complex of P^1 over F_q:
//   H^2_{p^r}(F_q(t)) --d--> (+)_{x, deg x <= D} W_r(F(x))/wp --Cor--> W_r(F_q)/wp,
// its homology KH_0 at the middle term, and the finite-field theorem
// KH_0 = Z/p^r at truncation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kato/kato_groups.hpp"
#include "kato/presentation.hpp"

namespace kato {

/// A degree-1 generator: a symbol over F_q(t), or over F_{q^m}(t) to be
/// corestricted (cor_from set to F_{q^m}).
struct ComplexGenerator {
  KatoSymbol symbol;
  FieldPtr cor_from = nullptr;
  std::string label;
};

struct KatoComplexP1 {
  FieldPtr field = nullptr;
  std::uint32_t r = 1;
  int D = 1;
  int symbol_bound = 1;
  std::vector<Place> places;             // degree <= D, then infinity
  std::vector<std::size_t> offsets;      // first deg0 column of each place
  std::vector<WittFq> distinguished;     // a generator of each W_r(F(x))/wp
  std::vector<std::vector<ZVec>> block_relations;  // wp relations per place
  std::size_t deg0_generators = 0;
  std::vector<std::string> deg0_labels;
  std::vector<ComplexGenerator> pool;
  std::vector<ZVec> boundary;            // one deg0 vector per pool generator
  ZVec cor;                              // Cor on each deg0 generator, in Z/p^r
};

/// Pool: at r = 1, a = c_0 + c_1 t + ... of degree <= symbol_bound; at r > 1,
/// the Teichmuller basis of W_r(F_q) together with corestrictions of
/// <[c] | t - theta> from F_{q^m}(t), 2 <= m <= D, theta a root of each
/// irreducible of degree m. Multiplicative data: a primitive constant, the
/// monic irreducibles of degree <= D and the ratios (t - alpha)/(t - beta).
KatoComplexP1 build_complex(FieldPtr f, std::uint32_t r, int D, int symbol_bound = 1);

/// The deg0 term alone, as a presentation.
GroupPresentation deg0_group(const KatoComplexP1& c);
/// Cokernel of the boundary.
GroupPresentation kh0(const KatoComplexP1& c);
/// Cor of a deg0 vector, in W_r(F_q)/wp = Z/p^r.
std::uint64_t f_star(const KatoComplexP1& c, const ZVec& deg0_vector);
/// deg0 vector of the class of x in W_r(F(v))/wp at the i-th place.
ZVec deg0_vector(const KatoComplexP1& c, std::size_t place_index, const WittFq& x);

struct TheoremCheck {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct FiniteTheoremReport {
  std::uint32_t q = 0;
  std::uint32_t r = 0;
  int D = 0;
  std::uint64_t deg0_rank = 0;  // log_p of |deg0|
  std::size_t pool_size = 0;
  std::vector<TheoremCheck> checks;
  std::uint64_t kh0_order = 0;
  std::vector<std::uint32_t> kh0_invariant_factors;
  bool f_star_surjective = false;
  std::uint64_t kernel_dim_at_truncation = 0;  // log_p |ker f_* on kh0|
  bool ok() const;
};

/// Checks (i) Cor . d = 0 on every pool generator, (ii) f_* surjective,
/// (iii) ker(Cor on deg0) lies in wp + im(d), (iv) |kh0| = p^r.
FiniteTheoremReport verify_finite_theorem(FieldPtr f, std::uint32_t r, int D, int symbol_bound = 1);

}  // namespace kato
