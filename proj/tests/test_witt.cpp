#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "kato/witt.hpp"

using namespace kato;

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::set<std::string> term_set(const MPoly& P, const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (const auto& t : P.terms) {
    MPoly single{P.nvars, {t}, P.max_exp};
    out.insert(single.to_string(names));
  }
  return out;
}

// Dense operation tables on the indices of W_r(F_q).
struct Tables {
  std::uint64_t n;
  std::vector<std::uint32_t> add, mul, neg;
};

Tables tables(FieldPtr f, std::uint32_t r) {
  Tables t;
  t.n = ipow(f->size(), r);
  t.add.resize(t.n * t.n);
  t.mul.resize(t.n * t.n);
  t.neg.resize(t.n);
  std::vector<WittFq> all;
  for (std::uint64_t i = 0; i < t.n; ++i) all.push_back(witt_from_index(i, f, r));
  for (std::uint64_t i = 0; i < t.n; ++i) {
    t.neg[i] = static_cast<std::uint32_t>(witt_index(neg(all[i])));
    for (std::uint64_t j = 0; j < t.n; ++j) {
      t.add[i * t.n + j] = static_cast<std::uint32_t>(witt_index(add(all[i], all[j])));
      t.mul[i * t.n + j] = static_cast<std::uint32_t>(witt_index(mul(all[i], all[j])));
    }
  }
  return t;
}

struct Case {
  std::uint32_t p, k, r;
};

// every (F_q, r) with q^r <= 256
std::vector<Case> small_cases() {
  std::vector<Case> out;
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint32_t k = 1; ipow(p, k) <= 256; ++k)
      for (std::uint32_t r = 1; r <= 4 && ipow(p, k * r) <= 256; ++r) {
        if (ipow(p, r - 1) > 64) continue;
        out.push_back({p, k, r});
      }
  return out;
}

}  // namespace

TEST_CASE("universal Witt polynomials") {
  const auto& c = witt_polys(2, 2);
  const std::vector<std::string> names{"X0", "X1", "Y0", "Y1"};
  CHECK(term_set(c.sum_polys[0], names) == std::set<std::string>{"X0", "Y0"});
  CHECK(term_set(c.sum_polys[1], names) == std::set<std::string>{"X1", "Y1", "X0*Y0"});
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto& c1 = witt_polys(p, 1);
    CHECK(term_set(c1.sum_polys[0], {"X0", "Y0"}) == std::set<std::string>{"X0", "Y0"});
    CHECK(term_set(c1.prod_polys[0], {"X0", "Y0"}) == std::set<std::string>{"X0*Y0"});
  }
  CHECK_THROWS_AS(witt_polys(2, 5), Error);
  // largest supported cases build
  CHECK(witt_polys(3, 4).prod_polys.size() == 4);
  CHECK(witt_polys(2, 4).neg_polys.size() == 4);
}

TEST_CASE("Witt arithmetic examples") {
  FieldPtr f2 = make_field(2, 1), f4 = make_field(2, 2);
  const FqElem one2 = FqElem::one(f2), zero2 = FqElem::zero(f2);
  const WittFq x({one2, zero2});
  CHECK(add(x, x) == WittFq({zero2, one2}));
  CHECK(add(x, WittFq::zero(f2, 2)) == x);
  CHECK(verschiebung(x) == WittFq({zero2, one2}));
  CHECK(teichmuller(FqElem::zero(f4), 3).is_zero());
  CHECK(teichmuller(FqElem::one(f4), 2) == WittFq::one(f4, 2));
  // wp([g]) = g^2 - g = 1 in F_4
  const FqElem g{f4, f4->generator()};
  CHECK(wp(teichmuller(g, 1)) == WittFq::one(f4, 1));
  CHECK(to_string(add(x, x)) == "(0; 1)");
  CHECK_THROWS_AS(add(x, WittFq::one(f4, 2)), Error);
  CHECK_THROWS_AS(add(x, WittFq::one(f2, 3)), Error);
  // -1 in W_2(F_2) = Z/4 is 3 = (1, 1)
  CHECK(neg(WittFq::one(f2, 2)) == WittFq({one2, one2}));
}

TEST_CASE("ring axioms, exhaustive for q^r <= 256") {
  for (const auto& cs : small_cases()) {
    FieldPtr f = make_field(cs.p, cs.k);
    const auto t = tables(f, cs.r);
    const std::uint64_t n = t.n, one = witt_index(WittFq::one(f, cs.r));
    std::uint64_t bad = 0;
    for (std::uint64_t a = 0; a < n; ++a) {
      bad += t.add[a * n] != a;
      bad += t.mul[a * n + one] != a;
      bad += t.add[a * n + t.neg[a]] != 0;
      for (std::uint64_t b = 0; b < n; ++b) {
        bad += t.add[a * n + b] != t.add[b * n + a];
        bad += t.mul[a * n + b] != t.mul[b * n + a];
        for (std::uint64_t c = 0; c < n; ++c) {
          bad += t.add[t.add[a * n + b] * n + c] != t.add[a * n + t.add[b * n + c]];
          bad += t.mul[t.mul[a * n + b] * n + c] != t.mul[a * n + t.mul[b * n + c]];
          bad += t.mul[a * n + t.add[b * n + c]] != t.add[t.mul[a * n + b] * n + t.mul[a * n + c]];
        }
      }
    }
    INFO(f->name(), " r=", cs.r);
    CHECK(bad == 0);
  }
}

TEST_CASE("ghost components of integer lifts are additive and multiplicative") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    FieldPtr f = make_field(p, 1);
    for (std::uint32_t r = 1; r <= 3; ++r) {
      const std::uint64_t n = ipow(p, r);
      auto ghost = [&](const WittFq& x, std::uint32_t i) {
        const std::uint64_t M = ipow(p, i + 1);
        std::uint64_t s = 0;
        for (std::uint32_t j = 0; j <= i; ++j) {
          std::uint64_t v = 1;
          for (std::uint64_t e = 0; e < ipow(p, i - j); ++e) v = v * x[j].v % M;
          s = (s + ipow(p, j) * v) % M;
        }
        return s;
      };
      std::uint64_t bad = 0;
      for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b) {
          const WittFq x = witt_from_index(a, f, r), y = witt_from_index(b, f, r);
          const WittFq s = add(x, y), m = mul(x, y), ng = neg(x);
          for (std::uint32_t i = 0; i < r; ++i) {
            const std::uint64_t M = ipow(p, i + 1);
            bad += ghost(s, i) != (ghost(x, i) + ghost(y, i)) % M;
            bad += ghost(m, i) != ghost(x, i) * ghost(y, i) % M;
            bad += ghost(ng, i) != (M - ghost(x, i)) % M;
          }
        }
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("W_r(F_p) is Z/p^r") {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::uint32_t r = 1; r <= 3; ++r) {
      FieldPtr f = make_field(p, 1);
      const std::uint64_t n = ipow(p, r);
      std::set<WittFq> seen;
      for (std::uint64_t k = 0; k < n; ++k) {
        const WittFq w = int_to_witt(k, f, r);
        seen.insert(w);
        CHECK(witt_to_int(w) == k);
      }
      CHECK(seen.size() == n);
    }
}

TEST_CASE("F and V compose to multiplication by p") {
  for (const auto& cs : small_cases()) {
    if (cs.r < 2) continue;
    FieldPtr f = make_field(cs.p, cs.k);
    const std::uint64_t n = ipow(f->size(), cs.r);
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const WittFq x = witt_from_index(i, f, cs.r);
      const WittFq px = int_mul(x, cs.p);
      bad += frobenius_W(verschiebung(x)) != px;
      bad += verschiebung(frobenius_W(x)) != px;
    }
    CHECK(bad == 0);
  }
  // frobenius_W is the identity over F_2
  FieldPtr f2 = make_field(2, 1);
  for (std::uint64_t i = 0; i < 8; ++i) CHECK(frobenius_W(witt_from_index(i, f2, 3)) == witt_from_index(i, f2, 3));
}

TEST_CASE("Teichmuller lifts are multiplicative") {
  for (auto [p, k] : {std::pair{2u, 2u}, {2u, 4u}, {3u, 2u}, {2u, 3u}})
    for (std::uint32_t r : {2u, 3u}) {
      FieldPtr f = make_field(p, k);
      for (const auto& a : elements(f))
        for (const auto& b : elements(f)) CHECK(mul(teichmuller(a, r), teichmuller(b, r)) == teichmuller(a * b, r));
    }
}

TEST_CASE("wp is additive and vanishes over F_2") {
  std::mt19937_64 rng(41);
  for (auto [p, k, r] : std::vector<std::array<std::uint32_t, 3>>{{2u, 3u, 3u}, {3u, 2u, 2u}, {5u, 2u, 2u}, {2u, 4u, 4u}}) {
    FieldPtr f = make_field(p, k);
    std::uniform_int_distribution<std::uint64_t> pick(0, ipow(f->size(), r) - 1);
    for (int i = 0; i < 1000; ++i) {
      const WittFq x = witt_from_index(pick(rng), f, r), y = witt_from_index(pick(rng), f, r);
      CHECK(wp(add(x, y)) == add(wp(x), wp(y)));
    }
  }
  FieldPtr f2 = make_field(2, 1);
  for (std::uint64_t i = 0; i < 16; ++i) CHECK(wp(witt_from_index(i, f2, 4)).is_zero());
}

TEST_CASE("coordinates in the Teichmuller basis round-trip") {
  for (auto [p, k, r] : std::vector<std::array<std::uint32_t, 3>>{{2u, 2u, 3u}, {2u, 3u, 2u}, {3u, 2u, 2u}, {2u, 1u, 4u}, {3u, 1u, 3u}}) {
    FieldPtr f = make_field(p, k);
    const std::uint64_t n = ipow(f->size(), r);
    for (std::uint64_t i = 0; i < n; ++i) {
      const WittFq x = witt_from_index(i, f, r);
      CHECK(witt_from_coordinates(witt_coordinates(x), f, r) == x);
    }
  }
}

TEST_CASE("cokernel of wp has order p^r") {
  FieldPtr f2 = make_field(2, 1);
  CHECK(coker_wp(f2, 1).group.order() == 2);
  const auto c22 = coker_wp(f2, 2);
  CHECK(c22.group.order() == 4);
  CHECK(c22.group.invariant_factors() == std::vector<std::uint32_t>{2});
  CHECK(c22.distinguished == WittFq::one(f2, 2));
  CHECK(coker_wp(make_field(2, 2), 1).group.order() == 2);

  for (std::uint32_t p : {2u, 3u})
    for (std::uint32_t r = 1; r <= 3; ++r)
      for (std::uint32_t k = 1; k <= 3; ++k) {
        FieldPtr f = make_field(p, k);
        const auto c = coker_wp(f, r);
        INFO(f->name(), " r=", r);
        CHECK(c.group.order() == ipow(p, r));
        CHECK(c.group.invariant_factors() == std::vector<std::uint32_t>{r});
        // enumeration agrees with the presentation
        CHECK(c.image_size * ipow(p, r) == ipow(f->size(), r));
        // the distinguished element generates
        CHECK(witt_invariant(c.distinguished) % p != 0);
        CHECK_FALSE(c.group.is_zero(witt_coordinates(int_mul(c.distinguished, static_cast<long long>(ipow(p, r - 1))))));
      }
  CHECK_THROWS_AS(coker_wp(make_field(2, 11), 2), Error);
}

TEST_CASE("the invariant classifies wp-classes") {
  for (auto [p, k, r] : std::vector<std::array<std::uint32_t, 3>>{{2u, 2u, 2u}, {2u, 1u, 3u}, {3u, 1u, 2u}, {2u, 3u, 1u}, {3u, 2u, 1u}}) {
    FieldPtr f = make_field(p, k);
    const auto c = coker_wp(f, r);
    const std::uint64_t n = ipow(f->size(), r);
    // image of wp by enumeration
    std::set<std::uint64_t> image;
    for (std::uint64_t i = 0; i < n; ++i) image.insert(witt_index(wp(witt_from_index(i, f, r))));
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < n; ++j) {
        const WittFq x = witt_from_index(i, f, r), y = witt_from_index(j, f, r);
        const bool same = image.count(witt_index(sub(x, y))) > 0;
        CHECK(same == (witt_invariant(x) == witt_invariant(y)));
        CHECK(same == c.group.is_zero(witt_coordinates(sub(x, y))));
      }
  }
}

TEST_CASE("Witt trace commutes with wp and is onto the cokernel") {
  for (auto [p, big, small, r] : std::vector<std::array<std::uint32_t, 4>>{{2u, 2u, 1u, 2u}, {2u, 4u, 2u, 2u}, {3u, 2u, 1u, 2u}, {2u, 3u, 1u, 3u}}) {
    FieldPtr E = make_field(p, big), F = make_field(p, small);
    const std::uint64_t n = ipow(E->size(), r);
    std::set<std::uint64_t> classes;
    for (std::uint64_t i = 0; i < n; ++i) {
      const WittFq x = witt_from_index(i, E, r);
      CHECK(witt_trace(wp(x), F) == wp(witt_trace(x, F)));
      classes.insert(witt_invariant(witt_trace(x, F)));
    }
    CHECK(classes.size() == ipow(p, r));
  }
}

TEST_CASE("Witt vectors over F_q(t)") {
  FieldPtr f3 = make_field(3, 1);
  const RatFunc t = RatFunc::t(f3), one = RatFunc::one(f3);
  const WittRat a({t, one / (t + one)}), b({t * t, RatFunc(f3)});
  CHECK(add(a, neg(a)).is_zero());
  CHECK(mul(a, WittRat::one(f3, 2)) == a);
  CHECK(wp(add(a, b)) == add(wp(a), wp(b)));
  CHECK(mul(a, add(a, b)) == add(mul(a, a), mul(a, b)));
  // constants agree with the finite-field arithmetic
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> pick(0, 26);
  for (int i = 0; i < 50; ++i) {
    const WittFq x = witt_from_index(pick(rng), f3, 3), y = witt_from_index(pick(rng), f3, 3);
    CHECK(to_rational(mul(x, y)) == mul(to_rational(x), to_rational(y)));
    CHECK(to_rational(wp(x)) == wp(to_rational(x)));
  }
  // reduction at a place is a ring map
  const Place at1 = Place::finite(Poly(f3, {2, 1}));
  CHECK(reduce_at(mul(a, b), at1) == mul(reduce_at(a, at1), reduce_at(b, at1)));
  CHECK_THROWS_AS(reduce_at(a, Place::finite(Poly(f3, {1, 1}))), Error);
}
