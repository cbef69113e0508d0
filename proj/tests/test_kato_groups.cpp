#include <random>

#include "doctest.h"
#include "kato/forms.hpp"
#include "kato/kato_groups.hpp"

using namespace kato;

namespace {

RatFunc rat(FieldPtr k, std::vector<std::uint32_t> n, std::vector<std::uint32_t> d = {1}) {
  return RatFunc(Poly(k, std::move(n)), Poly(k, std::move(d)));
}

WittRat w1(const RatFunc& x) { return WittRat({x}); }

WittRat wconst(FieldPtr k, std::vector<std::uint32_t> codes) {
  std::vector<RatFunc> e;
  for (auto c : codes) e.push_back(RatFunc::constant(FqElem{k, c}));
  return WittRat(std::move(e));
}

RatFunc random_nonzero(std::mt19937_64& rng, FieldPtr k, int deg) {
  std::uniform_int_distribution<std::uint32_t> c(0, k->size() - 1);
  std::uniform_int_distribution<int> dd(0, deg);
  while (true) {
    const int dn = dd(rng), dm = dd(rng);
    std::vector<std::uint32_t> n, m;
    for (int i = 0; i <= dn; ++i) n.push_back(c(rng));
    for (int i = 0; i < dm; ++i) m.push_back(c(rng));
    m.push_back(1);
    Poly num(k, n);
    if (!num.is_zero()) return RatFunc(num, Poly(k, m));
  }
}

}  // namespace

TEST_CASE("local invariants on examples") {
  FieldPtr f2 = make_field(2, 1);
  const RatFunc t = RatFunc::t(f2);
  const Place at0 = Place::finite(Poly::t(f2));
  const Place at1 = Place::finite(Poly(f2, {1, 1}));
  const Place inf = Place::infinity(f2);

  const KatoSymbol s = make_symbol(w1(RatFunc::one(f2)), {t});
  CHECK(local_invariant(s, at0) == 1);
  CHECK(witt_invariant(residue_tame(s, at0)) == 1);
  const InvariantVector iv = invariant_vector({s});
  CHECK(iv.at(at0) == 1);
  CHECK(iv.at(inf) == 1);
  CHECK(iv.total() == 0);

  // Schmid residue of 1/t dlog(1 + t)
  const KatoSymbol w = make_symbol(w1(t.inverse()), {rat(f2, {1, 1})});
  CHECK(residue_schmid(w, at0) == 1);
  CHECK(residue_schmid(w, at1) == 1);
  CHECK(residue_schmid(w, inf) == 0);
  CHECK_THROWS_AS(residue_tame(w, at0), Error);
  CHECK(invariant_vector({w}).total() == 0);

  // r = 2
  const KatoSymbol s2 = make_symbol(wconst(f2, {1, 0}), {t});
  const InvariantVector iv2 = invariant_vector({s2});
  CHECK(iv2.at(at0) == 1);
  CHECK(iv2.at(inf) == 3);
  CHECK(iv2.total() == 0);

  CHECK_THROWS_AS(make_symbol(w1(t), {RatFunc(f2)}), Error);
  CHECK_THROWS_AS(invariant_vector({KatoSymbol{w1(t), {}, 1}}), Error);
  // weight 2 over F_q(t): H^3 vanishes
  CHECK(invariant_vector({make_symbol(w1(t), {t, t + RatFunc::one(f2)})}).is_zero());
}

TEST_CASE("Schmid and tame residues agree where a is regular") {
  std::mt19937_64 rng(7);
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    FieldPtr f = make_field(p, k);
    for (int it = 0; it < 60; ++it) {
      const KatoSymbol s = make_symbol(w1(random_nonzero(rng, f, 2)), {random_nonzero(rng, f, 2)});
      for (const auto& v : symbol_support(s)) {
        bool regular = valuation(s.a[0], v) >= 0;
        if (!regular) continue;
        CHECK(residue_schmid(s, v) == witt_invariant(residue_tame(s, v)));
      }
      CHECK(invariant_vector({s}).total() == 0);
    }
  }
}

TEST_CASE("relation instances have zero invariants") {
  for (auto [p, k, r, D] : {std::tuple{2u, 1u, 1u, 2}, {2u, 1u, 2u, 2}, {3u, 1u, 1u, 1}, {2u, 2u, 1u, 1}, {3u, 1u, 2u, 1}}) {
    FieldPtr f = make_field(p, k);
    const KatoPool pool = make_pool(f, r, 1, D);
    const auto rels = relation_instances(pool);
    std::size_t diag = 0, wpc = 0;
    for (const auto& rel : rels) {
      CHECK(invariant_vector(rel.symbols).is_zero());
      diag += rel.kind == RelationKind::Diagonal;
      wpc += rel.kind == RelationKind::Wp;
    }
    CHECK(diag > 0);
    CHECK(wpc > 0);
  }
}

TEST_CASE("additive pool decomposition") {
  std::mt19937_64 rng(3);
  for (auto [p, k, D] : {std::tuple{2u, 1u, 2}, {3u, 1u, 1}, {2u, 2u, 1}, {2u, 1u, 3}}) {
    FieldPtr f = make_field(p, k);
    const KatoPool pool = make_pool(f, 1, 1, D);
    for (int it = 0; it < 40; ++it) {
      RatFunc x(f);
      ZVec want(pool.witt_basis.size(), 0);
      for (std::size_t i = 0; i < want.size(); ++i) {
        want[i] = rng() % p;
        x = x + RatFunc::constant(FqElem::from_int(f, static_cast<long long>(want[i]))) * pool.witt_basis[i][0];
      }
      const auto got = witt_decompose(pool, w1(x));
      REQUIRE(got.has_value());
      CHECK(*got == want);
    }
    // a double pole is outside the pool
    const RatFunc t = RatFunc::t(f);
    CHECK_FALSE(witt_decompose(pool, w1((t * t).inverse())).has_value());
  }
  FieldPtr f4 = make_field(2, 2);
  const KatoPool p2 = make_pool(f4, 2, 1, 1);
  const auto c = witt_decompose(p2, wconst(f4, {2, 3}));
  REQUIRE(c.has_value());
  CHECK(*c == witt_coordinates(WittFq({FqElem{f4, 2}, FqElem{f4, 3}})));
  CHECK_FALSE(witt_decompose(p2, WittRat({RatFunc::t(f4), RatFunc(f4)})).has_value());
}

TEST_CASE("finite-field truncation") {
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}})
    for (std::uint32_t r : {1u, 2u}) {
      FieldPtr f = make_field(p, k);
      std::uint64_t pr = 1;
      for (std::uint32_t i = 0; i < r; ++i) pr *= p;
      CHECK(h_truncation_finite(f, r, 0).group.order() == pr);
      CHECK(h_truncation_finite(f, r, 1).group.is_trivial());
      CHECK(h_truncation_finite(f, r, 2).group.is_trivial());
    }
}

TEST_CASE("truncation over F_q(t) at r = 1 matches the residue image") {
  for (auto [p, k, D] : {std::tuple{2u, 1u, 1}, {2u, 1u, 2}, {3u, 1u, 1}, {2u, 2u, 1}}) {
    FieldPtr f = make_field(p, k);
    const HGroupTruncation h = h_truncation(f, 1, 1, D);
    const HGroupR1 forms = h_group_r1(f, 1, D);
    INFO("p=" << p << " k=" << k << " D=" << D);
    CHECK(h.group.log_order() == forms.group.log_order());
    CHECK(h.census.at(RelationKind::Diagonal) > 0);
    CHECK(h.census.at(RelationKind::Wp) > 0);
    // the class of a dlog b carries the same invariants as <a | b>
    for (const auto& g : h.generators) {
      const InvariantVector iv = invariant_vector({g});
      for (const auto& v : forms.places) CHECK(iv.at(v) == form_invariant(g.a[0] * dlog(g.bs[0]), v));
    }
  }
}

TEST_CASE("weight two over F_q(t) is trivial in the truncation at r = 1") {
  for (auto [p, D] : {std::pair{2u, 1}, {3u, 1}, {2u, 2}}) {
    const HGroupTruncation h = h_truncation(make_field(p, 1), 1, 2, D);
    CHECK(h.group.is_trivial());
    CHECK(h.census.at(RelationKind::Repeated) > 0);
  }
}

TEST_CASE("Hasse-Brauer-Noether") {
  for (auto [p, k, r, D] : {std::tuple{2u, 1u, 1u, 2}, {2u, 1u, 2u, 2}, {3u, 1u, 1u, 1}, {3u, 1u, 2u, 1}, {2u, 2u, 1u, 1}}) {
    FieldPtr f = make_field(p, k);
    const HbnReport rep = hbn_check(f, r, D, 11, 100, r == 1 ? 20 : 0);
    INFO("p=" << p << " k=" << k << " r=" << r);
    CHECK(rep.samples == 100);
    CHECK(rep.sum_failures == 0);
    CHECK(rep.pair_witness);
    if (r == 1) {
      CHECK(rep.wild_samples > 0);
      CHECK(rep.probes == 20);
      CHECK(rep.probe_failures == 0);
    }
  }
}

TEST_CASE("corestriction from F_4(t) to F_2(t)") {
  FieldPtr f2 = make_field(2, 1), f4 = make_field(2, 2);
  const FqElem g{f4, f4->generator()};
  const RatFunc t4 = RatFunc::t(f4);
  const CorResult c = corestriction_const(make_symbol(WittRat({RatFunc::constant(g)}), {t4}), f2);
  REQUIRE(c.rational.has_value());
  CHECK(c.rational->a == WittRat({RatFunc::one(f2)}));
  CHECK(c.rational->bs[0] == RatFunc::t(f2));
  CHECK(c.galois_sum.size() == 2);
  CHECK(c.invariants == invariant_vector({*c.rational}));

  // <g | t - g> lies over the place t^2 + t + 1
  const CorResult c2 = corestriction_const(make_symbol(WittRat({RatFunc::constant(g)}), {t4 - RatFunc::constant(g)}), f2);
  CHECK_FALSE(c2.rational.has_value());
  const Place pi = Place::finite(Poly(f2, {1, 1, 1}));
  CHECK(c2.invariants.at(pi) == witt_invariant(WittFq({g})));
  CHECK(c2.invariants.total() == 0);
  CHECK(place_below(Place::finite(Poly::linear(g)), f2) == pi);
  CHECK_THROWS_AS(corestriction_const(make_symbol(WittRat({t4}), {t4}), make_field(3, 1)), Error);

  // projection formula on random data, r = 1 and r = 2
  std::mt19937_64 rng(5);
  for (std::uint32_t r : {1u, 2u})
    for (int it = 0; it < 30; ++it) {
      std::vector<RatFunc> a;
      for (std::uint32_t i = 0; i < r; ++i) a.push_back(RatFunc::constant(FqElem{f4, static_cast<std::uint32_t>(rng() % 4)}));
      if (r == 1 && it % 2) a[0] = random_nonzero(rng, f4, 1);
      const RatFunc b = random_nonzero(rng, f2, 2);
      const KatoSymbol s = make_symbol(WittRat(a), {b.mapped(embedding(f2, f4))});
      const CorResult cr = corestriction_const(s, f2);
      REQUIRE(cr.rational.has_value());
      CHECK(cr.invariants == invariant_vector({*cr.rational}));
      CHECK(cr.invariants.total() == 0);
    }
}
