#include <random>

#include "doctest.h"
#include "kato/mackey.hpp"

using namespace kato;

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

WittFq random_witt(std::mt19937_64& rng, FieldPtr f, std::uint32_t r) {
  std::vector<FqElem> e;
  for (std::uint32_t i = 0; i < r; ++i) e.push_back(FqElem{f, static_cast<std::uint32_t>(rng() % f->size())});
  return WittFq(std::move(e));
}

FqElem random_unit(std::mt19937_64& rng, FieldPtr f) {
  return FqElem{f, static_cast<std::uint32_t>(1 + rng() % (f->size() - 1))};
}

}  // namespace

TEST_CASE("lattice structure") {
  const FieldLattice L = make_lattice(make_field(2, 1), 4);
  CHECK(L.members.size() == 4);
  CHECK(L.member(2) == make_field(2, 2));
  CHECK(L.comparable(L.member(2), L.member(4)));
  CHECK_FALSE(L.comparable(L.member(2), L.member(3)));
  CHECK(L.name(L.member(2)) == "F_{2^2}");
  CHECK(make_lattice(make_field(2, 1), 2, true).name(make_field(2, 2)) == "F_{2^2}(t)");
  CHECK_THROWS_AS(L.member(5), Error);
  CHECK_THROWS_AS(make_lattice(make_field(2, 1), 0), Error);
}

TEST_CASE("trace and norm equations") {
  std::mt19937_64 rng(1);
  for (auto [p, k, m] : {std::tuple{2u, 1u, 2u}, {2u, 1u, 3u}, {3u, 1u, 2u}, {2u, 2u, 2u}})
    for (std::uint32_t r : {1u, 2u, 3u}) {
      FieldPtr E = make_field(p, k), Ep = make_field(p, k * m);
      for (int it = 0; it < 10; ++it) {
        const WittFq x = random_witt(rng, E, r);
        const auto xi = solve_witt_trace(x, Ep);
        REQUIRE(xi.has_value());
        CHECK(witt_trace(*xi, E) == x);
        const FqElem u = random_unit(rng, E);
        const auto y = solve_norm(u, Ep);
        REQUIRE(y.has_value());
        CHECK(norm(*y, E) == u);
      }
    }
}

TEST_CASE("projection formula rewriting") {
  FieldPtr f2 = make_field(2, 1), f4 = make_field(2, 2);
  // {1; b}_{F_2/F_2} -> {a'; b}_{F_4/F_2} with Tr a' = 1
  const MackeySymbol s = make_mackey(f2, WittFq({FqElem::one(f2)}), {FqElem::one(f2)});
  const MackeySymbol up = pf_rewrite(s, PfDirection::Up, f4, 0);
  CHECK(up.level() == f4);
  CHECK(trace(up.a[0], f2) == FqElem::one(f2));
  CHECK(pf_rewrite(up, PfDirection::Down, f2, 0).a == s.a);
  // trivial tower
  CHECK(pf_rewrite(s, PfDirection::Up, f2, 0).a == s.a);
  // {a; N b'} -> {a; b'}
  FieldPtr f3 = make_field(3, 1), f9 = make_field(3, 2);
  const MackeySymbol t = make_mackey(f3, WittFq({FqElem::from_int(f3, 2)}), {FqElem::from_int(f3, 2)});
  const MackeySymbol t_up = pf_rewrite(t, PfDirection::Up, f9, 1);
  CHECK(norm(t_up.bs[0], f3) == FqElem::from_int(f3, 2));
  CHECK(pf_rewrite(t_up, PfDirection::Down, f3, 1).bs[0] == t.bs[0]);
  // the other slots must descend
  const MackeySymbol bad = make_mackey(f2, WittFq({FqElem{f4, 2}}), {FqElem{f4, 2}});
  CHECK_THROWS_AS(pf_rewrite(bad, PfDirection::Down, f2, 0), Error);
  CHECK_THROWS_AS(pf_rewrite(s, PfDirection::Up, make_field(3, 2), 0), Error);
}

TEST_CASE("rewrites preserve classes in the truncation") {
  std::mt19937_64 rng(2);
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}})
    for (std::uint32_t r : {1u, 2u})
      for (int n : {0, 1, 2}) {
        const FieldLattice L = make_lattice(make_field(p, k), 2);
        const MackeyGroupTruncation g = mackey_group(L, n, r, false);
        const FieldPtr E = L.member(1), Ep = L.member(2);
        for (int it = 0; it < 10; ++it) {
          std::vector<FqElem> bs;
          for (int i = 0; i < n; ++i) bs.push_back(random_unit(rng, E));
          const MackeySymbol s = make_mackey(L.base, random_witt(rng, E, r), bs, 1 + static_cast<long long>(rng() % 5));
          for (int slot = 0; slot <= n; ++slot) {
            const MackeySymbol u = pf_rewrite(s, PfDirection::Up, Ep, slot);
            ZVec d = mackey_coordinates(g, s);
            const ZVec e = mackey_coordinates(g, u);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.group.ring().sub(d[i], e[i]);
            CHECK(g.group.is_zero(d));
          }
        }
      }
}

TEST_CASE("transfer and restriction") {
  FieldPtr f2 = make_field(2, 1), f4 = make_field(2, 2), f8 = make_field(2, 3), f16 = make_field(2, 4);
  const FqElem g{f4, f4->generator()};
  const MackeySymbol s = make_mackey(f4, WittFq({g}), {g});
  const MackeySymbol tr = transfer(s, f2);
  CHECK(tr.base == f2);
  CHECK(tr.level() == f4);
  CHECK_THROWS_AS(transfer(s, make_field(3, 1)), Error);

  // res from F_2 to F_4 of a symbol over F_2: a single compositum
  const MackeySymbol base_sym = make_mackey(f2, WittFq({FqElem::one(f2)}), {FqElem::one(f2)});
  const MackeySum r1 = restriction(base_sym, f4);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].level() == f4);
  CHECK(r1[0].base == f4);

  // res after tr: the Galois conjugates
  const MackeySum rt = restriction(tr, f4);
  REQUIRE(rt.size() == 2);
  CHECK(rt[0].level() == f4);
  CHECK(rt[1].a[0] == frobenius(rt[0].a[0]));

  // res composes: F_2 -> F_4 -> F_16 against F_2 -> F_16, on symbols over F_8 and F_4
  std::mt19937_64 rng(4);
  for (FieldPtr level : {f4, f8, f16})
    for (int it = 0; it < 5; ++it) {
      const MackeySymbol x = make_mackey(f2, random_witt(rng, level, 2), {random_unit(rng, level)});
      MackeySum two_step;
      for (const auto& y : restriction(x, f4))
        for (const auto& z : restriction(y, f16)) two_step.push_back(z);
      CHECK(canonical_sum(two_step) == canonical_sum(restriction(x, f16)));
    }
}

TEST_CASE("Mackey product truncations") {
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}})
    for (std::uint32_t r : {1u, 2u}) {
      const FieldLattice L = make_lattice(make_field(p, k), 3);
      // n = 0 with wp: W_r(F_q)/wp
      const auto g0 = mackey_group(L, 0, r, true);
      CHECK(g0.group.order() == ipow(p, r));
      // n = 0 without wp: W_r(F_q)
      CHECK(mackey_group(L, 0, r, false).group.log_order() == static_cast<std::uint64_t>(k * r));
      CHECK(mackey_group(L, 1, r, false).group.is_trivial());
      CHECK(mackey_group(L, 2, r, true).group.is_trivial());
      CHECK(g0.census.at("pf") > 0);
    }
  // monotone in the lattice bound
  std::uint64_t prev = ~0ull;
  for (int b = 1; b <= 4; ++b) {
    const auto g = mackey_group(make_lattice(make_field(2, 1), b), 0, 2, false);
    CHECK(g.group.log_order() <= prev);
    prev = g.group.log_order();
  }
}

TEST_CASE("extended symbol over F_q(t)") {
  FieldPtr f2 = make_field(2, 1), f4 = make_field(2, 2);
  const RatFunc t = RatFunc::t(f2);
  // {1; b}_{F/F} is the class of <1 | b>
  const InvariantVector e = extended_symbol(make_mackey(f2, WittRat({RatFunc::one(f2)}), {t}));
  CHECK(e == invariant_vector({make_symbol(WittRat({RatFunc::one(f2)}), {t})}));
  // relation (b): {[a]; a} -> 0
  CHECK(extended_symbol(make_mackey(f2, WittRat({t}), {t})).is_zero());
  // wp images vanish
  const RatFunc t4 = RatFunc::t(f4);
  CHECK(extended_symbol(make_mackey(f2, wp(WittRat({t4.inverse()})), {t4 + RatFunc::one(f4)})).is_zero());
  CHECK_THROWS_AS(extended_symbol(make_mackey(f2, WittRat({t}), {})), Error);

  // finite base: weight 0 gives the H^1 class, weight >= 1 gives 0
  CHECK(extended_symbol(make_mackey(f2, WittFq({FqElem::one(f2)}), {})) == 1);
  CHECK(extended_symbol(make_mackey(f2, WittFq({FqElem{f4, 2}}), {})) == witt_invariant(WittFq({FqElem{f4, 2}})));
  CHECK(extended_symbol(make_mackey(f2, WittFq({FqElem::one(f2)}), {FqElem::one(f2)})) == 0);
}

TEST_CASE("(PF) instances vanish under the extended symbol") {
  for (std::uint32_t r : {1u, 2u}) {
    const FieldLattice L = make_lattice(make_field(2, 1), 2, true);
    const auto inst = pf_instances_rat(L, r);
    CHECK(inst.size() > 10);
    for (const auto& pf : inst) CHECK(extended_symbol(pf.lower) == extended_symbol(pf.upper));
  }
  const auto inst3 = pf_instances_rat(make_lattice(make_field(3, 1), 2, true), 1);
  for (const auto& pf : inst3) CHECK(extended_symbol(pf.lower) == extended_symbol(pf.upper));
}

TEST_CASE("transfer surjectivity") {
  for (std::uint32_t r : {1u, 2u, 3u}) {
    CHECK(transfer_surjectivity_check(make_field(2, 1), make_field(2, 2), 1, r).ok);
    CHECK(transfer_surjectivity_check(make_field(2, 1), make_field(2, 1), 1, r).ok);
    CHECK(transfer_surjectivity_check(make_field(3, 1), make_field(3, 3), 2, r).ok);
    CHECK(transfer_surjectivity_check(make_field(2, 2), make_field(2, 4), 0, r).ok);
  }
}

TEST_CASE("dlog and <1 | -> routes agree") {
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    const DsmReport rep = dsm_check(make_field(p, k), 2, 9, 100);
    CHECK(rep.samples == 100);
    CHECK(rep.ok);
  }
}
