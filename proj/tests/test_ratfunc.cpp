#include <random>

#include "doctest.h"
#include "kato/ratfunc.hpp"

using namespace kato;

namespace {

Poly poly(FieldPtr f, std::vector<std::uint32_t> c) { return Poly(f, std::move(c)); }

}  // namespace

TEST_CASE("enumerate_places in degree then lexicographic order") {
  FieldPtr f2 = make_field(2, 1), f3 = make_field(3, 1);
  auto names = [](const std::vector<Place>& ps) {
    std::vector<std::string> out;
    for (const auto& v : ps) out.push_back(to_string(v));
    return out;
  };
  CHECK(names(enumerate_places(f2, 1)) == std::vector<std::string>{"(t)", "(1+t)", "inf"});
  CHECK(names(enumerate_places(f2, 2)) == std::vector<std::string>{"(t)", "(1+t)", "(1+t+t^2)", "inf"});
  CHECK(names(enumerate_places(f3, 1)) == std::vector<std::string>{"(t)", "(1+t)", "(2+t)", "inf"});
  CHECK(enumerate_places(f2, 4).size() == 2 + 1 + 2 + 3 + 1);
}

TEST_CASE("valuation, residue class and Laurent expansion") {
  FieldPtr f2 = make_field(2, 1), f3 = make_field(3, 1);
  const RatFunc t2 = RatFunc::t(f2);
  const Place at0 = Place::finite(poly(f2, {0, 1}));
  CHECK(valuation(t2 / (t2 + RatFunc::one(f2)), at0) == 1);
  CHECK(valuation(t2, Place::infinity(f2)) == -1);
  CHECK_THROWS_AS(valuation(RatFunc(f2), at0), Error);
  CHECK_THROWS_AS(residue_class(RatFunc::one(f2) / t2, at0), Error);

  const RatFunc t3 = RatFunc::t(f3);
  const Place at0_3 = Place::finite(poly(f3, {0, 1}));
  const auto jet = laurent_expand(RatFunc::one(f3) / (RatFunc::one(f3) + t3), at0_3, 3);
  CHECK(jet.leading_exponent == 0);
  REQUIRE(jet.coeffs.size() == 3);
  CHECK(jet.coeffs[0] == FqElem::from_int(f3, 1));
  CHECK(jet.coeffs[1] == FqElem::from_int(f3, -1));
  CHECK(jet.coeffs[2] == FqElem::from_int(f3, 1));

  // residue field of a degree-2 place and reduction of t
  const Place quad = Place::finite(poly(f2, {1, 1, 1}));
  const auto& rf = residue_field(quad);
  CHECK(rf.field->size() == 4);
  const FqElem th = residue_class(t2, quad);
  CHECK(th * th + th + FqElem::one(rf.field) == FqElem::zero(rf.field));
}

TEST_CASE("residues of differentials sum to zero") {
  FieldPtr f3 = make_field(3, 1);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> c(0, 2);
  for (int i = 0; i < 60; ++i) {
    Poly n(f3, {c(rng), c(rng), c(rng), c(rng)});
    Poly d(f3, {c(rng), c(rng), c(rng), 1});
    if (n.is_zero()) continue;
    const RatFunc h(n, d);
    std::vector<Place> places = enumerate_places(f3, 3);
    FqElem total = FqElem::zero(f3);
    for (const auto& v : places) total = total + trace(residue_dt(h, v), f3);
    CHECK(total.is_zero());
  }
}

TEST_CASE("canonical form agrees with cross-multiplication equality") {
  FieldPtr f3 = make_field(3, 1);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint32_t> c(0, 2);
  for (int i = 0; i < 500; ++i) {
    Poly a(f3, {c(rng), c(rng), c(rng)}), b(f3, {c(rng), c(rng), 1});
    Poly k(f3, {c(rng), c(rng)});
    if (k.is_zero()) k = Poly(f3, {1});
    const RatFunc x(a, b), y(a * k, b * k);
    CHECK(x == y);
    const RatFunc z(Poly(f3, {c(rng), c(rng), c(rng)}), b);
    CHECK((x == z) == cross_equal(x, z));
  }
}

TEST_CASE("principal divisors have degree zero") {
  for (std::uint32_t p : {2u, 3u}) {
    FieldPtr f = make_field(p, 1);
    const std::uint32_t q = f->size();
    std::uint32_t npoly = 1;
    for (int i = 0; i < 5; ++i) npoly *= q;
    // all numerators of degree <= 4, all monic denominators of degree <= 4
    int checked = 0;
    for (std::uint32_t a = 1; a < npoly; a += 1) {
      for (std::uint32_t b = 1; b < npoly; ++b) {
        std::vector<std::uint32_t> ca(5), cb(5);
        std::uint32_t x = a, y = b;
        for (int i = 0; i < 5; ++i, x /= q, y /= q) {
          ca[i] = x % q;
          cb[i] = y % q;
        }
        Poly den(f, cb);
        if (!den.is_monic()) continue;
        const RatFunc g(Poly(f, ca), den);
        int total = 0;
        for (const auto& v : support(g)) total += valuation(g, v) * v.degree();
        CHECK(total == 0);
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
}
