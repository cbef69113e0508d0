#include <array>
#include <random>

#include "doctest.h"
#include "kato/forms.hpp"

using namespace kato;

namespace {

// Independent exactness test: f dt = d(P/M) for M = den f is the linear
// system P'M - PM' = N M over F_q, with deg P <= max(deg M, deg N + 1).
bool integrable(const DiffForm& w) {
  const FieldPtr k = w.field();
  if (w.is_zero()) return true;
  const Poly& N = w.f.num();
  const Poly& M = w.f.den();
  const int B = std::max(M.degree(), N.degree() + 1);
  const Poly rhs = N * M;
  std::vector<Poly> cols;
  for (int j = 0; j <= B; ++j) {
    const Poly tj = Poly::monomial(FqElem::one(k), static_cast<std::size_t>(j));
    cols.push_back(tj.derivative() * M - tj * M.derivative());
  }
  int rows = rhs.degree() + 1;
  for (const auto& c : cols) rows = std::max(rows, c.degree() + 1);
  // augmented matrix, Gaussian elimination over F_q
  std::vector<std::vector<FqElem>> a(rows, std::vector<FqElem>(cols.size() + 1, FqElem::zero(k)));
  for (int i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) a[i][j] = cols[j].coeff(i);
    a[i][cols.size()] = rhs.coeff(i);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols.size() && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][c].is_zero()) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[r], a[piv]);
    const FqElem inv = inverse(a[r][c]);
    for (auto& e : a[r]) e = e * inv;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != r && !a[i][c].is_zero()) {
        const FqElem m = a[i][c];
        for (std::size_t j = 0; j <= cols.size(); ++j) a[i][j] = a[i][j] - m * a[r][j];
      }
    ++r;
  }
  for (std::size_t i = r; i < a.size(); ++i)
    if (!a[i][cols.size()].is_zero()) return false;
  return true;
}

RatFunc random_rat(std::mt19937_64& rng, FieldPtr k, int deg) {
  std::uniform_int_distribution<std::uint32_t> c(0, k->size() - 1);
  std::vector<std::uint32_t> n, m;
  for (int i = 0; i <= deg; ++i) {
    n.push_back(c(rng));
    m.push_back(c(rng));
  }
  m.back() = 1;
  Poly num(k, n);
  if (num.is_zero()) num = Poly::constant(FqElem::one(k));
  return RatFunc(num, Poly(k, m));
}

DiffForm form(const RatFunc& f) { return DiffForm::one_form(f); }

}  // namespace

TEST_CASE("d and dlog") {
  FieldPtr f2 = make_field(2, 1);
  const RatFunc t = RatFunc::t(f2);
  CHECK(d(t * t).is_zero());
  CHECK(dlog(t) == form(RatFunc::one(f2) / t));
  CHECK_THROWS_AS(dlog(RatFunc(f2)), Error);
  std::mt19937_64 rng(1);
  for (FieldPtr k : {make_field(3, 1), make_field(2, 2)})
    for (int i = 0; i < 100; ++i) {
      const RatFunc a = random_rat(rng, k, 3), b = random_rat(rng, k, 2);
      CHECK(dlog(a * b) == dlog(a) + dlog(b));
    }
}

TEST_CASE("Cartier operator examples") {
  FieldPtr f2 = make_field(2, 1), f3 = make_field(3, 1);
  for (FieldPtr k : {f2, f3}) {
    const RatFunc t = RatFunc::t(k);
    CHECK(cartier(dlog(t)) == dlog(t));
    CHECK(cartier(d(t)).is_zero());
    CHECK(inv_cartier(dlog(t)) == dlog(t));
    CHECK(inv_cartier(DiffForm::zero(k)).is_zero());
  }
  const RatFunc t3 = RatFunc::t(f3);
  CHECK(cartier(form(t3 * t3)) == form(RatFunc::one(f3)));
  const RatFunc t2 = RatFunc::t(f2);
  CHECK(inv_cartier(form(RatFunc::one(f2))) == form(t2));
  CHECK(cartier(form(t2)) == form(RatFunc::one(f2)));
  CHECK(wp_form(form(RatFunc::one(f2))) == form(t2 + RatFunc::one(f2)));
  CHECK(to_string(form(t2 + RatFunc::one(f2))) == "(1+t) * dt");
}

TEST_CASE("B-levels") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    FieldPtr k = make_field(p, 1);
    const RatFunc t = RatFunc::t(k);
    CHECK(b_level(d(t), 5).level == 1);
    const auto b = b_level(form(pow(t, p - 1)), 5);
    CHECK(b.level == 2);
    CHECK(b.chain.size() == 3);
    CHECK_FALSE(b_level(dlog(t), 6).level.has_value());
  }
}

TEST_CASE("Cartier is p^-1-linear and inverts inv_cartier") {
  std::mt19937_64 rng(7);
  for (FieldPtr k : {make_field(2, 1), make_field(3, 1), make_field(2, 2), make_field(3, 2)}) {
    const std::uint32_t p = k->p();
    for (int i = 0; i < 250; ++i) {
      const DiffForm w = form(random_rat(rng, k, 3));
      const RatFunc f = random_rat(rng, k, 2);
      CHECK(cartier(pow(f, p) * w) == f * cartier(w));
      CHECK(cartier(inv_cartier(w)) == w);
      const DiffForm back = w - inv_cartier(cartier(w));
      CHECK(is_exact(back));
      CHECK(integrable(back));
      CHECK(is_exact(wp_form(dlog(f))));
    }
  }
}

TEST_CASE("Cartier kernel is exactly the exact forms") {
  for (auto [p, k, D] : std::vector<std::array<int, 3>>{{2, 1, 4}, {3, 1, 2}, {2, 2, 2}}) {
    FieldPtr f = make_field(p, k);
    std::size_t exact = 0, mismatches = 0;
    for (const auto& w : form_pool(f, D)) {
      const bool e = integrable(w);
      exact += e;
      mismatches += e != is_exact(w);
    }
    CHECK(mismatches == 0);
    CHECK(exact > 0);
  }
}

TEST_CASE("inv_cartier raises the B-level by one") {
  FieldPtr f = make_field(2, 1);
  for (const auto& w : form_pool(f, 3)) {
    const auto b = b_level(w, 4);
    if (!b.level || *b.level == 0) continue;
    CHECK(b_level(inv_cartier(w), 6).level == *b.level + 1);
  }
}

TEST_CASE("Cartier-fixed forms are combinations of dlogs modulo exact forms") {
  FieldPtr f = make_field(2, 1);
  std::size_t fixed = 0;
  for (const auto& w : form_pool(f, 2)) {
    if (!(cartier(w) == w)) continue;
    ++fixed;
    DiffForm rest = w;
    for (const auto& v : support(w.f)) {
      if (v.is_infinite()) continue;
      const FqElem res = residue_dt(w.f, v);
      REQUIRE(res.field->in_prime_field(res.v));
      rest = rest - RatFunc::constant(FqElem::from_int(f, res.v)) * dlog(RatFunc(v.pi()));
    }
    CHECK(integrable(rest));
  }
  CHECK(fixed > 1);
  // logarithmic forms are fixed
  std::mt19937_64 rng(2);
  for (FieldPtr k : {make_field(3, 1), make_field(2, 3)})
    for (int i = 0; i < 100; ++i) {
      const DiffForm w = dlog(random_rat(rng, k, 3));
      CHECK(cartier(w) == w);
    }
}

TEST_CASE("wp is onto B_infinity modulo B_1") {
  const auto rep = wp_surjective_on_Binf(make_field(2, 1), 3, 4);
  CHECK(rep.ok);
  CHECK(rep.in_binf > 0);
  CHECK(rep.checked == form_pool(make_field(2, 1), 4).size());
  CHECK(wp_surjective_on_Binf(make_field(3, 1), 3, 2).ok);
}

TEST_CASE("the r = 1 cohomology group on a pool") {
  for (auto [p, k, D] : std::vector<std::array<int, 3>>{{2, 1, 2}, {3, 1, 1}, {2, 2, 1}, {2, 1, 3}}) {
    FieldPtr f = make_field(p, k);
    const auto h = h_group_r1(f, 1, D);
    // invariants sum to zero, and every such vector is reached
    for (const auto& row : h.invariants) {
      std::uint64_t s = 0;
      for (auto x : row) s += x;
      CHECK(s % p == 0);
    }
    CHECK(h.group.log_order() == h.places.size() - 1);
    CHECK(h_group_r1(f, 2, D).group.order() == 1);
    CHECK(h_group_r1(f, 1, D, false).group.order() == 1);
  }
  FieldPtr f3 = make_field(3, 1);
  const RatFunc t = RatFunc::t(f3);
  const Place at0 = Place::finite(Poly::t(f3));
  CHECK(form_invariant(dlog(t), at0) == 1);
  CHECK(form_invariant(dlog(t), Place::infinity(f3)) == 2);
  // wp-images and exact forms have zero invariants everywhere
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const DiffForm w = form(random_rat(rng, f3, 2));
    const RatFunc g = random_rat(rng, f3, 2);
    for (const auto& v : enumerate_places(f3, 2)) {
      CHECK(form_invariant(wp_form(w), v) == 0);
      CHECK(form_invariant(d(g), v) == 0);
    }
  }
}
