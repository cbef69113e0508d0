#include "kato/kato_groups.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "kato/forms.hpp"

namespace kato {

namespace {

std::uint64_t mod_pr(std::uint32_t p, std::uint32_t r) {
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < r; ++i) m *= p;
  return m;
}

bool is_subfield(FieldPtr sub, FieldPtr E) {
  return sub->p() == E->p() && E->degree() % sub->degree() == 0;
}

// x^{-1} mod pi for x prime to pi
Poly inverse_mod(const Poly& x, const Poly& pi) {
  const FieldPtr f = pi.field();
  std::uint64_t order = 1;
  for (int i = 0; i < pi.degree(); ++i) order *= f->size();
  // exponent order - 2 by square and multiply modulo pi
  std::uint64_t e = order - 2;
  Poly base = divmod(x, pi).second, acc = Poly::constant(FqElem::one(f));
  while (e) {
    if (e & 1) acc = divmod(acc * base, pi).second;
    base = divmod(base * base, pi).second;
    e >>= 1;
  }
  return acc;
}

FqElem basis_elem(FieldPtr f, std::uint32_t j) { return {f, f->pow(f->generator(), j)}; }

// Mixed-radix odometer over `slots` digits in [0, base).
bool next_tuple(std::vector<std::size_t>& t, std::size_t base) {
  for (auto& d : t) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

}  // namespace

KatoSymbol make_symbol(WittRat a, std::vector<RatFunc> bs, long long coeff) {
  const FieldPtr f = a.field();
  for (const auto& b : bs) {
    if (b.is_zero()) throw Error(ErrorKind::ZeroEntry, "symbol entry is zero");
    if (b.field() != f) throw Error(ErrorKind::FieldMismatch, "symbol entries over different fields");
  }
  return KatoSymbol{std::move(a), std::move(bs), coeff};
}

std::uint64_t InvariantVector::modulus() const { return mod_pr(p, r); }

std::uint64_t InvariantVector::at(const Place& v) const {
  auto it = entries.find(v);
  return it == entries.end() ? 0 : it->second;
}

void InvariantVector::add(const Place& v, std::uint64_t x) {
  const std::uint64_t m = modulus();
  const std::uint64_t s = (at(v) + x) % m;
  if (s == 0)
    entries.erase(v);
  else
    entries[v] = s;
}

std::uint64_t InvariantVector::total() const {
  std::uint64_t s = 0;
  for (const auto& [v, x] : entries) s = (s + x) % modulus();
  return s;
}

InvariantVector operator+(InvariantVector a, const InvariantVector& b) {
  if (a.p == 0) {
    a.p = b.p;
    a.r = b.r;
  }
  for (const auto& [v, x] : b.entries) a.add(v, x);
  return a;
}

std::vector<Place> symbol_support(const KatoSymbol& s) {
  std::set<Place> out;
  for (const auto& b : s.bs)
    for (const auto& v : support(b)) out.insert(v);
  const FieldPtr f = s.field();
  for (const auto& c : s.a.entries()) {
    if (c.is_zero()) continue;
    if (c.den().degree() > 0)
      for (const auto& [pi, e] : factor(c.den()).factors) out.insert(Place::finite(pi));
    if (c.num().degree() > c.den().degree()) out.insert(Place::infinity(f));
  }
  return {out.begin(), out.end()};
}

WittFq residue_tame(const KatoSymbol& s, const Place& v) {
  if (s.weight() != 1) throw Error(ErrorKind::UnsupportedDegree, "residue of a weight-1 symbol");
  for (const auto& c : s.a.entries())
    if (!c.is_zero() && valuation(c, v) < 0) throw Error(ErrorKind::WildAtPlace, to_string(s) + " at " + to_string(v));
  const WittFq abar = reduce_at(s.a, v);
  return int_mul(abar, static_cast<long long>(valuation(s.bs[0], v)) * s.coeff);
}

std::uint64_t residue_schmid(const KatoSymbol& s, const Place& v) {
  if (s.weight() != 1) throw Error(ErrorKind::UnsupportedDegree, "residue of a weight-1 symbol");
  if (s.a.length() != 1) throw Error(ErrorKind::LengthMismatch, "Schmid residue needs r = 1");
  const std::uint32_t p = s.field()->p();
  const std::uint64_t x = form_invariant(s.a[0] * dlog(s.bs[0]), v);
  const long long c = ((s.coeff % static_cast<long long>(p)) + p) % p;
  return (x * static_cast<std::uint64_t>(c)) % p;
}

std::uint64_t local_invariant(const KatoSymbol& s, const Place& v) {
  if (s.weight() == 0) throw Error(ErrorKind::UnsupportedDegree, "no local invariant in degree 1");
  if (s.weight() >= 2) return 0;
  if (s.a.length() == 1) return residue_schmid(s, v);
  return witt_invariant(residue_tame(s, v));
}

InvariantVector invariant_vector(const KatoSum& sum) {
  InvariantVector out;
  for (const auto& s : sum) {
    if (s.weight() == 0) throw Error(ErrorKind::UnsupportedDegree, "no invariant vector in degree 1");
    if (out.p == 0) {
      out.p = s.field()->p();
      out.r = s.a.length();
    }
    if (s.weight() >= 2) continue;
    for (const auto& v : symbol_support(s)) out.add(v, local_invariant(s, v));
  }
  return out;
}

KatoSymbol conjugate(const KatoSymbol& s, FieldPtr sub, std::uint32_t power) {
  std::uint64_t e = 1;
  for (std::uint32_t i = 0; i < power; ++i) e *= sub->size();
  const FieldPtr E = s.field();
  // x -> x^e on coefficients; the exponent only matters modulo q_E - 1
  e %= (E->size() - 1);
  if (e == 0) e = 1;  // E = F_2
  std::vector<RatFunc> ae;
  for (const auto& c : s.a.entries()) ae.push_back(c.frobenius_coeffs(e));
  std::vector<RatFunc> bs;
  for (const auto& b : s.bs) bs.push_back(b.frobenius_coeffs(e));
  return KatoSymbol{WittRat(std::move(ae)), std::move(bs), s.coeff};
}

std::optional<RatFunc> descend(const RatFunc& x, FieldPtr sub) {
  const FieldPtr E = x.field();
  if (!is_subfield(sub, E)) throw Error(ErrorKind::NotConstantExtension, sub->name() + " in " + E->name());
  const Embedding& emb = embedding(sub, E);
  Poly parts[2];
  const Poly* src[2] = {&x.num(), &x.den()};
  for (int k = 0; k < 2; ++k) {
    std::vector<std::uint32_t> co;
    for (auto c : src[k]->codes()) {
      auto pre = emb.preimage(FqElem{E, c});
      if (!pre) return std::nullopt;
      co.push_back(pre->v);
    }
    parts[k] = Poly(sub, std::move(co));
  }
  return RatFunc(parts[0], parts[1]);
}

Place place_below(const Place& w, FieldPtr sub) {
  if (w.is_infinite()) return Place::infinity(sub);
  const FieldPtr E = w.base();
  if (!is_subfield(sub, E)) throw Error(ErrorKind::NotConstantExtension, sub->name() + " in " + E->name());
  const std::uint32_t m = E->degree() / sub->degree();
  Poly norm = w.pi(), conj = w.pi();
  for (std::uint32_t i = 1; i < m; ++i) {
    conj = conj.frobenius_coeffs(sub->size());
    norm = norm * conj;
  }
  const auto down = descend(RatFunc(norm), sub);
  if (!down) throw std::logic_error("norm of a place did not descend");
  return Place::finite(factor(down->num()).factors.front().first);
}

WittRat witt_trace_rat(const WittRat& a, FieldPtr sub) {
  const FieldPtr E = a.field();
  if (!is_subfield(sub, E)) throw Error(ErrorKind::NotConstantExtension, sub->name() + " in " + E->name());
  const std::uint32_t m = E->degree() / sub->degree();
  KatoSymbol s{a, {}, 1};
  WittRat sum = a;
  for (std::uint32_t i = 1; i < m; ++i) sum = sum + conjugate(s, sub, i).a;
  std::vector<RatFunc> out;
  for (const auto& c : sum.entries()) {
    auto d = descend(c, sub);
    if (!d) throw std::logic_error("Witt trace left the subfield");
    out.push_back(*d);
  }
  return WittRat(std::move(out));
}

CorResult corestriction_const(const KatoSymbol& s, FieldPtr sub) {
  const FieldPtr E = s.field();
  if (!is_subfield(sub, E)) throw Error(ErrorKind::NotConstantExtension, sub->name() + " in " + E->name());
  const std::uint32_t m = E->degree() / sub->degree();
  CorResult out;
  for (std::uint32_t i = 0; i < m; ++i) out.galois_sum.push_back(conjugate(s, sub, i));
  std::vector<RatFunc> down;
  for (const auto& b : s.bs) {
    auto d = descend(b, sub);
    if (!d) break;
    down.push_back(*d);
  }
  if (down.size() == s.bs.size()) out.rational = KatoSymbol{witt_trace_rat(s.a, sub), down, s.coeff};
  out.invariants = cor_invariants({s}, sub);
  return out;
}

InvariantVector cor_invariants(const KatoSum& sum, FieldPtr sub) {
  InvariantVector out;
  out.p = sub->p();
  for (const auto& s : sum) {
    if (s.weight() == 0) throw Error(ErrorKind::UnsupportedDegree, "no invariant vector in degree 1");
    out.r = s.a.length();
    if (s.weight() >= 2) continue;
    for (const auto& w : symbol_support(s)) out.add(place_below(w, sub), local_invariant(s, w));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Repeated: return "repeated";
    case RelationKind::Diagonal: return "diagonal";
    case RelationKind::Wp: return "wp";
    case RelationKind::Multiplicative: return "multiplicative";
  }
  return "?";
}

KatoPool make_pool(FieldPtr f, std::uint32_t r, int n, int D) {
  if (D < 1) throw Error(ErrorKind::BoundTooSmall, "pool needs D >= 1");
  if (n < 0) throw Error(ErrorKind::UnsupportedDegree, "negative weight");
  KatoPool pool;
  pool.field = f;
  pool.r = r;
  pool.n = n;
  pool.D = D;
  if (f->size() > 2) pool.mult.push_back(RatFunc::constant(FqElem{f, f->primitive()}));
  for (int d = 1; d <= D; ++d)
    for (const auto& pi : monic_irreducibles(f, d)) {
      pool.irreducibles.push_back(pi);
      pool.mult.push_back(RatFunc(pi));
    }
  const std::uint32_t k = f->degree();
  if (r == 1) {
    for (int i = 0; i <= D; ++i)
      for (std::uint32_t j = 0; j < k; ++j)
        pool.witt_basis.push_back(WittRat({RatFunc(Poly::monomial(basis_elem(f, j), static_cast<std::size_t>(i)))}));
    for (const auto& pi : pool.irreducibles)
      for (int i = 0; i < pi.degree(); ++i)
        for (std::uint32_t j = 0; j < k; ++j)
          pool.witt_basis.push_back(
              WittRat({RatFunc(Poly::monomial(basis_elem(f, j), static_cast<std::size_t>(i)), pi)}));
  } else {
    for (std::uint32_t j = 0; j < k; ++j) pool.witt_basis.push_back(teichmuller(RatFunc::constant(basis_elem(f, j)), r));
  }
  return pool;
}

std::optional<ZVec> witt_decompose(const KatoPool& pool, const WittRat& a) {
  const FieldPtr f = pool.field;
  const std::uint32_t k = f->degree();
  if (a.length() != pool.r || a.field() != f) return std::nullopt;
  ZVec out(pool.witt_basis.size(), 0);
  if (pool.r > 1) {
    std::vector<FqElem> co;
    for (const auto& c : a.entries()) {
      if (!c.is_constant()) return std::nullopt;
      co.push_back(c.is_zero() ? FqElem::zero(f) : c.num().coeff(0));
    }
    const ZVec c = witt_coordinates(WittFq(std::move(co)));
    std::copy(c.begin(), c.end(), out.begin());
    return out;
  }
  const RatFunc& x = a[0];
  if (x.is_zero()) return out;
  const Poly& N = x.num();
  const Poly& M = x.den();
  std::vector<Poly> pis;
  if (M.degree() > 0)
    for (const auto& [pi, e] : factor(M).factors) {
      if (e != 1 || pi.degree() > pool.D) return std::nullopt;
      pis.push_back(pi);
    }
  auto put = [&](std::size_t offset, const Poly& P) {
    for (int i = 0; i <= P.degree(); ++i) {
      const auto d = f->digits(P.coeff(static_cast<std::size_t>(i)).v);
      for (std::uint32_t j = 0; j < k; ++j) out[offset + static_cast<std::size_t>(i) * k + j] = j < d.size() ? d[j] : 0;
    }
  };
  Poly rest = N;
  for (const auto& pi : pis) {
    const Poly cof = divmod(M, pi).first;
    const Poly R = divmod(N * inverse_mod(cof, pi), pi).second;
    rest = rest - R * cof;
    std::size_t offset = static_cast<std::size_t>(pool.D + 1) * k;
    for (const auto& q : pool.irreducibles) {
      if (q == pi) break;
      offset += static_cast<std::size_t>(q.degree()) * k;
    }
    put(offset, R);
  }
  const auto [P, zero] = divmod(rest, M);
  if (!zero.is_zero()) throw std::logic_error("partial fractions left a remainder");
  if (P.degree() > pool.D) return std::nullopt;
  put(0, P);
  return out;
}

namespace {

// Expansion of b over the multiplicative pool, as integers.
std::optional<std::vector<long long>> mult_decompose(const KatoPool& pool, const RatFunc& b) {
  const FieldPtr f = pool.field;
  std::vector<long long> out(pool.mult.size(), 0);
  const RatFactorization fb = factor(b);
  std::size_t base = 0;
  if (f->size() > 2) {
    out[0] = f->log(fb.unit.v);
    base = 1;
  }
  for (const auto& [pi, e] : fb.factors) {
    auto it = std::find(pool.irreducibles.begin(), pool.irreducibles.end(), pi);
    if (it == pool.irreducibles.end()) return std::nullopt;
    out[base + static_cast<std::size_t>(it - pool.irreducibles.begin())] += e;
  }
  return out;
}

std::size_t tuple_count(std::size_t m, int n) {
  std::size_t c = 1;
  for (int i = 0; i < n; ++i) c *= m;
  return c;
}

}  // namespace

std::optional<ZVec> symbol_coordinates(const KatoPool& pool, const KatoSymbol& s) {
  if (s.weight() != pool.n) return std::nullopt;
  const ZModPr ring(pool.field->p(), pool.r);
  const auto aw = witt_decompose(pool, s.a);
  if (!aw) return std::nullopt;
  std::vector<std::vector<long long>> bx;
  for (const auto& b : s.bs) {
    auto e = mult_decompose(pool, b);
    if (!e) return std::nullopt;
    bx.push_back(std::move(*e));
  }
  const std::size_t M = pool.mult.size();
  const std::size_t T = tuple_count(M, pool.n);
  ZVec out(pool.witt_basis.size() * T, 0);
  // coefficient of each b-tuple
  std::vector<std::uint64_t> tc(T, 0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(pool.n), 0);
  for (std::size_t t = 0; t < T; ++t) {
    std::uint64_t c = ring.reduce(s.coeff);
    for (int i = 0; i < pool.n; ++i) c = ring.mul(c, ring.reduce(bx[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]));
    tc[t] = c;
    next_tuple(idx, M);
  }
  for (std::size_t a = 0; a < aw->size(); ++a) {
    if ((*aw)[a] == 0) continue;
    for (std::size_t t = 0; t < T; ++t) out[a * T + t] = ring.add(out[a * T + t], ring.mul((*aw)[a], tc[t]));
  }
  return out;
}

namespace {

// Additive-pool elements as F_p-combinations of the basis (r = 1). All of
// them when there are at most 2^14, else those with at most max_support terms.
std::vector<RatFunc> additive_elements(const KatoPool& pool, int max_support) {
  const std::uint32_t p = pool.field->p();
  const std::size_t dim = pool.witt_basis.size();
  std::uint64_t total = 1;
  bool full = true;
  for (std::size_t i = 0; i < dim && full; ++i) {
    total *= p;
    if (total > (1u << 14)) full = false;
  }
  std::vector<RatFunc> out;
  std::vector<std::size_t> digit(dim, 0);
  auto emit = [&]() {
    RatFunc x(pool.field);
    for (std::size_t i = 0; i < dim; ++i)
      if (digit[i]) x = x + RatFunc::constant(FqElem::from_int(pool.field, static_cast<long long>(digit[i]))) * pool.witt_basis[i][0];
    if (!x.is_zero()) out.push_back(x);
  };
  if (full) {
    do emit();
    while (next_tuple(digit, p));
    return out;
  }
  // bounded support: choose positions, then nonzero digits
  std::vector<std::size_t> pos;
  auto rec = [&](auto&& self, std::size_t start, int left) -> void {
    if (!pos.empty()) {
      std::vector<std::size_t> dg(pos.size(), 1);
      while (true) {
        for (std::size_t i = 0; i < pos.size(); ++i) digit[pos[i]] = dg[i];
        emit();
        std::size_t i = 0;
        for (; i < dg.size(); ++i) {
          if (++dg[i] < p) break;
          dg[i] = 1;
        }
        if (i == dg.size()) break;
      }
      for (auto q : pos) digit[q] = 0;
    }
    if (left == 0) return;
    for (std::size_t i = start; i < dim; ++i) {
      pos.push_back(i);
      self(self, i + 1, left - 1);
      pos.pop_back();
    }
  };
  rec(rec, 0, max_support);
  return out;
}

// All n-tuples over the multiplicative pool.
std::vector<std::vector<RatFunc>> mult_tuples(const KatoPool& pool, int n) {
  std::vector<std::vector<RatFunc>> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  if (pool.mult.empty()) return n == 0 ? std::vector<std::vector<RatFunc>>{{}} : out;
  do {
    std::vector<RatFunc> t;
    for (auto i : idx) t.push_back(pool.mult[i]);
    out.push_back(std::move(t));
  } while (next_tuple(idx, pool.mult.size()));
  return out;
}

std::vector<RatFunc> insert_at(std::vector<RatFunc> v, std::size_t pos, const RatFunc& x) {
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(pos), x);
  return v;
}

}  // namespace

std::vector<RelationInstance> relation_instances(const KatoPool& pool, int max_support) {
  const FieldPtr f = pool.field;
  const std::uint32_t r = pool.r;
  const int n = pool.n;
  std::vector<RelationInstance> out;
  const auto rest = n >= 1 ? mult_tuples(pool, n - 1) : std::vector<std::vector<RatFunc>>{};

  // multiplicativity of constants: zeta^{q-1} = 1
  if (f->size() > 2 && n >= 1)
    for (const auto& a : pool.witt_basis)
      for (int slot = 0; slot < n; ++slot)
        for (const auto& t : rest)
          out.push_back({RelationKind::Multiplicative, 0,
                         {KatoSymbol{a, insert_at(t, static_cast<std::size_t>(slot), pool.mult[0]),
                                     static_cast<long long>(f->size() - 1)}}});

  // (a) b_i = b_j, with b a pool element or a product of two
  if (n >= 2) {
    std::vector<RatFunc> bs = pool.mult;
    for (std::size_t i = 0; i < pool.mult.size(); ++i)
      for (std::size_t j = i + 1; j < pool.mult.size(); ++j) bs.push_back(pool.mult[i] * pool.mult[j]);
    const auto others = mult_tuples(pool, n - 2);
    for (const auto& a : pool.witt_basis)
      for (const auto& b : bs)
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            for (const auto& t : others) {
              auto v = insert_at(t, static_cast<std::size_t>(i), b);
              v = insert_at(v, static_cast<std::size_t>(j), b);
              out.push_back({RelationKind::Repeated, 0, {KatoSymbol{a, v, 1}}});
            }
  }

  // (b) and (c)
  if (r == 1) {
    const auto elems = additive_elements(pool, max_support);
    if (n >= 1)
      for (const auto& x : elems) {
        if (!mult_decompose(pool, x)) continue;
        for (int slot = 0; slot < n; ++slot)
          for (const auto& t : rest)
            out.push_back({RelationKind::Diagonal, 0, {KatoSymbol{WittRat({x}), insert_at(t, static_cast<std::size_t>(slot), x), 1}}});
      }
    const auto tuples = mult_tuples(pool, n);
    for (const auto& x : elems) {
      const WittRat w = wp(WittRat({x}));
      if (!witt_decompose(pool, w)) continue;
      for (const auto& t : tuples) out.push_back({RelationKind::Wp, 0, {KatoSymbol{w, t, 1}}});
    }
  } else {
    if (n >= 1)
      for (std::uint32_t i = 0; i < r; ++i)
        for (const auto& c : elements(f)) {
          if (c.is_zero()) continue;
          std::vector<RatFunc> e(r, RatFunc(f));
          e[i] = RatFunc::constant(c);
          for (int slot = 0; slot < n; ++slot)
            for (const auto& t : rest)
              out.push_back({RelationKind::Diagonal, static_cast<int>(i),
                             {KatoSymbol{WittRat(e), insert_at(t, static_cast<std::size_t>(slot), RatFunc::constant(c)), 1}}});
        }
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < r; ++i) count *= f->size();
    if (count > (1u << 12)) throw Error(ErrorKind::TooLarge, "Witt pool too large");
    const auto tuples = mult_tuples(pool, n);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      const WittRat w = to_rational(wp(witt_from_index(idx, f, r)));
      for (const auto& t : tuples) out.push_back({RelationKind::Wp, 0, {KatoSymbol{w, t, 1}}});
    }
  }
  return out;
}

HGroupTruncation h_truncation(FieldPtr f, std::uint32_t r, int n, int D, int max_support) {
  KatoPool pool = make_pool(f, r, n, D);
  const std::size_t T = tuple_count(pool.mult.size(), n);
  if (pool.witt_basis.size() * T > 20000) throw Error(ErrorKind::TooLarge, "too many generators");
  std::vector<KatoSymbol> gens;
  std::vector<std::string> labels;
  const auto tuples = mult_tuples(pool, n);
  for (const auto& a : pool.witt_basis)
    for (const auto& t : tuples) {
      gens.push_back(KatoSymbol{a, t, 1});
      labels.push_back(to_string(gens.back()));
    }
  HGroupTruncation out{pool, GroupPresentation(f->p(), r, std::move(labels)), {}, std::move(gens)};
  for (const auto& rel : relation_instances(pool, max_support)) {
    ZVec row(out.generators.size(), 0);
    for (const auto& s : rel.symbols) {
      const auto c = symbol_coordinates(pool, s);
      if (!c) throw std::logic_error("relation instance outside the pool");
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = out.group.ring().add(row[i], (*c)[i]);
    }
    out.group.add_relation(row);
    ++out.census[rel.kind];
  }
  return out;
}

HGroupFinite h_truncation_finite(FieldPtr f, std::uint32_t r, int n) {
  if (n < 0) throw Error(ErrorKind::UnsupportedDegree, "negative weight");
  const std::uint32_t k = f->degree();
  const ZModPr ring(f->p(), r);
  const bool has_zeta = f->size() > 2;
  const std::size_t M = has_zeta ? 1 : 0;
  const std::size_t T = tuple_count(M, n);
  std::vector<std::string> labels;
  for (std::uint32_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < T; ++t) {
      std::string s = "<" + to_string(teichmuller(basis_elem(f, j), r)) + " |";
      for (int i = 0; i < n; ++i) s += (i ? ", " : " ") + to_string(FqElem{f, f->primitive()});
      labels.push_back(s + ">");
    }
  HGroupFinite out{GroupPresentation(f->p(), r, labels), {}};
  if (T == 0) return out;  // F_2^x is trivial: no generators for n >= 1
  // a symbol <w | c_1..c_n> with every c = zeta^{e}
  auto row_of = [&](const WittFq& w, const std::vector<FqElem>& cs, long long coeff) {
    ZVec row(labels.size(), 0);
    std::uint64_t c = ring.reduce(coeff);
    for (const auto& x : cs) c = ring.mul(c, ring.reduce(f->log(x.v)));
    const ZVec a = witt_coordinates(w);
    for (std::uint32_t j = 0; j < k; ++j) row[j] = ring.mul(a[j], c);
    return row;
  };
  const FqElem zeta{f, f->primitive()};
  const std::vector<FqElem> zetas(static_cast<std::size_t>(n), zeta);
  if (n >= 1)
    for (std::uint32_t j = 0; j < k; ++j) {
      out.group.add_relation(row_of(teichmuller(basis_elem(f, j), r), zetas, static_cast<long long>(f->size() - 1)));
      ++out.census[RelationKind::Multiplicative];
    }
  const auto all = elements(f);
  if (n >= 2)
    for (std::uint32_t j = 0; j < k; ++j)
      for (const auto& x : all) {
        if (x.is_zero()) continue;
        std::vector<FqElem> cs = zetas;
        cs[0] = cs[1] = x;
        out.group.add_relation(row_of(teichmuller(basis_elem(f, j), r), cs, 1));
        ++out.census[RelationKind::Repeated];
      }
  if (n >= 1)
    for (std::uint32_t i = 0; i < r; ++i)
      for (const auto& x : all) {
        if (x.is_zero()) continue;
        std::vector<FqElem> e(r, FqElem::zero(f));
        e[i] = x;
        std::vector<FqElem> cs = zetas;
        cs[0] = x;
        out.group.add_relation(row_of(WittFq(e), cs, 1));
        ++out.census[RelationKind::Diagonal];
      }
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < r; ++i) count *= f->size();
  if (count > (1u << 16)) throw Error(ErrorKind::TooLarge, "Witt pool too large");
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    out.group.add_relation(row_of(wp(witt_from_index(idx, f, r)), zetas, 1));
    ++out.census[RelationKind::Wp];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

RatFunc random_ratfunc(FieldPtr f, int D, std::mt19937_64& rng, bool allow_const = true) {
  const std::uint32_t q = f->size();
  while (true) {
    std::vector<std::uint32_t> num, den;
    const int dn = static_cast<int>(rng() % static_cast<std::uint64_t>(D + 1));
    const int dd = static_cast<int>(rng() % static_cast<std::uint64_t>(D + 1));
    for (int i = 0; i <= dn; ++i) num.push_back(static_cast<std::uint32_t>(rng() % q));
    for (int i = 0; i < dd; ++i) den.push_back(static_cast<std::uint32_t>(rng() % q));
    den.push_back(f->from_int(1));
    RatFunc x(Poly(f, num), Poly(f, den));
    if (x.is_zero() || (!allow_const && x.is_constant())) continue;
    return x;
  }
}

}  // namespace

HbnReport hbn_check(FieldPtr f, std::uint32_t r, int D, std::uint64_t seed, std::size_t samples, std::size_t probes) {
  HbnReport rep;
  std::mt19937_64 rng(seed);
  const std::uint32_t q = f->size();
  for (std::size_t i = 0; i < samples; ++i) {
    const RatFunc b = random_ratfunc(f, D, rng, false);
    WittRat a;
    if (r == 1 && i % 2 == 1) {
      a = WittRat({random_ratfunc(f, D, rng)});
      if (!a[0].is_constant()) ++rep.wild_samples;
    } else {
      std::vector<RatFunc> e;
      for (std::uint32_t j = 0; j < r; ++j) e.push_back(RatFunc::constant(FqElem{f, static_cast<std::uint32_t>(rng() % q)}));
      a = WittRat(std::move(e));
    }
    ++rep.samples;
    if (invariant_vector({KatoSymbol{a, {b}, 1}}).total() != 0) ++rep.sum_failures;
  }
  {
    const WittRat c = to_rational(coker_wp(f, r).distinguished);
    const InvariantVector iv = invariant_vector({KatoSymbol{c, {RatFunc::t(f)}, 1}});
    rep.pair_witness = iv.entries.size() == 2 && iv.total() == 0;
  }
  if (r != 1 || probes == 0) return rep;
  const HGroupTruncation h = h_truncation(f, 1, 1, D);
  const std::vector<Place> places = enumerate_places(f, D);
  std::vector<ZVec> inv_rows;
  for (const auto& g : h.generators) {
    const InvariantVector iv = invariant_vector({g});
    ZVec row;
    for (const auto& v : places) row.push_back(iv.at(v));
    inv_rows.push_back(std::move(row));
  }
  const ZModPr& ring = h.group.ring();
  const auto kernel = left_kernel(ring, inv_rows, places.size());
  if (kernel.empty()) return rep;
  for (std::size_t i = 0; i < probes; ++i) {
    ZVec combo(h.generators.size(), 0);
    for (const auto& kv : kernel) {
      const std::uint64_t c = rng() % ring.modulus();
      for (std::size_t j = 0; j < combo.size(); ++j) combo[j] = ring.add(combo[j], ring.mul(c, kv[j]));
    }
    KatoSum sum;
    for (std::size_t j = 0; j < combo.size(); ++j)
      if (combo[j]) sum.push_back(KatoSymbol{h.generators[j].a, h.generators[j].bs, static_cast<long long>(combo[j])});
    ++rep.probes;
    if (!invariant_vector(sum).is_zero() || !h.group.is_zero(combo)) ++rep.probe_failures;
  }
  return rep;
}

std::string to_string(const KatoSymbol& s) {
  std::string out = s.coeff == 1 ? "" : std::to_string(s.coeff) + "*";
  out += "<" + to_string(s.a) + " |";
  for (std::size_t i = 0; i < s.bs.size(); ++i) out += (i ? ", " : " ") + to_string(s.bs[i]);
  return out + ">";
}

std::string to_string(const InvariantVector& v) {
  std::string out = "[";
  bool first = true;
  for (const auto& [pl, x] : v.entries) {
    out += (first ? "" : ", ") + to_string(pl) + ": " + std::to_string(x);
    first = false;
  }
  return out + "]";
}

}  // namespace kato
