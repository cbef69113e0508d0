#include "kato/mackey.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "kato/forms.hpp"

namespace kato {

namespace {

bool below(FieldPtr E, FieldPtr Ep) { return E->p() == Ep->p() && Ep->degree() % E->degree() == 0; }

void need_below(FieldPtr E, FieldPtr Ep) {
  if (!below(E, Ep)) throw Error(ErrorKind::NotASubfield, E->name() + " in " + Ep->name());
}

FqElem basis_elem(FieldPtr f, std::uint32_t j) { return {f, f->pow(f->generator(), j)}; }

// x -> x^{|sub|^i}
FqElem sigma(const FqElem& x, FieldPtr sub, std::uint32_t i) {
  FqElem y = x;
  for (std::uint32_t s = 0; s < i; ++s) y = pow(y, sub->size());
  return y;
}

WittFq sigma_w(const WittFq& x, FieldPtr sub, std::uint32_t i) {
  std::vector<FqElem> e;
  for (const auto& c : x.entries()) e.push_back(sigma(c, sub, i));
  return WittFq(std::move(e));
}

std::optional<FqElem> descend_elem(const FqElem& x, FieldPtr sub) { return embedding(sub, x.field).preimage(x); }

std::optional<WittFq> descend_witt(const WittFq& x, FieldPtr sub) {
  std::vector<FqElem> e;
  for (const auto& c : x.entries()) {
    auto d = descend_elem(c, sub);
    if (!d) return std::nullopt;
    e.push_back(*d);
  }
  return WittFq(std::move(e));
}

std::optional<RatFunc> norm_rat(const RatFunc& y, FieldPtr sub) {
  const FieldPtr E = y.field();
  const std::uint32_t m = E->degree() / sub->degree();
  RatFunc prod = y, conj = y;
  for (std::uint32_t i = 1; i < m; ++i) {
    conj = conj.frobenius_coeffs(sub->size());
    prod = prod * conj;
  }
  return descend(prod, sub);
}

}  // namespace

// ---------------------------------------------------------------------------

FieldPtr FieldLattice::member(int m) const {
  if (m < 1 || m > bound) throw Error(ErrorKind::NotASubfield, "degree " + std::to_string(m) + " outside the lattice");
  return members[static_cast<std::size_t>(m - 1)];
}

int FieldLattice::degree_of(FieldPtr E) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i] == E) return static_cast<int>(i + 1);
  throw Error(ErrorKind::NotASubfield, E->name() + " is not a lattice member");
}

bool FieldLattice::contains(FieldPtr E) const { return std::find(members.begin(), members.end(), E) != members.end(); }

bool FieldLattice::comparable(FieldPtr E, FieldPtr Ep) const {
  return contains(E) && contains(Ep) && degree_of(Ep) % degree_of(E) == 0;
}

std::string FieldLattice::name(FieldPtr E) const { return E->name() + (rational ? "(t)" : ""); }

FieldLattice make_lattice(FieldPtr base, int bound, bool rational) {
  if (bound < 1) throw Error(ErrorKind::BoundTooSmall, "lattice bound must be >= 1");
  FieldLattice L;
  L.base = base;
  L.bound = bound;
  L.rational = rational;
  L.members.push_back(base);
  for (int m = 2; m <= bound; ++m) L.members.push_back(make_field(base->p(), base->degree() * static_cast<std::uint32_t>(m)));
  return L;
}

MackeySymbol make_mackey(FieldPtr base, WittFq a, std::vector<FqElem> bs, long long coeff) {
  need_below(base, a.field());
  for (const auto& b : bs) {
    if (b.field != a.field()) throw Error(ErrorKind::FieldMismatch, "symbol data over different fields");
    if (b.is_zero()) throw Error(ErrorKind::ZeroEntry, "symbol entry is zero");
  }
  return MackeySymbol{base, std::move(a), std::move(bs), coeff};
}

MackeySymbolRat make_mackey(FieldPtr base, WittRat a, std::vector<RatFunc> bs, long long coeff) {
  need_below(base, a.field());
  for (const auto& b : bs) {
    if (b.field() != a.field()) throw Error(ErrorKind::FieldMismatch, "symbol data over different fields");
    if (b.is_zero()) throw Error(ErrorKind::ZeroEntry, "symbol entry is zero");
  }
  return MackeySymbolRat{base, std::move(a), std::move(bs), coeff};
}

std::optional<WittFq> solve_witt_trace(const WittFq& x, FieldPtr Ep) {
  const FieldPtr E = x.field();
  need_below(E, Ep);
  const std::uint32_t r = x.length();
  const ZModPr ring(E->p(), r);
  std::vector<ZVec> rows;
  for (std::uint32_t j = 0; j < Ep->degree(); ++j) rows.push_back(witt_coordinates(witt_trace(teichmuller(basis_elem(Ep, j), r), E)));
  rows.push_back(witt_coordinates(x));
  const std::size_t last = rows.size() - 1;
  for (const auto& kv : left_kernel(ring, rows, E->degree())) {
    if (ring.val(kv[last]) != 0) continue;
    const std::uint64_t u = ring.unit_inverse(kv[last]);
    ZVec c(Ep->degree());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = ring.sub(0, ring.mul(kv[j], u));
    WittFq xi = witt_from_coordinates(c, Ep, r);
    if (!(witt_trace(xi, E) == x)) throw std::logic_error("Witt trace solution failed to verify");
    return xi;
  }
  // the last coordinates form an ideal generated by one of them
  return std::nullopt;
}

std::optional<FqElem> solve_norm(const FqElem& x, FieldPtr Ep) {
  const FieldPtr E = x.field;
  need_below(E, Ep);
  if (x.is_zero()) return std::nullopt;
  const FqElem zeta{Ep, Ep->primitive()};
  FqElem y = FqElem::one(Ep);
  for (std::uint32_t k = 0; k + 1 < Ep->size(); ++k) {
    if (norm(y, E) == x) return y;
    y = y * zeta;
  }
  return std::nullopt;
}

MackeySymbol pf_rewrite(const MackeySymbol& s, PfDirection dir, FieldPtr other, int slot) {
  if (slot < 0 || slot > s.weight()) throw Error(ErrorKind::LengthMismatch, "no such slot");
  const std::size_t bi = static_cast<std::size_t>(slot - 1);
  if (dir == PfDirection::Up) {
    const FieldPtr E = s.level(), Ep = other;
    need_below(E, Ep);
    if (E == Ep) return s;
    const Embedding& emb = embedding(E, Ep);
    MackeySymbol out{s.base, map_witt(s.a, emb), {}, s.coeff};
    for (const auto& b : s.bs) out.bs.push_back(emb(b));
    if (slot == 0) {
      auto xi = solve_witt_trace(s.a, Ep);
      if (!xi) throw Error(ErrorKind::NoPreimage, to_string(s.a) + " is not a trace from " + Ep->name());
      out.a = *xi;
    } else {
      auto y = solve_norm(s.bs[bi], Ep);
      if (!y) throw Error(ErrorKind::NoPreimage, to_string(s.bs[bi]) + " is not a norm from " + Ep->name());
      out.bs[bi] = *y;
    }
    return out;
  }
  const FieldPtr Ep = s.level(), E = other;
  need_below(E, Ep);
  need_below(s.base, E);
  if (E == Ep) return s;
  MackeySymbol out{s.base, {}, {}, s.coeff};
  if (slot == 0) {
    out.a = witt_trace(s.a, E);
  } else {
    auto a = descend_witt(s.a, E);
    if (!a) throw Error(ErrorKind::NoPreimage, "Witt datum does not descend to " + E->name());
    out.a = *a;
  }
  for (std::size_t i = 0; i < s.bs.size(); ++i) {
    if (static_cast<int>(i) + 1 == slot) {
      out.bs.push_back(norm(s.bs[i], E));
      continue;
    }
    auto b = descend_elem(s.bs[i], E);
    if (!b) throw Error(ErrorKind::NoPreimage, "entry does not descend to " + E->name());
    out.bs.push_back(*b);
  }
  return out;
}

MackeySymbol transfer(const MackeySymbol& s, FieldPtr new_base) {
  need_below(new_base, s.base);
  MackeySymbol out = s;
  out.base = new_base;
  return out;
}

MackeySum restriction(const MackeySymbol& s, FieldPtr up) {
  const FieldPtr F = s.base;
  need_below(F, up);
  const FieldPtr L0 = s.level();
  const std::uint32_t dE = up->degree() / F->degree();
  const std::uint32_t dL = L0->degree() / F->degree();
  const std::uint32_t g = std::gcd(dE, dL);
  const std::uint32_t l = dE / g * dL;
  const FieldPtr L = make_field(F->p(), F->degree() * l);
  const Embedding& iota = embedding(L0, L);
  MackeySum out;
  for (std::uint32_t i = 0; i < g; ++i) {
    MackeySymbol c{up, sigma_w(map_witt(s.a, iota), F, i), {}, s.coeff};
    for (const auto& b : s.bs) c.bs.push_back(sigma(iota(b), F, i));
    out.push_back(std::move(c));
  }
  return out;
}

MackeySymbol canonical(const MackeySymbol& s) {
  const std::uint32_t m = s.level()->degree() / s.base->degree();
  MackeySymbol best = s;
  auto key = [](const MackeySymbol& x) {
    std::vector<std::uint32_t> k;
    for (const auto& c : x.a.entries()) k.push_back(c.v);
    for (const auto& b : x.bs) k.push_back(b.v);
    return k;
  };
  auto best_key = key(best);
  for (std::uint32_t i = 1; i < m; ++i) {
    MackeySymbol c{s.base, sigma_w(s.a, s.base, i), {}, s.coeff};
    for (const auto& b : s.bs) c.bs.push_back(sigma(b, s.base, i));
    auto k = key(c);
    if (k < best_key) {
      best = c;
      best_key = k;
    }
  }
  return best;
}

std::map<std::string, long long> canonical_sum(const MackeySum& sum) {
  std::map<std::string, long long> out;
  for (const auto& s : sum) {
    MackeySymbol c = canonical(s);
    const long long coeff = c.coeff;
    c.coeff = 1;
    out[to_string(c)] += coeff;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// ---------------------------------------------------------------------------

ZVec mackey_coordinates(const MackeyGroupTruncation& g, const MackeySymbol& s) {
  if (s.base != g.lattice.base) throw Error(ErrorKind::NotASubfield, "symbol base differs from the lattice base");
  if (s.weight() != g.n) throw Error(ErrorKind::LengthMismatch, "symbol weight differs from the group");
  if (s.a.length() != g.r) throw Error(ErrorKind::LengthMismatch, "Witt length differs from the group");
  const int m = g.lattice.degree_of(s.level());
  const FieldPtr E = s.level();
  const ZModPr& ring = g.group.ring();
  std::uint64_t c = ring.reduce(s.coeff);
  for (const auto& b : s.bs) c = ring.mul(c, ring.reduce(E->log(b.v)));
  ZVec row(g.group.generator_count(), 0);
  const ZVec a = witt_coordinates(s.a);
  const std::size_t off = g.level_offsets[static_cast<std::size_t>(m - 1)];
  for (std::size_t j = 0; j < a.size(); ++j) row[off + j] = ring.mul(a[j], c);
  return row;
}

MackeyGroupTruncation mackey_group(const FieldLattice& lattice, int n, std::uint32_t r, bool wp_quotient) {
  if (lattice.rational) throw Error(ErrorKind::UnsupportedDegree, "mackey_group presents the finite-field product");
  if (n < 0) throw Error(ErrorKind::UnsupportedDegree, "negative weight");
  const FieldPtr F = lattice.base;
  std::vector<std::string> labels;
  std::vector<std::size_t> offsets;
  auto zetas = [&](FieldPtr E) { return std::vector<FqElem>(static_cast<std::size_t>(n), FqElem{E, E->primitive()}); };
  for (const FieldPtr E : lattice.members) {
    offsets.push_back(labels.size());
    for (std::uint32_t j = 0; j < E->degree(); ++j)
      labels.push_back(to_string(MackeySymbol{F, teichmuller(basis_elem(E, j), r), zetas(E), 1}));
  }
  MackeyGroupTruncation g{lattice, n, r, wp_quotient, GroupPresentation(F->p(), r, std::move(labels)), {}, offsets};
  const ZModPr& ring = g.group.ring();
  auto add = [&](const std::string& kind, const ZVec& row) {
    g.group.add_relation(row);
    ++g.census[kind];
  };
  auto diff = [&](ZVec a, const ZVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = ring.sub(a[i], b[i]);
    return a;
  };
  for (const FieldPtr E : lattice.members) {
    for (std::uint32_t j = 0; j < E->degree(); ++j) {
      const WittFq beta = teichmuller(basis_elem(E, j), r);
      if (n >= 1) {
        // (|E| - 1) {beta; .., zeta_E, ..} = {beta; .., 1, ..} = 0, on the column itself
        ZVec row(g.group.generator_count(), 0);
        row[offsets[static_cast<std::size_t>(lattice.degree_of(E) - 1)] + j] = ring.reduce(static_cast<long long>(E->size() - 1));
        add("multiplicative", row);
      }
      if (wp_quotient) add("wp", mackey_coordinates(g, MackeySymbol{F, wp(beta), zetas(E), 1}));
    }
  }
  for (const FieldPtr E : lattice.members)
    for (const FieldPtr Ep : lattice.members) {
      if (E == Ep || !lattice.comparable(E, Ep)) continue;
      const Embedding& emb = embedding(E, Ep);
      std::vector<FqElem> up_z;
      for (const auto& z : zetas(E)) up_z.push_back(emb(z));
      // Witt slot: {tr xi; x}_E = {xi; res x}_Ep
      for (std::uint32_t j = 0; j < Ep->degree(); ++j) {
        const WittFq xi = teichmuller(basis_elem(Ep, j), r);
        const MackeySymbol lower{F, witt_trace(xi, E), zetas(E), 1};
        const MackeySymbol upper{F, xi, up_z, 1};
        add("pf", diff(mackey_coordinates(g, lower), mackey_coordinates(g, upper)));
      }
      // multiplicative slots: {a; N y}_E = {res a; y}_Ep
      const FqElem y{Ep, Ep->primitive()};
      for (int slot = 0; slot < n; ++slot)
        for (std::uint32_t j = 0; j < E->degree(); ++j) {
          const WittFq a = teichmuller(basis_elem(E, j), r);
          MackeySymbol lower{F, a, zetas(E), 1};
          MackeySymbol upper{F, map_witt(a, emb), up_z, 1};
          lower.bs[static_cast<std::size_t>(slot)] = norm(y, E);
          upper.bs[static_cast<std::size_t>(slot)] = y;
          add("pf", diff(mackey_coordinates(g, lower), mackey_coordinates(g, upper)));
        }
    }
  return g;
}

// ---------------------------------------------------------------------------

InvariantVector extended_symbol(const MackeySymbolRat& s) {
  if (s.weight() != 1) throw Error(ErrorKind::UnsupportedDegree, "extended symbol over F_q(t) is computed at n = 1");
  return cor_invariants({KatoSymbol{s.a, s.bs, s.coeff}}, s.base);
}

std::uint64_t extended_symbol(const MackeySymbol& s) {
  if (s.weight() >= 1) return 0;
  const ZModPr ring(s.base->p(), s.a.length());
  return ring.mul(witt_invariant(s.a), ring.reduce(s.coeff));
}

namespace {

std::vector<WittRat> witt_pool_rat(FieldPtr K, std::uint32_t r) {
  std::vector<WittRat> out;
  const RatFunc t = RatFunc::t(K);
  for (std::uint32_t j = 0; j < K->degree(); ++j) {
    const RatFunc c = RatFunc::constant(basis_elem(K, j));
    if (r == 1) {
      out.push_back(WittRat({c}));
      out.push_back(WittRat({c * t}));
      for (const auto& alpha : elements(K)) out.push_back(WittRat({c / (t - RatFunc::constant(alpha))}));
    } else {
      out.push_back(teichmuller(c, r));
      std::vector<RatFunc> v(r, RatFunc(K));
      v[1] = c;
      out.push_back(WittRat(v));
    }
  }
  return out;
}

std::vector<RatFunc> mult_pool_rat(FieldPtr K) {
  std::vector<RatFunc> out;
  if (K->size() > 2) out.push_back(RatFunc::constant(FqElem{K, K->primitive()}));
  const RatFunc t = RatFunc::t(K);
  for (const auto& alpha : elements(K)) out.push_back(t - RatFunc::constant(alpha));
  return out;
}

}  // namespace

std::vector<PfInstanceRat> pf_instances_rat(const FieldLattice& lattice, std::uint32_t r) {
  const FieldPtr F = lattice.base;
  std::vector<PfInstanceRat> out;
  for (const FieldPtr E : lattice.members)
    for (const FieldPtr Ep : lattice.members) {
      if (E == Ep || !lattice.comparable(E, Ep)) continue;
      const Embedding& emb = embedding(E, Ep);
      for (const auto& xi : witt_pool_rat(Ep, r))
        for (const auto& b : mult_pool_rat(E))
          out.push_back({0, MackeySymbolRat{F, witt_trace_rat(xi, E), {b}, 1}, MackeySymbolRat{F, xi, {b.mapped(emb)}, 1}});
      for (const auto& a : witt_pool_rat(E, r))
        for (const auto& y : mult_pool_rat(Ep)) {
          const auto ny = norm_rat(y, E);
          if (!ny) throw std::logic_error("norm did not descend");
          out.push_back({1, MackeySymbolRat{F, a, {*ny}, 1}, MackeySymbolRat{F, map_witt(a, emb), {y}, 1}});
        }
    }
  return out;
}

TransferSurjectivity transfer_surjectivity_check(FieldPtr F, FieldPtr Fp, int n, std::uint32_t r) {
  need_below(F, Fp);
  TransferSurjectivity rep;
  const Embedding& emb = embedding(F, Fp);
  for (std::uint32_t j = 0; j < F->degree(); ++j) {
    ++rep.generators;
    const WittFq beta = teichmuller(basis_elem(F, j), r);
    const MackeySymbol target{F, beta, std::vector<FqElem>(static_cast<std::size_t>(n), FqElem{F, F->primitive()}), 1};
    auto xi = solve_witt_trace(beta, Fp);
    if (!xi || !(witt_trace(*xi, F) == beta)) {
      rep.ok = false;
      rep.failures.push_back(to_string(target));
      continue;
    }
    MackeySymbol up{F, *xi, {}, 1};
    for (const auto& b : target.bs) up.bs.push_back(emb(b));
    // pushing the witness back down recovers the generator
    if (!(pf_rewrite(up, PfDirection::Down, F, 0).a == beta)) {
      rep.ok = false;
      rep.failures.push_back(to_string(target));
    }
  }
  return rep;
}

DsmReport dsm_check(FieldPtr f, int D, std::uint64_t seed, std::size_t samples) {
  DsmReport rep;
  std::mt19937_64 rng(seed);
  const std::uint32_t q = f->size();
  auto random_rat = [&](bool nonconstant) {
    while (true) {
      std::vector<std::uint32_t> num, den;
      const auto dn = rng() % static_cast<std::uint64_t>(D + 1), dd = rng() % static_cast<std::uint64_t>(D + 1);
      for (std::uint64_t i = 0; i <= dn; ++i) num.push_back(static_cast<std::uint32_t>(rng() % q));
      for (std::uint64_t i = 0; i < dd; ++i) den.push_back(static_cast<std::uint32_t>(rng() % q));
      den.push_back(f->from_int(1));
      RatFunc x(Poly(f, num), Poly(f, den));
      if (x.is_zero() || (nonconstant && x.is_constant())) continue;
      return x;
    }
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const RatFunc b = random_rat(true);
    const RatFunc a = i % 2 == 0 ? RatFunc::one(f) : random_rat(false);
    // forms route: residues of a dlog b at its poles
    const DiffForm w = a * dlog(b);
    InvariantVector forms_route;
    forms_route.p = f->p();
    forms_route.r = 1;
    std::set<Place> poles{Place::infinity(f)};
    if (!w.is_zero() && w.f.den().degree() > 0)
      for (const auto& [pi, e] : factor(w.f.den()).factors) poles.insert(Place::finite(pi));
    if (!w.is_zero())
      for (const auto& v : poles) forms_route.add(v, form_invariant(w, v));
    const InvariantVector symbol_route = extended_symbol(MackeySymbolRat{f, WittRat({a}), {b}, 1});
    ++rep.samples;
    if (!(forms_route == symbol_route)) {
      ++rep.failures;
      rep.ok = false;
    }
  }
  return rep;
}

std::string to_string(const MackeySymbol& s) {
  std::string out = s.coeff == 1 ? "" : std::to_string(s.coeff) + "*";
  out += "{" + to_string(s.a);
  for (std::size_t i = 0; i < s.bs.size(); ++i) out += (i ? ", " : "; ") + to_string(s.bs[i]);
  return out + "}_{" + s.level()->name() + "/" + s.base->name() + "}";
}

std::string to_string(const MackeySymbolRat& s) {
  std::string out = s.coeff == 1 ? "" : std::to_string(s.coeff) + "*";
  out += "{" + to_string(s.a);
  for (std::size_t i = 0; i < s.bs.size(); ++i) out += (i ? ", " : "; ") + to_string(s.bs[i]);
  return out + "}_{" + s.level()->name() + "(t)/" + s.base->name() + "(t)}";
}

}  // namespace kato
