#include "kato/milnor.hpp"

#include <algorithm>
#include <set>

#include "kato/forms.hpp"

namespace kato {

namespace {

FieldPtr field_of(const FqElem& x) { return x.field; }
FieldPtr field_of(const RatFunc& x) { return x.field(); }
bool is_one(const FqElem& x) { return x.is_one(); }
bool is_one(const RatFunc& x) { return x.is_one(); }
bool entry_is_zero(const FqElem& x) { return x.is_zero(); }
bool entry_is_zero(const RatFunc& x) { return x.is_zero(); }
FqElem one_minus(const FqElem& x) { return FqElem::one(x.field) - x; }
RatFunc one_minus(const RatFunc& x) { return RatFunc::one(x.field()) - x; }
FqElem minus_one(const FqElem& x) { return FqElem::from_int(x.field, -1); }
RatFunc minus_one(const RatFunc& x) { return RatFunc::constant(FqElem::from_int(x.field(), -1)); }

// Steinberg-type vanishing of one tuple
template <class T>
bool vanishes(const std::vector<T>& e) {
  for (const auto& x : e)
    if (is_one(x)) return true;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      if (e[j] == one_minus(e[i]) || e[j] == -e[i]) return true;
  return false;
}

}  // namespace

template <class T>
MilnorSymbol<T> MilnorSymbol<T>::single(Tuple entries, long long coeff) {
  MilnorSymbol s(static_cast<int>(entries.size()));
  s.add_term(entries, coeff);
  return s;
}

template <class T>
void MilnorSymbol<T>::add_term(const Tuple& entries, long long coeff) {
  if (static_cast<int>(entries.size()) != n_) throw Error(ErrorKind::LengthMismatch, "symbol weight");
  for (const auto& x : entries)
    if (entry_is_zero(x)) throw Error(ErrorKind::ZeroEntry, "Milnor symbol with a zero entry");
  if (!entries.empty()) {
    const FieldPtr f = field_of(entries[0]);
    for (const auto& x : entries)
      if (field_of(x) != f) throw Error(ErrorKind::FieldMismatch, "symbol entries over different fields");
  }
  if (coeff == 0) return;
  auto& c = terms_[entries];
  c += coeff;
  if (c == 0) terms_.erase(entries);
}

template <class T>
void MilnorSymbol<T>::check_weight(const MilnorSymbol& b) const {
  if (n_ != b.n_) throw Error(ErrorKind::LengthMismatch, "adding symbols of different weights");
}

template <class T>
MilnorSymbol<T> steinberg_reduce(const MilnorSymbol<T>& s) {
  MilnorSymbol<T> out(s.weight());
  for (const auto& kv : s.terms()) {
    auto e = kv.first;
    const long long c = kv.second;
    bool dead = false;
    bool changed = true;
    while (changed && !dead) {
      changed = false;
      if (vanishes(e)) {
        dead = true;
        break;
      }
      // {.., x, .., x, ..} = {.., x, .., -1, ..}
      for (std::size_t i = 0; i < e.size() && !changed; ++i)
        for (std::size_t j = i + 1; j < e.size() && !changed; ++j)
          if (e[i] == e[j] && !(e[i] == minus_one(e[i]))) {
            e[j] = minus_one(e[j]);
            changed = true;
          }
    }
    if (dead) continue;
    // graded-commutative sort
    long long sign = 1;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = 0; j + 1 < e.size() - i; ++j)
        if (e[j + 1] < e[j]) {
          std::swap(e[j], e[j + 1]);
          sign = -sign;
        }
    out.add_term(e, sign * c);
  }
  return out;
}

template class MilnorSymbol<FqElem>;
template class MilnorSymbol<RatFunc>;
template MilnorSymbol<FqElem> steinberg_reduce(const MilnorSymbol<FqElem>&);
template MilnorSymbol<RatFunc> steinberg_reduce(const MilnorSymbol<RatFunc>&);

FqElem tame_symbol(const MilnorRat& s, const Place& v) {
  if (s.weight() != 2) throw Error(ErrorKind::UnsupportedDegree, "tame symbol needs weight 2");
  const auto& rf = residue_field(v);
  FqElem acc = FqElem::one(rf.field);
  for (const auto& [e, c] : s.terms()) {
    const int a = valuation(e[0], v), b = valuation(e[1], v);
    RatFunc u = pow(e[1], a) * pow(e[0], -b);
    if ((a * b) % 2) u = -u;
    FqElem r = residue_class(u, v);
    if (c < 0) r = inverse(r);
    acc = acc * pow(r, static_cast<std::uint64_t>(c < 0 ? -c : c));
  }
  return acc;
}

WeilReport weil_check(const MilnorRat& s, int D) {
  if (s.weight() != 2) throw Error(ErrorKind::UnsupportedDegree, "Weil reciprocity needs weight 2");
  std::vector<Place> places;
  FieldPtr base = nullptr;
  for (const auto& [e, c] : s.terms())
    for (const auto& x : e) {
      base = x.field();
      if (x.height() > D) throw Error(ErrorKind::SupportExceedsBound, to_string(x) + " has degree above " + std::to_string(D));
      for (const auto& v : support(x))
        if (std::find(places.begin(), places.end(), v) == places.end()) places.push_back(v);
    }
  std::sort(places.begin(), places.end());
  WeilReport rep;
  if (!base) {
    rep.ok = true;
    return rep;
  }
  rep.product = FqElem::one(base);
  for (const auto& v : places) {
    const FqElem r = tame_symbol(s, v);
    if (!r.is_one()) rep.residues.emplace_back(v, r);
    rep.product = rep.product * norm(r, base);
  }
  rep.ok = rep.product.is_one();
  return rep;
}

namespace {

std::uint64_t checked_power(std::uint64_t b, int n) {
  std::uint64_t g = 1;
  for (int i = 0; i < n; ++i) {
    g *= b;
    if (g > 20000) throw Error(ErrorKind::TooLarge, "symbol pool produces too many generators");
  }
  return g;
}

// Relation row for a multilinear combination of pool-index tuples.
struct RowBuilder {
  const ZModPr& ring;
  std::size_t P;
  ZVec row;

  void add(const std::vector<std::vector<std::pair<std::size_t, long long>>>& slots, long long coeff) {
    // cartesian product of the slot expansions
    std::vector<std::size_t> pos(slots.size(), 0);
    for (const auto& s : slots)
      if (s.empty()) return;
    while (true) {
      std::size_t idx = 0, mul = 1;
      long long c = coeff;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        idx += slots[i][pos[i]].first * mul;
        mul *= P;
        c *= slots[i][pos[i]].second;
      }
      row[idx] = ring.add(row[idx], ring.reduce(c));
      std::size_t i = 0;
      while (i < slots.size() && ++pos[i] == slots[i].size()) pos[i++] = 0;
      if (i == slots.size()) break;
    }
  }
};

void odometer(std::vector<std::size_t>& v, std::size_t base, bool& done) {
  std::size_t i = 0;
  while (i < v.size() && ++v[i] == base) v[i++] = 0;
  done = i == v.size();
}

std::string tuple_label(const std::vector<std::string>& pool, std::size_t idx, int n) {
  std::string s = "{";
  for (int i = 0; i < n; ++i, idx /= pool.size()) s += (i ? ", " : "") + pool[idx % pool.size()];
  return s + "}";
}

}  // namespace

KPresentation k_mod_presentation(FieldPtr f, int n, std::uint32_t r) {
  if (n < 0) throw Error(ErrorKind::UnsupportedDegree, "negative weight");
  KPresentation out{GroupPresentation(f->p(), r), {}, 0};
  if (n == 0) {
    out.group.add_generator("{}");
    return out;
  }
  std::vector<FqElem> pool;
  for (std::uint32_t v = 1; v < f->size(); ++v) {
    pool.push_back({f, v});
    out.pool.push_back(to_string(FqElem{f, v}));
  }
  const std::size_t P = pool.size();
  const std::uint64_t G = checked_power(P, n);
  for (std::uint64_t i = 0; i < G; ++i) out.group.add_generator(tuple_label(out.pool, i, n));
  auto index_of = [&](const FqElem& x) { return static_cast<std::size_t>(x.v - 1); };
  const ZModPr& R = out.group.ring();

  std::vector<std::size_t> rest(static_cast<std::size_t>(n - 1), 0);
  bool done = false;
  while (!done) {
    for (int slot = 0; slot < n; ++slot)
      for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = a; b < P; ++b) {
          RowBuilder rb{R, P, ZVec(G, 0)};
          auto slots_with = [&](std::size_t x) {
            std::vector<std::vector<std::pair<std::size_t, long long>>> s;
            std::size_t k = 0;
            for (int i = 0; i < n; ++i) s.push_back({{i == slot ? x : rest[k++], 1}});
            return s;
          };
          rb.add(slots_with(index_of(pool[a] * pool[b])), 1);
          rb.add(slots_with(a), -1);
          rb.add(slots_with(b), -1);
          ++out.relation_instances;
          out.group.add_relation(rb.row);
        }
    if (n >= 2)
      for (int slot = 0; slot + 1 < n; ++slot)
        for (std::size_t a = 0; a < P; ++a) {
          const FqElem x = pool[a];
          if (x.is_one()) continue;
          std::vector<std::vector<std::pair<std::size_t, long long>>> s;
          std::size_t k = 0;
          for (int i = 0; i < n; ++i) {
            if (i == slot) s.push_back({{a, 1}});
            else if (i == slot + 1) s.push_back({{index_of(one_minus(x)), 1}});
            else s.push_back({{rest[k++], 1}});
          }
          RowBuilder rb{R, P, ZVec(G, 0)};
          rb.add(s, 1);
          ++out.relation_instances;
          out.group.add_relation(rb.row);
        }
    if (rest.empty()) break;
    odometer(rest, P, done);
  }
  return out;
}

KPresentation k_mod_presentation(FieldPtr f, int n, std::uint32_t r, int D) {
  if (n < 0) throw Error(ErrorKind::UnsupportedDegree, "negative weight");
  if (D < 1) throw Error(ErrorKind::BoundTooSmall, "degree bound must be at least 1");
  KPresentation out{GroupPresentation(f->p(), r), {}, 0};
  if (n == 0) {
    out.group.add_generator("{}");
    return out;
  }
  // pool: constants other than 1, then monic irreducibles by degree
  std::vector<Poly> irr;
  for (int d = 1; d <= D; ++d)
    for (const auto& pi : monic_irreducibles(f, d)) irr.push_back(pi);
  const std::size_t nconst = f->size() - 2;
  for (std::uint32_t v = 0; v < f->size(); ++v)
    if (v != 0 && v != f->from_int(1)) out.pool.push_back(to_string(FqElem{f, v}));
  for (const auto& pi : irr) out.pool.push_back(to_string(pi));
  const std::size_t P = out.pool.size();
  if (P == 0) throw Error(ErrorKind::BoundTooSmall, "empty symbol pool");
  const std::uint64_t G = checked_power(P, n);
  for (std::uint64_t i = 0; i < G; ++i) out.group.add_generator(tuple_label(out.pool, i, n));
  const ZModPr& R = out.group.ring();

  auto const_index = [&](const FqElem& c) -> std::optional<std::size_t> {
    if (c.is_one()) return std::nullopt;
    std::size_t i = 0;
    for (std::uint32_t v = 1; v < c.v; ++v)
      if (v != f->from_int(1)) ++i;
    return i;
  };
  auto expand = [&](const RatFunc& x) {
    std::vector<std::pair<std::size_t, long long>> out_;
    const auto fac = factor(x);
    if (auto ci = const_index(fac.unit)) out_.push_back({*ci, 1});
    for (const auto& [pi, e] : fac.factors) {
      const auto it = std::find(irr.begin(), irr.end(), pi);
      if (it == irr.end()) throw Error(ErrorKind::SupportExceedsBound, "factor outside the pool");
      out_.push_back({nconst + static_cast<std::size_t>(it - irr.begin()), e});
    }
    return out_;
  };
  std::vector<RatFunc> pool_elems;
  for (std::uint32_t v = 0; v < f->size(); ++v)
    if (v != 0 && v != f->from_int(1)) pool_elems.push_back(RatFunc::constant(FqElem{f, v}));
  for (const auto& pi : irr) pool_elems.push_back(RatFunc(pi));

  auto relation = [&](const std::vector<std::pair<std::vector<RatFunc>, long long>>& parts) {
    RowBuilder rb{R, P, ZVec(G, 0)};
    for (const auto& [tuple, c] : parts) {
      std::vector<std::vector<std::pair<std::size_t, long long>>> slots;
      for (const auto& x : tuple) slots.push_back(expand(x));
      rb.add(slots, c);
    }
    ++out.relation_instances;
    out.group.add_relation(rb.row);
  };

  // x = a/m with deg a, deg m <= D
  std::vector<RatFunc> xs;
  {
    const std::uint32_t q = f->size();
    std::uint64_t count = 1;
    for (int i = 0; i <= D; ++i) count *= q;
    std::vector<Poly> polys, monics;
    for (std::uint64_t c = 1; c < count; ++c) {
      std::vector<std::uint32_t> co;
      for (std::uint64_t y = c; y; y /= q) co.push_back(static_cast<std::uint32_t>(y % q));
      Poly a(f, co);
      polys.push_back(a);
      if (a.is_monic()) monics.push_back(a);
    }
    std::set<RatFunc> seen;
    for (const auto& a : polys)
      for (const auto& m : monics) {
        RatFunc x(a, m);
        if (seen.insert(x).second) xs.push_back(x);
      }
  }

  std::vector<std::size_t> rest(static_cast<std::size_t>(n - 1), 0);
  bool done = false;
  while (!done) {
    auto fill = [&](int slot, const std::vector<RatFunc>& at) {
      std::vector<RatFunc> t;
      std::size_t k = 0, j = 0;
      for (int i = 0; i < n; ++i) {
        if (i >= slot && i < slot + static_cast<int>(at.size())) t.push_back(at[j++]);
        else t.push_back(pool_elems[rest[k++]]);
      }
      return t;
    };
    // multiplicativity among constants
    for (int slot = 0; slot < n; ++slot)
      for (std::uint32_t a = 1; a < f->size(); ++a)
        for (std::uint32_t b = a; b < f->size(); ++b) {
          const FqElem ca{f, a}, cb{f, b};
          relation({{fill(slot, {RatFunc::constant(ca * cb)}), 1},
                    {fill(slot, {RatFunc::constant(ca)}), -1},
                    {fill(slot, {RatFunc::constant(cb)}), -1}});
        }
    if (n >= 2)
      for (int slot = 0; slot + 1 < n; ++slot)
        for (const auto& x : xs) {
          if (!x.is_one()) relation({{fill(slot, {x, RatFunc::one(f) - x}), 1}});
          relation({{fill(slot, {x, -x}), 1}});
        }
    if (rest.empty()) break;
    odometer(rest, P, done);
  }
  return out;
}

DlogKernelReport dlog_kernel_check(FieldPtr f, int D) {
  DlogKernelReport rep;
  const std::uint32_t p = f->p();
  auto pth_power_poly = [p](const Poly& a) {
    for (int i = 0; i <= a.degree(); ++i)
      if (i % static_cast<int>(p) && !a.coeff(static_cast<std::size_t>(i)).is_zero()) return false;
    return true;
  };
  for (const auto& w : form_pool(f, D)) {
    const RatFunc& x = w.f;
    ++rep.checked;
    const bool power = pth_power_poly(x.num()) && pth_power_poly(x.den());
    rep.pth_powers += power;
    const DiffForm dl = dlog(x);
    if (is_exact(dl) != power || dl.is_zero() != power) rep.ok = false;
  }
  return rep;
}

namespace {

template <class T>
std::string symbol_string(const MilnorSymbol<T>& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    if (c != 1) out += std::to_string(c) + "*";
    out += "{";
    for (std::size_t i = 0; i < e.size(); ++i) out += (i ? ", " : "") + to_string(e[i]);
    out += "}";
  }
  return out;
}

}  // namespace

std::string to_string(const MilnorFq& s) { return symbol_string(s); }
std::string to_string(const MilnorRat& s) { return symbol_string(s); }

}  // namespace kato
