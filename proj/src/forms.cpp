#include "kato/forms.hpp"

#include <set>

namespace kato {

namespace {

void same_degree(const DiffForm& a, const DiffForm& b) {
  if (a.degree != b.degree) throw Error(ErrorKind::LengthMismatch, "forms of different degrees");
}

void need_one_form(const DiffForm& w) {
  if (w.degree != 1) throw Error(ErrorKind::UnsupportedDegree, "operation defined on 1-forms");
}

// c^(1/p) in F_q
FqElem pth_root(const FqElem& c) { return pow(c, c.field->size() / c.field->p()); }

}  // namespace

DiffForm operator+(const DiffForm& a, const DiffForm& b) {
  same_degree(a, b);
  return {a.degree, a.f + b.f};
}
DiffForm operator-(const DiffForm& a, const DiffForm& b) {
  same_degree(a, b);
  return {a.degree, a.f - b.f};
}
DiffForm operator-(const DiffForm& a) { return {a.degree, -a.f}; }
DiffForm operator*(const RatFunc& g, const DiffForm& w) { return {w.degree, g * w.f}; }

DiffForm d(const DiffForm& x) {
  if (x.degree != 0) return DiffForm::zero(x.field(), x.degree + 1);
  return DiffForm::one_form(x.f.derivative());
}

DiffForm d(const RatFunc& x) { return DiffForm::one_form(x.derivative()); }

DiffForm dlog(const RatFunc& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroInput, "dlog of zero");
  return DiffForm::one_form(b.derivative() / b);
}

DiffForm cartier(const DiffForm& w) {
  need_one_form(w);
  const FieldPtr k = w.field();
  if (w.is_zero()) return w;
  const std::uint32_t p = k->p();
  const Poly& den = w.f.den();
  const Poly m = w.f.num() * pow(den, p - 1);
  std::vector<std::uint32_t> g;
  for (int e = static_cast<int>(p) - 1; e <= m.degree(); e += static_cast<int>(p)) g.push_back(pth_root(m.coeff(e)).v);
  if (g.empty()) return DiffForm::zero(k);
  return DiffForm::one_form(RatFunc(Poly(k, std::move(g)), den));
}

DiffForm inv_cartier(const DiffForm& w) {
  need_one_form(w);
  const FieldPtr k = w.field();
  const std::uint32_t p = k->p();
  return DiffForm::one_form(pow(w.f, p) * RatFunc(Poly::monomial(FqElem::one(k), p - 1)));
}

bool is_exact(const DiffForm& w) { return cartier(w).is_zero(); }

BClass b_level(const DiffForm& w, int max_level) {
  if (max_level < 1) throw Error(ErrorKind::BoundTooSmall, "B-level search needs L >= 1");
  need_one_form(w);
  BClass out{w, std::nullopt, max_level, {w}};
  if (w.is_zero()) {
    out.level = 0;
    return out;
  }
  DiffForm cur = w;
  for (int i = 1; i <= max_level; ++i) {
    cur = cartier(cur);
    out.chain.push_back(cur);
    if (cur.is_zero()) {
      out.level = i;
      break;
    }
  }
  return out;
}

DiffForm wp_form(const DiffForm& w) { return inv_cartier(w) - w; }

std::vector<DiffForm> form_pool(FieldPtr k, int D) {
  if (D < 0) throw Error(ErrorKind::BoundTooSmall, "pool degree bound");
  const std::uint32_t q = k->size();
  std::uint64_t count = 1;
  for (int i = 0; i <= D; ++i) count *= q;
  if (count > (1u << 16)) throw Error(ErrorKind::TooLarge, "form pool too large");
  std::vector<Poly> polys, monics;
  for (std::uint64_t c = 1; c < count; ++c) {
    std::vector<std::uint32_t> co;
    for (std::uint64_t x = c; x; x /= q) co.push_back(static_cast<std::uint32_t>(x % q));
    Poly a(k, co);
    polys.push_back(a);
    if (a.is_monic()) monics.push_back(a);
  }
  std::set<RatFunc> seen;
  std::vector<DiffForm> out;
  for (const auto& n : polys)
    for (const auto& m : monics) {
      RatFunc f(n, m);
      if (seen.insert(f).second) out.push_back(DiffForm::one_form(std::move(f)));
    }
  return out;
}

WpSurjectivityReport wp_surjective_on_Binf(FieldPtr k, int L, int D) {
  WpSurjectivityReport rep;
  for (const auto& x : form_pool(k, D)) {
    ++rep.checked;
    const BClass b = b_level(x, L);
    if (!b.level) continue;
    ++rep.in_binf;
    // y = C(x) + C^2(x) + ...
    DiffForm y = DiffForm::zero(k);
    for (std::size_t i = 1; i < b.chain.size(); ++i) y = y + b.chain[i];
    if (!is_exact(wp_form(y) - x)) {
      rep.ok = false;
      rep.failures.push_back(to_string(x));
    }
  }
  return rep;
}

std::uint64_t form_invariant(const DiffForm& w, const Place& v) {
  need_one_form(w);
  const FqElem res = residue_dt(w.f, v);
  return trace(res, make_field(res.field->p(), 1)).v;
}

HGroupR1 h_group_r1(FieldPtr k, int n, int D, bool rational) {
  HGroupR1 out{GroupPresentation(k->p(), 1), {}, {}, {}};
  if (!rational || n != 1) return out;  // Omega^n = 0 in these cases
  if (D < 1) throw Error(ErrorKind::BoundTooSmall, "h_group_r1 needs D >= 1");
  out.places = enumerate_places(k, D);
  for (const auto& v : out.places) {
    if (v.is_infinite()) continue;
    for (int i = 0; i < v.degree(); ++i)
      for (std::uint32_t j = 0; j < k->degree(); ++j) {
        const FqElem c{k, k->pow(k->generator(), j)};
        out.pool.push_back(DiffForm::one_form(RatFunc(Poly::monomial(c, static_cast<std::size_t>(i)), v.pi())));
      }
  }
  for (std::size_t i = 0; i < out.pool.size(); ++i) {
    ZVec row;
    for (const auto& v : out.places) row.push_back(form_invariant(out.pool[i], v));
    out.invariants.push_back(std::move(row));
    out.group.add_generator(to_string(out.pool[i]));
  }
  for (const auto& rel : left_kernel(out.group.ring(), out.invariants, out.places.size())) out.group.add_relation(rel);
  return out;
}

std::string to_string(const DiffForm& w) {
  if (w.degree == 0) return to_string(w.f);
  if (w.is_zero()) return "0";
  const std::string s = to_string(w.f);
  const bool bare = s.find_first_of("+/*") == std::string::npos;
  return (bare ? s : "(" + s + ")") + " * dt";
}

}  // namespace kato
