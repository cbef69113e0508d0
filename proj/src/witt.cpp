#include "kato/witt.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace kato {

namespace {

using Exps = std::vector<std::uint16_t>;
using IPoly = std::map<Exps, std::uint64_t>;  // coefficients in Z/M

void iadd(IPoly& a, const IPoly& b, std::uint64_t scale, std::uint64_t M) {
  scale %= M;
  if (scale == 0) return;
  for (const auto& [e, c] : b) {
    auto& slot = a[e];
    slot = (slot + scale * c) % M;
    if (slot == 0) a.erase(e);
  }
}

IPoly imul(const IPoly& a, const IPoly& b, std::uint64_t M) {
  IPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      auto& slot = out[e];
      slot = (slot + ca * cb) % M;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

IPoly ipow(IPoly a, std::uint64_t e, std::size_t nv, std::uint64_t M) {
  IPoly result{{Exps(nv, 0), 1 % M}};
  while (e) {
    if (e & 1) result = imul(result, a, M);
    e >>= 1;
    if (e) a = imul(a, a, M);
  }
  return result;
}

IPoly monomial(std::size_t nv, std::size_t var, std::uint16_t exp) {
  Exps e(nv, 0);
  e[var] = exp;
  return {{e, 1}};
}

std::uint64_t ipow_int(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// w_n of the variables starting at `offset`, modulo M
IPoly ghost(std::uint32_t p, std::uint32_t n, std::size_t nv, std::size_t offset, std::uint64_t M) {
  IPoly g;
  for (std::uint32_t j = 0; j <= n; ++j)
    iadd(g, monomial(nv, offset + j, static_cast<std::uint16_t>(ipow_int(p, n - j))), ipow_int(p, j), M);
  return g;
}

enum class Kind { Sum, Prod, Neg };

std::vector<IPoly> build(std::uint32_t p, std::uint32_t r, Kind kind) {
  const std::size_t nv = kind == Kind::Neg ? r : 2 * r;
  std::vector<IPoly> S;
  for (std::uint32_t n = 0; n < r; ++n) {
    const std::uint64_t M = ipow_int(p, n + 1), pn = ipow_int(p, n);
    IPoly acc;
    if (kind == Kind::Sum) {
      acc = ghost(p, n, nv, 0, M);
      iadd(acc, ghost(p, n, nv, r, M), 1, M);
    } else if (kind == Kind::Prod) {
      acc = imul(ghost(p, n, nv, 0, M), ghost(p, n, nv, r, M), M);
    } else {
      iadd(acc, ghost(p, n, nv, 0, M), M - 1, M);
    }
    for (std::uint32_t j = 0; j < n; ++j)
      iadd(acc, ipow(S[j], ipow_int(p, n - j), nv, M), M - ipow_int(p, j) % M, M);
    IPoly Sn;
    for (const auto& [e, c] : acc) {
      if (c % pn != 0) throw std::logic_error("Witt recursion: coefficient not divisible by p^n");
      if ((c / pn) % p) Sn[e] = (c / pn) % p;
    }
    S.push_back(std::move(Sn));
  }
  return S;
}

// w_i(S) == target mod p^{i+1}, with S lifted from its mod p representatives
void verify_ghost(std::uint32_t p, std::uint32_t r, Kind kind, const std::vector<IPoly>& S) {
  const std::size_t nv = kind == Kind::Neg ? r : 2 * r;
  for (std::uint32_t i = 0; i < r; ++i) {
    const std::uint64_t M = ipow_int(p, i + 1);
    IPoly lhs;
    for (std::uint32_t j = 0; j <= i; ++j) iadd(lhs, ipow(S[j], ipow_int(p, i - j), nv, M), ipow_int(p, j), M);
    IPoly rhs;
    if (kind == Kind::Sum) {
      rhs = ghost(p, i, nv, 0, M);
      iadd(rhs, ghost(p, i, nv, r, M), 1, M);
    } else if (kind == Kind::Prod) {
      rhs = imul(ghost(p, i, nv, 0, M), ghost(p, i, nv, r, M), M);
    } else {
      iadd(rhs, ghost(p, i, nv, 0, M), M - 1, M);
    }
    if (lhs != rhs) throw std::logic_error("Witt polynomial fails its ghost identity");
  }
}

MPoly to_mpoly(const IPoly& a, std::size_t nv) {
  MPoly m;
  m.nvars = nv;
  m.max_exp.assign(nv, 0);
  for (const auto& [e, c] : a) {
    m.terms.push_back({static_cast<std::uint32_t>(c), e});
    for (std::size_t i = 0; i < nv; ++i) m.max_exp[i] = std::max<std::uint32_t>(m.max_exp[i], e[i]);
  }
  return m;
}

std::vector<MPoly> finish(std::uint32_t p, std::uint32_t r, Kind kind) {
  auto S = build(p, r, kind);
  if (r <= 3) verify_ghost(p, r, kind, S);
  const std::size_t nv = kind == Kind::Neg ? r : 2 * r;
  std::vector<MPoly> out;
  for (const auto& s : S) out.push_back(to_mpoly(s, nv));
  return out;
}

}  // namespace

std::string MPoly::to_string(const std::vector<std::string>& names) const {
  if (terms.empty()) return "0";
  std::string s;
  for (const auto& t : terms) {
    if (!s.empty()) s += " + ";
    std::string mono;
    for (std::size_t i = 0; i < nvars; ++i) {
      if (!t.exps[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += names.at(i);
      if (t.exps[i] > 1) mono += "^" + std::to_string(t.exps[i]);
    }
    if (mono.empty()) s += std::to_string(t.coeff);
    else s += (t.coeff == 1 ? "" : std::to_string(t.coeff) + "*") + mono;
  }
  return s;
}

const WittPolyCache& witt_polys(std::uint32_t p, std::uint32_t r) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p));
  if (r == 0) throw Error(ErrorKind::LengthMismatch, "Witt length must be positive");
  if (r > kMaxWittLength || ipow_int(p, r - 1) > 64)
    throw Error(ErrorKind::LengthTooLarge, "W_" + std::to_string(r) + " at p=" + std::to_string(p));
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<WittPolyCache>> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto& slot = cache[{p, r}];
  if (!slot) {
    auto c = std::make_unique<WittPolyCache>();
    c->p = p;
    c->r = r;
    c->sum_polys = finish(p, r, Kind::Sum);
    c->prod_polys = finish(p, r, Kind::Prod);
    c->neg_polys = finish(p, r, Kind::Neg);
    slot = std::move(c);
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

FieldPtr field_of(const FqElem& x) { return x.field; }
FieldPtr field_of(const RatFunc& x) { return x.field(); }

std::vector<FqElem> eval_polys(const std::vector<MPoly>& polys, const std::vector<FqElem>& vars, FieldPtr f) {
  const std::size_t nv = vars.size();
  std::vector<std::uint32_t> need(nv, 0);
  for (const auto& P : polys)
    for (std::size_t i = 0; i < nv; ++i) need[i] = std::max(need[i], P.max_exp[i]);
  std::vector<std::vector<std::uint32_t>> pw(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    pw[i].resize(need[i] + 1);
    pw[i][0] = f->from_int(1);
    for (std::uint32_t e = 1; e <= need[i]; ++e) pw[i][e] = f->mul(pw[i][e - 1], vars[i].v);
  }
  std::vector<FqElem> out;
  out.reserve(polys.size());
  for (const auto& P : polys) {
    std::uint32_t acc = 0;
    for (const auto& t : P.terms) {
      std::uint32_t m = f->from_int(t.coeff);
      for (std::size_t i = 0; i < nv && m; ++i)
        if (t.exps[i]) m = f->mul(m, pw[i][t.exps[i]]);
      acc = f->add(acc, m);
    }
    out.push_back({f, acc});
  }
  return out;
}

std::vector<RatFunc> eval_polys(const std::vector<MPoly>& polys, const std::vector<RatFunc>& vars, FieldPtr f) {
  const bool constant = std::all_of(vars.begin(), vars.end(), [](const RatFunc& x) { return x.is_constant() || x.is_zero(); });
  if (constant) {
    std::vector<FqElem> cv;
    for (const auto& x : vars) cv.push_back(x.num().coeff(0));
    std::vector<RatFunc> out;
    for (const auto& c : eval_polys(polys, cv, f)) out.push_back(RatFunc::constant(c));
    return out;
  }
  const std::size_t nv = vars.size();
  std::vector<std::uint32_t> need(nv, 0);
  for (const auto& P : polys)
    for (std::size_t i = 0; i < nv; ++i) need[i] = std::max(need[i], P.max_exp[i]);
  std::vector<std::vector<RatFunc>> pw(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    pw[i].push_back(RatFunc::one(f));
    for (std::uint32_t e = 1; e <= need[i]; ++e) pw[i].push_back(vars[i].is_zero() ? RatFunc(f) : pw[i].back() * vars[i]);
  }
  std::vector<RatFunc> out;
  for (const auto& P : polys) {
    // collect by common denominators through RatFunc addition
    RatFunc acc(f);
    for (const auto& t : P.terms) {
      bool zero = false;
      for (std::size_t i = 0; i < nv && !zero; ++i) zero = t.exps[i] && vars[i].is_zero();
      if (zero) continue;
      RatFunc m = RatFunc::constant(FqElem::from_int(f, t.coeff));
      for (std::size_t i = 0; i < nv; ++i)
        if (t.exps[i]) m = m * pw[i][t.exps[i]];
      acc = acc + m;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

FqElem coeff_zero(FieldPtr f, const FqElem*) { return FqElem::zero(f); }
RatFunc coeff_zero(FieldPtr f, const RatFunc*) { return RatFunc(f); }
FqElem coeff_one(FieldPtr f, const FqElem*) { return FqElem::one(f); }
RatFunc coeff_one(FieldPtr f, const RatFunc*) { return RatFunc::one(f); }
FqElem coeff_frob(const FqElem& x) { return frobenius(x); }
RatFunc coeff_frob(const RatFunc& x) { return pow(x, static_cast<long long>(x.field()->p())); }
bool coeff_is_zero(const FqElem& x) { return x.is_zero(); }
bool coeff_is_zero(const RatFunc& x) { return x.is_zero(); }

template <class T>
void check_compatible(const WittVector<T>& x, const WittVector<T>& y) {
  if (x.field() != y.field()) throw Error(ErrorKind::FieldMismatch, "Witt vectors over different fields");
  if (x.length() != y.length()) throw Error(ErrorKind::LengthMismatch, "Witt vectors of different lengths");
}

template <class T>
WittVector<T> binary(const WittVector<T>& x, const WittVector<T>& y, bool product) {
  check_compatible(x, y);
  const auto& c = witt_polys(x.p(), x.length());
  std::vector<T> vars = x.entries();
  vars.insert(vars.end(), y.entries().begin(), y.entries().end());
  return WittVector<T>(eval_polys(product ? c.prod_polys : c.sum_polys, vars, x.field()));
}

}  // namespace

template <class T>
WittVector<T>::WittVector(std::vector<T> entries) : e_(std::move(entries)) {
  if (e_.empty()) throw Error(ErrorKind::LengthMismatch, "Witt vector of length zero");
  if (e_.size() > kMaxWittLength) throw Error(ErrorKind::LengthTooLarge, "Witt length above 4");
  field_ = field_of(e_[0]);
  for (const auto& x : e_)
    if (field_of(x) != field_) throw Error(ErrorKind::FieldMismatch, "Witt entries from different fields");
}

template <class T>
WittVector<T> WittVector<T>::zero(FieldPtr f, std::uint32_t r) {
  return WittVector(std::vector<T>(r, coeff_zero(f, static_cast<const T*>(nullptr))));
}

template <class T>
WittVector<T> WittVector<T>::one(FieldPtr f, std::uint32_t r) {
  std::vector<T> e(r, coeff_zero(f, static_cast<const T*>(nullptr)));
  e[0] = coeff_one(f, static_cast<const T*>(nullptr));
  return WittVector(std::move(e));
}

template <class T>
bool WittVector<T>::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const T& x) { return coeff_is_zero(x); });
}

template <class T>
WittVector<T> add(const WittVector<T>& x, const WittVector<T>& y) {
  return binary(x, y, false);
}

template <class T>
WittVector<T> mul(const WittVector<T>& x, const WittVector<T>& y) {
  return binary(x, y, true);
}

template <class T>
WittVector<T> neg(const WittVector<T>& x) {
  const auto& c = witt_polys(x.p(), x.length());
  return WittVector<T>(eval_polys(c.neg_polys, x.entries(), x.field()));
}

template <class T>
WittVector<T> sub(const WittVector<T>& x, const WittVector<T>& y) {
  return add(x, neg(y));
}

template <class T>
WittVector<T> int_mul(const WittVector<T>& x, long long n) {
  long long modulus = 1;
  for (std::uint32_t i = 0; i < x.length(); ++i) modulus *= x.p();
  std::uint64_t k = static_cast<std::uint64_t>(((n % modulus) + modulus) % modulus);
  WittVector<T> result = WittVector<T>::zero(x.field(), x.length()), base = x;
  while (k) {
    if (k & 1) result = add(result, base);
    k >>= 1;
    if (k) base = add(base, base);
  }
  return result;
}

template <class T>
WittVector<T> frobenius_W(const WittVector<T>& x) {
  std::vector<T> e;
  for (const auto& c : x.entries()) e.push_back(coeff_frob(c));
  return WittVector<T>(std::move(e));
}

template <class T>
WittVector<T> verschiebung(const WittVector<T>& x) {
  std::vector<T> e{coeff_zero(x.field(), static_cast<const T*>(nullptr))};
  e.insert(e.end(), x.entries().begin(), x.entries().end() - 1);
  return WittVector<T>(std::move(e));
}

template <class T>
WittVector<T> wp(const WittVector<T>& x) {
  return sub(frobenius_W(x), x);
}

template <class T>
WittVector<T> truncate(const WittVector<T>& x, std::uint32_t r) {
  if (r == 0 || r > x.length()) throw Error(ErrorKind::LengthMismatch, "truncation length");
  return WittVector<T>(std::vector<T>(x.entries().begin(), x.entries().begin() + r));
}

#define KATO_INSTANTIATE(T)                                                   \
  template class WittVector<T>;                                               \
  template WittVector<T> add(const WittVector<T>&, const WittVector<T>&);     \
  template WittVector<T> mul(const WittVector<T>&, const WittVector<T>&);     \
  template WittVector<T> neg(const WittVector<T>&);                           \
  template WittVector<T> sub(const WittVector<T>&, const WittVector<T>&);     \
  template WittVector<T> int_mul(const WittVector<T>&, long long);            \
  template WittVector<T> frobenius_W(const WittVector<T>&);                   \
  template WittVector<T> verschiebung(const WittVector<T>&);                  \
  template WittVector<T> wp(const WittVector<T>&);                            \
  template WittVector<T> truncate(const WittVector<T>&, std::uint32_t);

KATO_INSTANTIATE(FqElem)
KATO_INSTANTIATE(RatFunc)
#undef KATO_INSTANTIATE

WittFq teichmuller(const FqElem& b, std::uint32_t r) {
  std::vector<FqElem> e(r, FqElem::zero(b.field));
  e.at(0) = b;
  return WittFq(std::move(e));
}

WittRat teichmuller(const RatFunc& b, std::uint32_t r) {
  std::vector<RatFunc> e(r, RatFunc(b.field()));
  e.at(0) = b;
  return WittRat(std::move(e));
}

WittFq map_witt(const WittFq& x, const Embedding& e) {
  std::vector<FqElem> out;
  for (const auto& c : x.entries()) out.push_back(e(c));
  return WittFq(std::move(out));
}

WittRat map_witt(const WittRat& x, const Embedding& e) {
  std::vector<RatFunc> out;
  for (const auto& c : x.entries()) out.push_back(c.mapped(e));
  return WittRat(std::move(out));
}

WittRat to_rational(const WittFq& x) {
  std::vector<RatFunc> out;
  for (const auto& c : x.entries()) out.push_back(RatFunc::constant(c));
  return WittRat(std::move(out));
}

WittFq reduce_at(const WittRat& x, const Place& v) {
  std::vector<FqElem> out;
  for (const auto& c : x.entries()) out.push_back(residue_class(c, v));
  return WittFq(std::move(out));
}

WittFq witt_trace(const WittFq& x, FieldPtr sub) {
  const FieldPtr E = x.field();
  const Embedding& emb = embedding(sub, E);
  const std::uint32_t m = E->degree() / sub->degree();
  WittFq sum = x, conj = x;
  for (std::uint32_t i = 1; i < m; ++i) {
    for (std::uint32_t k = 0; k < sub->degree(); ++k) conj = frobenius_W(conj);
    sum = add(sum, conj);
  }
  std::vector<FqElem> out;
  for (const auto& c : sum.entries()) {
    auto pre = emb.preimage(c);
    if (!pre) throw std::logic_error("Witt trace left the subfield");
    out.push_back(*pre);
  }
  return WittFq(std::move(out));
}

std::uint64_t witt_to_int(const WittFq& x) {
  if (x.field()->degree() != 1) throw Error(ErrorKind::NotASubfield, "witt_to_int needs a prime field");
  const std::uint32_t p = x.p(), r = x.length();
  const std::uint64_t N = ipow_int(p, r);
  std::uint64_t s = 0;
  for (std::uint32_t j = 0; j < r; ++j) {
    std::uint64_t term = x[j].v % N;
    std::uint64_t pw = 1;
    for (std::uint32_t e = 0; e < r - 1 - j; ++e) pw *= p;
    std::uint64_t v = 1;
    for (std::uint64_t e = 0; e < pw; ++e) v = (v * term) % N;
    s = (s + ipow_int(p, j) * v) % N;
  }
  return s;
}

WittFq int_to_witt(std::uint64_t n, FieldPtr fp, std::uint32_t r) {
  return int_mul(WittFq::one(fp, r), static_cast<long long>(n % ipow_int(fp->p(), r)));
}

std::uint64_t witt_invariant(const WittFq& x) {
  return witt_to_int(witt_trace(x, make_field(x.p(), 1)));
}

ZVec witt_coordinates(const WittFq& x) {
  const FieldPtr f = x.field();
  const std::uint32_t p = f->p(), k = f->degree(), r = x.length();
  const std::uint64_t N = ipow_int(p, r);
  ZVec c(k, 0);
  WittFq u = x;
  std::uint64_t scale = 1;
  for (std::uint32_t level = 0; level < r; ++level) {
    const std::uint32_t len = r - level;
    const auto d = f->digits(u[0].v);
    WittFq lead = WittFq::zero(f, len);
    for (std::uint32_t i = 0; i < k; ++i) {
      if (!d[i]) continue;
      c[i] = (c[i] + scale * d[i]) % N;
      lead = add(lead, int_mul(teichmuller(FqElem{f, f->pow(f->generator(), i)}, len), d[i]));
    }
    if (len == 1) break;
    u = sub(u, lead);
    // u = (0, u_1, ...) = p * F^{-1}(u_1, ..., u_{len-1})
    std::vector<FqElem> y;
    for (std::uint32_t j = 1; j < len; ++j) y.push_back({f, f->pow(u[j].v, f->size() / p)});
    u = WittFq(std::move(y));
    scale *= p;
  }
  return c;
}

WittFq witt_from_coordinates(const ZVec& c, FieldPtr f, std::uint32_t r) {
  if (c.size() != f->degree()) throw Error(ErrorKind::LengthMismatch, "coordinate vector size");
  WittFq out = WittFq::zero(f, r);
  for (std::uint32_t i = 0; i < f->degree(); ++i)
    if (c[i]) out = add(out, int_mul(teichmuller(FqElem{f, f->pow(f->generator(), i)}, r), static_cast<long long>(c[i])));
  return out;
}

std::uint64_t witt_index(const WittFq& x) {
  std::uint64_t idx = 0;
  for (std::uint32_t i = x.length(); i-- > 0;) idx = idx * x.field()->size() + x[i].v;
  return idx;
}

WittFq witt_from_index(std::uint64_t idx, FieldPtr f, std::uint32_t r) {
  std::vector<FqElem> e;
  for (std::uint32_t i = 0; i < r; ++i, idx /= f->size()) e.push_back({f, static_cast<std::uint32_t>(idx % f->size())});
  return WittFq(std::move(e));
}

CokerWp coker_wp(FieldPtr f, std::uint32_t r) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    total *= f->size();
    if (total > kMaxFieldSize) throw Error(ErrorKind::TooLarge, "q^r exceeds 2^20 for " + f->name());
  }
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < f->degree(); ++i) labels.push_back(i == 0 ? "[1]" : i == 1 ? "[g]" : "[g^" + std::to_string(i) + "]");
  CokerWp out{GroupPresentation(f->p(), r, labels), 0, WittFq::one(f, r)};
  std::vector<bool> hit(total, false);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const WittFq w = wp(witt_from_index(idx, f, r));
    const std::uint64_t wi = witt_index(w);
    if (!hit[wi]) {
      hit[wi] = true;
      ++out.image_size;
    }
    out.group.add_relation(witt_coordinates(w));
  }
  if (f->degree() % f->p() == 0) {
    const FieldPtr fp = make_field(f->p(), 1);
    for (const auto& x : elements(f))
      if (!trace(x, fp).is_zero()) {
        out.distinguished = teichmuller(x, r);
        break;
      }
  }
  return out;
}

std::string to_string(const WittFq& x) {
  std::string s = "(";
  for (std::uint32_t i = 0; i < x.length(); ++i) s += (i ? "; " : "") + to_string(x[i]);
  return s + ")";
}

std::string to_string(const WittRat& x) {
  std::string s = "(";
  for (std::uint32_t i = 0; i < x.length(); ++i) s += (i ? "; " : "") + to_string(x[i]);
  return s + ")";
}

}  // namespace kato
