#include "kato/ratfunc.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace kato {

RatFunc::RatFunc(FieldPtr f) : num_(f), den_(Poly::constant(FqElem::one(f))) {}

RatFunc::RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(FqElem::one(num_.field()))) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::ZeroInput, "rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  const FieldPtr f = den_.field();
  if (num_.is_zero()) {
    num_ = Poly(f);
    den_ = Poly::constant(FqElem::one(f));
    return;
  }
  Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = divmod(num_, g).first;
    den_ = divmod(den_, g).first;
  }
  const FqElem li = kato::inverse(den_.lead());
  num_ = num_.scaled(li);
  den_ = den_.scaled(li);
}

RatFunc RatFunc::derivative() const {
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error(ErrorKind::ZeroInput, "inverse of zero rational function");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::mapped(const Embedding& e) const { return RatFunc(num_.mapped(e), den_.mapped(e)); }

RatFunc RatFunc::frobenius_coeffs(std::uint64_t power) const {
  return RatFunc(num_.frobenius_coeffs(power), den_.frobenius_coeffs(power));
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num_, a.den_); }
RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.num_, a.den_ * b.den_); }
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroInput, "division by zero rational function");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc pow(const RatFunc& a, long long e) {
  if (e < 0) return pow(a.inverse(), -e);
  return RatFunc(pow(a.num(), static_cast<std::uint64_t>(e)), pow(a.den(), static_cast<std::uint64_t>(e)));
}

bool cross_equal(const RatFunc& a, const RatFunc& b) { return a.num() * b.den() == b.num() * a.den(); }

Place Place::finite(Poly pi) {
  if (!pi.is_monic() || !is_irreducible(pi))
    throw Error(ErrorKind::NotIrreducible, "place polynomial " + to_string(pi));
  Place v(pi.field());
  v.pi_ = std::move(pi);
  return v;
}

bool operator<(const Place& a, const Place& b) noexcept {
  if (a.is_infinite() != b.is_infinite()) return b.is_infinite();
  if (a.is_infinite()) return false;
  return *a.pi_ < *b.pi_;
}

std::string to_string(const Place& v) { return v.is_infinite() ? "inf" : "(" + to_string(v.pi()) + ")"; }

const ResidueField& residue_field(const Place& v) {
  static std::map<std::pair<FieldPtr, std::vector<std::uint32_t>>, std::unique_ptr<ResidueField>> cache;
  static std::mutex m;
  const FieldPtr f = v.base();
  std::vector<std::uint32_t> key = v.is_infinite() ? std::vector<std::uint32_t>{} : v.pi().codes();
  {
    std::lock_guard lock(m);
    if (auto it = cache.find({f, key}); it != cache.end()) return *it->second;
  }
  auto rf = std::make_unique<ResidueField>();
  if (v.is_infinite()) {
    rf->field = f;
    rf->base = &embedding(f, f);
    rf->root = FqElem::zero(f);
  } else {
    rf->field = make_field(f->p(), f->degree() * static_cast<std::uint32_t>(v.degree()));
    rf->base = &embedding(f, rf->field);
    const Poly mapped = v.pi().mapped(*rf->base);
    bool found = false;
    for (std::uint32_t x = 0; x < rf->field->size() && !found; ++x)
      if (mapped.eval({rf->field, x}).is_zero()) {
        rf->root = {rf->field, x};
        found = true;
      }
    if (!found) throw Error(ErrorKind::NotIrreducible, "place polynomial has no root in its residue field");
  }
  std::lock_guard lock(m);
  auto [it, ok] = cache.emplace(std::make_pair(f, key), std::move(rf));
  return *it->second;
}

std::vector<Place> enumerate_places(FieldPtr f, int max_degree) {
  std::vector<Place> out;
  for (int d = 1; d <= max_degree; ++d)
    for (const auto& pi : monic_irreducibles(f, d)) out.push_back(Place::finite(pi));
  out.push_back(Place::infinity(f));
  return out;
}

static int poly_order(Poly a, const Poly& pi) {
  int n = 0;
  while (true) {
    auto [q, r] = divmod(a, pi);
    if (!r.is_zero()) return n;
    a = std::move(q);
    ++n;
  }
}

int valuation(const RatFunc& f, const Place& v) {
  if (f.is_zero()) throw Error(ErrorKind::ZeroInput, "valuation of zero");
  if (v.is_infinite()) return f.den().degree() - f.num().degree();
  return poly_order(f.num(), v.pi()) - poly_order(f.den(), v.pi());
}

FqElem residue_class(const RatFunc& f, const Place& v) {
  const auto& rf = residue_field(v);
  if (f.is_zero()) return FqElem::zero(rf.field);
  const int val = valuation(f, v);
  if (val < 0) throw Error(ErrorKind::PoleAtPlace, to_string(f) + " at " + to_string(v));
  if (val > 0) return FqElem::zero(rf.field);
  if (v.is_infinite()) return f.num().lead() / f.den().lead();
  return f.num().mapped(*rf.base).eval(rf.root) / f.den().mapped(*rf.base).eval(rf.root);
}

std::vector<Place> support(const RatFunc& f) {
  if (f.is_zero()) throw Error(ErrorKind::ZeroInput, "support of zero");
  std::vector<Place> out;
  for (const auto* p : {&f.num(), &f.den()})
    if (p->degree() > 0)
      for (auto& [pi, e] : factor(*p).factors) out.push_back(Place::finite(pi));
  if (f.num().degree() != f.den().degree()) out.push_back(Place::infinity(f.field()));
  std::sort(out.begin(), out.end());
  return out;
}

FqElem LaurentJet::coeff_at(int exponent) const {
  const int idx = exponent - leading_exponent;
  if (is_zero || idx < 0) return FqElem::zero(coeffs.empty() ? residue_field(place).field : coeffs[0].field);
  if (idx >= precision)
    throw Error(ErrorKind::InsufficientPrecision, "coefficient " + std::to_string(exponent) + " beyond precision");
  return coeffs[idx];
}

// power series quotient a/b to n terms, b(0) != 0
static std::vector<FqElem> series_divide(const Poly& a, const Poly& b, int n) {
  const FieldPtr k = b.field();
  std::vector<FqElem> out(n, FqElem::zero(k));
  const FqElem b0inv = inverse(b.coeff(0));
  for (int i = 0; i < n; ++i) {
    FqElem s = a.coeff(i);
    for (int j = 1; j <= i; ++j) s = s - b.coeff(j) * out[i - j];
    out[i] = s * b0inv;
  }
  return out;
}

static std::pair<int, Poly> strip_low(const Poly& a) {
  int lo = 0;
  while (a.coeff(lo).is_zero()) ++lo;
  std::vector<std::uint32_t> c(a.codes().begin() + lo, a.codes().end());
  return {lo, Poly(a.field(), std::move(c))};
}

LaurentJet laurent_expand(const RatFunc& f, const Place& v, int precision) {
  if (precision < 1) throw Error(ErrorKind::InsufficientPrecision, "precision must be positive");
  const auto& rf = residue_field(v);
  LaurentJet jet{v, 0, {}, precision, false};
  if (f.is_zero()) {
    jet.is_zero = true;
    jet.coeffs.assign(precision, FqElem::zero(rf.field));
    return jet;
  }
  Poly num, den;
  int shift = 0;
  if (v.is_infinite()) {
    num = f.num().reversed();
    den = f.den().reversed();
    shift = f.den().degree() - f.num().degree();
  } else {
    num = f.num().mapped(*rf.base).taylor_shift(rf.root);
    den = f.den().mapped(*rf.base).taylor_shift(rf.root);
  }
  auto [ln, n2] = strip_low(num);
  auto [ld, d2] = strip_low(den);
  jet.leading_exponent = shift + ln - ld;
  jet.coeffs = series_divide(n2, d2, precision);
  return jet;
}

FqElem residue_dt(const RatFunc& h, const Place& v) {
  const auto& rf = residue_field(v);
  if (h.is_zero()) return FqElem::zero(rf.field);
  if (v.is_infinite()) {
    // h dt = -h(1/u) u^-2 du
    const int lead = h.den().degree() - h.num().degree();
    if (lead > 1) return FqElem::zero(rf.field);
    const auto jet = laurent_expand(h, v, 1 - lead + 1);
    return -jet.coeff_at(1);
  }
  const int lead = valuation(h, v);
  if (lead >= 0) return FqElem::zero(rf.field);
  const auto jet = laurent_expand(h, v, -lead);
  return jet.coeff_at(-1);
}

RatFactorization factor(const RatFunc& f) {
  if (f.is_zero()) throw Error(ErrorKind::ZeroInput, "factor of zero");
  auto fn = factor(f.num());
  RatFactorization out{fn.unit, fn.factors};
  if (f.den().degree() > 0)
    for (auto& [pi, e] : factor(f.den()).factors) out.factors.emplace_back(pi, -e);
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::string to_string(const RatFunc& f) {
  if (f.den().is_one()) return to_string(f.num());
  auto wrap = [](const Poly& p) {
    std::string s = to_string(p);
    const bool simple = s.find('+') == std::string::npos && s.find('*') == std::string::npos;
    return simple ? s : "(" + s + ")";
  };
  return wrap(f.num()) + "/" + wrap(f.den());
}

}  // namespace kato
