#include "kato/poly.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace kato {

Poly::Poly(FieldPtr f, std::vector<std::uint32_t> coeffs) : field_(f), c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::constant(const FqElem& c) { return Poly(c.field, {c.v}); }

Poly Poly::monomial(const FqElem& c, std::size_t deg) {
  std::vector<std::uint32_t> v(deg + 1, 0);
  v[deg] = c.v;
  return Poly(c.field, std::move(v));
}

Poly Poly::linear(const FqElem& alpha) {
  return Poly(alpha.field, {alpha.field->neg(alpha.v), alpha.field->from_int(1)});
}

FqElem Poly::eval(const FqElem& x) const {
  if (x.field != field_) throw Error(ErrorKind::FieldMismatch, "polynomial evaluation");
  std::uint32_t acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = field_->add(field_->mul(acc, x.v), c_[i]);
  return {field_, acc};
}

Poly Poly::derivative() const {
  if (c_.size() < 2) return Poly(field_);
  std::vector<std::uint32_t> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = field_->mul(field_->from_int(static_cast<long long>(i)), c_[i]);
  return Poly(field_, std::move(d));
}

Poly Poly::scaled(const FqElem& c) const {
  std::vector<std::uint32_t> v(c_);
  for (auto& x : v) x = field_->mul(x, c.v);
  return Poly(field_, std::move(v));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(inverse(lead()));
}

Poly Poly::mapped(const Embedding& e) const {
  if (e.source() != field_) throw Error(ErrorKind::FieldMismatch, "mapped polynomial");
  std::vector<std::uint32_t> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = e.apply(c_[i]);
  return Poly(e.target(), std::move(v));
}

Poly Poly::frobenius_coeffs(std::uint64_t power) const {
  std::vector<std::uint32_t> v(c_);
  for (auto& x : v) x = field_->pow(x, power);
  return Poly(field_, std::move(v));
}

Poly Poly::taylor_shift(const FqElem& a) const {
  // Horner in t + a
  Poly shift(field_, {a.v, field_->from_int(1)});
  Poly acc(field_);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * shift + Poly(field_, {c_[i]});
  return acc;
}

Poly Poly::reversed() const {
  std::vector<std::uint32_t> v(c_.rbegin(), c_.rend());
  return Poly(field_, std::move(v));
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.field_ != b.field_ && a.field_ && b.field_) throw Error(ErrorKind::FieldMismatch, "polynomial sum");
  FieldPtr f = a.field_ ? a.field_ : b.field_;
  std::vector<std::uint32_t> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f->add(i < a.c_.size() ? a.c_[i] : 0, i < b.c_.size() ? b.c_[i] : 0);
  return Poly(f, std::move(v));
}

Poly operator-(const Poly& a) {
  std::vector<std::uint32_t> v(a.c_);
  for (auto& x : v) x = a.field_->neg(x);
  return Poly(a.field_, std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.field_ != b.field_) throw Error(ErrorKind::FieldMismatch, "polynomial product");
  if (a.is_zero() || b.is_zero()) return Poly(a.field_);
  const FieldPtr f = a.field_;
  std::vector<std::uint32_t> v(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (!a.c_[i]) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = f->add(v[i + j], f->mul(a.c_[i], b.c_[j]));
  }
  return Poly(f, std::move(v));
}

bool operator<(const Poly& a, const Poly& b) noexcept {
  if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;)
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  return false;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroInput, "polynomial division by zero");
  const FieldPtr f = b.field();
  std::vector<std::uint32_t> r(a.codes());
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<std::uint32_t> q(a.codes().size() - b.codes().size() + 1, 0);
  const std::uint32_t li = f->inv(b.codes().back());
  const auto& bc = b.codes();
  for (std::size_t k = q.size(); k-- > 0;) {
    const std::uint32_t c = f->mul(r[k + bc.size() - 1], li);
    q[k] = c;
    if (!c) continue;
    for (std::size_t i = 0; i < bc.size(); ++i) r[k + i] = f->sub(r[k + i], f->mul(c, bc[i]));
  }
  return {Poly(f, std::move(q)), Poly(f, std::move(r))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly pow(const Poly& a, std::uint64_t e) {
  Poly r = Poly::constant(FqElem::one(a.field())), b = a;
  for (; e; e >>= 1, b = b * b)
    if (e & 1) r = r * b;
  return r;
}

bool divides(const Poly& d, const Poly& a) { return divmod(a, d).second.is_zero(); }

const std::vector<Poly>& monic_irreducibles(FieldPtr f, int d) {
  static std::map<std::pair<FieldPtr, int>, std::unique_ptr<std::vector<Poly>>> cache;
  static std::recursive_mutex m;
  std::lock_guard lock(m);
  if (auto it = cache.find({f, d}); it != cache.end()) return *it->second;
  auto out = std::make_unique<std::vector<Poly>>();
  if (d >= 1) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
      count *= f->size();
      if (count > (1u << 22)) throw Error(ErrorKind::TooLarge, "irreducible enumeration");
    }
    for (std::uint64_t mcode = 0; mcode < count; ++mcode) {
      std::vector<std::uint32_t> c(d + 1);
      std::uint64_t t = mcode;
      for (int i = 0; i < d; ++i, t /= f->size()) c[i] = static_cast<std::uint32_t>(t % f->size());
      c[d] = f->from_int(1);
      Poly cand(f, std::move(c));
      bool irreducible = true;
      for (int e = 1; 2 * e <= d && irreducible; ++e)
        for (const auto& pi : monic_irreducibles(f, e))
          if (divides(pi, cand)) {
            irreducible = false;
            break;
          }
      if (irreducible) out->push_back(std::move(cand));
    }
  }
  auto [it, ok] = cache.emplace(std::make_pair(f, d), std::move(out));
  return *it->second;
}

bool is_irreducible(const Poly& a) {
  if (a.degree() < 1) return false;
  for (int e = 1; 2 * e <= a.degree(); ++e)
    for (const auto& pi : monic_irreducibles(a.field(), e))
      if (divides(pi, a)) return false;
  return true;
}

Factorization factor(const Poly& a) {
  if (a.is_zero()) throw Error(ErrorKind::ZeroInput, "factor of zero polynomial");
  Factorization out{a.lead(), {}};
  Poly rest = a.monic();
  for (int e = 1; 2 * e <= rest.degree(); ++e) {
    for (const auto& pi : monic_irreducibles(a.field(), e)) {
      int mult = 0;
      while (true) {
        auto [qq, r] = divmod(rest, pi);
        if (!r.is_zero()) break;
        rest = std::move(qq);
        ++mult;
      }
      if (mult) out.factors.emplace_back(pi, mult);
      if (2 * e > rest.degree()) break;
    }
  }
  if (rest.degree() >= 1) {
    bool merged = false;
    for (auto& [pi, mult] : out.factors)
      if (pi == rest) {
        ++mult;
        merged = true;
      }
    if (!merged) out.factors.emplace_back(rest, 1);
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::string to_string(const Poly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.codes().size(); ++i) {
    const std::uint32_t c = a.codes()[i];
    if (!c) continue;
    if (!first) os << "+";
    first = false;
    const FqElem ce{a.field(), c};
    const bool unit = ce.is_one();
    if (i == 0) {
      os << to_string(ce);
    } else {
      if (!unit) os << to_string(ce) << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace kato
