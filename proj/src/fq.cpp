#include "kato/fq.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace kato {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotASubfield: return "NotASubfield";
    case ErrorKind::FieldTooLarge: return "FieldTooLarge";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::LengthTooLarge: return "LengthTooLarge";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::PoleAtPlace: return "PoleAtPlace";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::SupportExceedsBound: return "SupportExceedsBound";
    case ErrorKind::BoundTooSmall: return "BoundTooSmall";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::WildAtPlace: return "WildAtPlace";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::NotConstantExtension: return "NotConstantExtension";
    case ErrorKind::NoPreimage: return "NoPreimage";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace fp_poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

static std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return static_cast<std::uint32_t>(r);
}

Poly rem(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = std::uint64_t(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * m[i] % p) % p);
    trim(a);
  }
  return a;
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  return rem(std::move(c), m, p);
}

Poly gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t li = inv_mod(a.back(), p);
    for (auto& c : a) c = static_cast<std::uint32_t>(c * li % p);
  }
  return a;
}

// x^(p^e) mod f
static Poly frob_power(const Poly& f, std::uint32_t p, std::uint32_t e) {
  Poly x = rem(Poly{0, 1}, f, p);
  for (std::uint32_t i = 0; i < e; ++i) {
    Poly r{1}, b = x;
    for (std::uint32_t k = p; k; k >>= 1) {
      if (k & 1) r = mul_mod(r, b, f, p);
      b = mul_mod(b, b, f, p);
    }
    x = std::move(r);
  }
  return x;
}

bool is_irreducible(const Poly& f_in, std::uint32_t p) {
  Poly f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  const auto k = static_cast<std::uint32_t>(f.size() - 1);
  if (k == 1) return true;
  auto minus_x = [&](Poly a) {
    a.resize(std::max<std::size_t>(a.size(), 2), 0);
    a[1] = (a[1] + p - 1) % p;
    trim(a);
    return a;
  };
  if (!minus_x(frob_power(f, p, k)).empty()) return false;
  for (std::uint32_t r = 2; r <= k; ++r) {
    if (k % r != 0 || !is_prime(r)) continue;
    if (gcd(f, minus_x(frob_power(f, p, k / r)), p).size() != 1) return false;
  }
  return true;
}

}  // namespace fp_poly

FiniteField::FiniteField(std::uint32_t p, std::uint32_t k, fp_poly::Poly poly)
    : p_(p), k_(k), q_(1), poly_(std::move(poly)) {
  for (std::uint32_t i = 0; i < k; ++i) q_ *= p;
  // multiplication table by x on codes, then search for a primitive element
  auto mul_poly = [&](std::uint32_t a, std::uint32_t b) {
    fp_poly::Poly pa = digits(a), pb = digits(b);
    return from_digits(fp_poly::mul_mod(pa, pb, poly_, p_));
  };
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  const auto is_prime_factor_ok = [&](std::uint32_t g) {
    const std::uint32_t n = q_ - 1;
    std::uint32_t m = n;
    for (std::uint32_t d = 2; d <= m; ++d) {
      if (m % d) continue;
      while (m % d == 0) m /= d;
      std::uint64_t e = n / d;
      std::uint32_t r = from_int(1), b = g;
      for (; e; e >>= 1, b = mul_poly(b, b))
        if (e & 1) r = mul_poly(r, b);
      if (r == from_int(1)) return false;
    }
    return true;
  };
  std::uint32_t g = 1;
  if (q_ > 2) {
    for (g = 2; g < q_; ++g)
      if (is_prime_factor_ok(g)) break;
  }
  std::uint32_t cur = from_int(1);
  for (std::uint32_t e = 0; e < q_ - 1; ++e) {
    exp_[e] = cur;
    log_[cur] = e;
    cur = mul_poly(cur, g);
  }
  frob_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) frob_[a] = pow(a, p_);
}

std::vector<std::uint32_t> FiniteField::digits(std::uint32_t a) const {
  std::vector<std::uint32_t> d(k_, 0);
  for (std::uint32_t i = 0; i < k_; ++i, a /= p_) d[i] = a % p_;
  return d;
}

std::uint32_t FiniteField::from_digits(const std::vector<std::uint32_t>& d) const {
  std::uint32_t a = 0;
  for (std::size_t i = std::min<std::size_t>(d.size(), k_); i-- > 0;) a = a * p_ + d[i] % p_;
  return a;
}

std::uint32_t FiniteField::add(std::uint32_t a, std::uint32_t b) const noexcept {
  if (p_ == 2) return a ^ b;
  std::uint32_t r = 0, scale = 1;
  while (a || b) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

std::uint32_t FiniteField::neg(std::uint32_t a) const noexcept {
  if (p_ == 2) return a;
  std::uint32_t r = 0, scale = 1;
  while (a) {
    r += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return r;
}

std::uint32_t FiniteField::sub(std::uint32_t a, std::uint32_t b) const noexcept { return add(a, neg(b)); }

std::uint32_t FiniteField::inv(std::uint32_t a) const {
  if (a == 0) throw Error(ErrorKind::ZeroInput, "inverse of zero in " + name());
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::uint32_t FiniteField::pow(std::uint32_t a, std::uint64_t e) const noexcept {
  if (e == 0) return from_int(1);
  if (a == 0) return 0;
  return exp_[(std::uint64_t(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
}

std::uint32_t FiniteField::from_int(long long n) const noexcept {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint32_t>(r);
}

std::string FiniteField::name() const {
  return k_ == 1 ? "F_" + std::to_string(p_) : "F_{" + std::to_string(p_) + "^" + std::to_string(k_) + "}";
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FieldPtr make_field(std::uint32_t p, std::uint32_t k, std::optional<fp_poly::Poly> poly) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p));
  if (k == 0) throw Error(ErrorKind::NotIrreducible, "degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxFieldSize) throw Error(ErrorKind::FieldTooLarge, std::to_string(p) + "^" + std::to_string(k));
  }
  if (poly) {
    fp_poly::Poly f = *poly;
    for (auto& c : f) c %= p;
    fp_poly::trim(f);
    if (f.size() != k + 1 || f.back() != 1)
      throw Error(ErrorKind::NotIrreducible, "defining polynomial must be monic of degree " + std::to_string(k));
    if (!fp_poly::is_irreducible(f, p)) throw Error(ErrorKind::NotIrreducible, "polynomial is reducible");
    poly = std::move(f);
  } else {
    for (std::uint64_t m = 0; m < q; ++m) {
      fp_poly::Poly f(k + 1, 0);
      std::uint64_t t = m;
      for (std::uint32_t i = 0; i < k; ++i, t /= p) f[i] = static_cast<std::uint32_t>(t % p);
      f[k] = 1;
      if (fp_poly::is_irreducible(f, p)) {
        poly = std::move(f);
        break;
      }
    }
  }
  static std::map<std::tuple<std::uint32_t, fp_poly::Poly>, std::unique_ptr<FiniteField>> registry;
  std::lock_guard lock(registry_mutex());
  auto key = std::make_tuple(p, *poly);
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::unique_ptr<FiniteField>(new FiniteField(p, k, *poly))).first;
  return it->second.get();
}

void check_same_field(const FqElem& a, const FqElem& b) {
  if (a.field != b.field)
    throw Error(ErrorKind::FieldMismatch, a.field->name() + " vs " + b.field->name());
}

FqElem operator+(const FqElem& a, const FqElem& b) {
  check_same_field(a, b);
  return {a.field, a.field->add(a.v, b.v)};
}
FqElem operator-(const FqElem& a, const FqElem& b) {
  check_same_field(a, b);
  return {a.field, a.field->sub(a.v, b.v)};
}
FqElem operator-(const FqElem& a) { return {a.field, a.field->neg(a.v)}; }
FqElem operator*(const FqElem& a, const FqElem& b) {
  check_same_field(a, b);
  return {a.field, a.field->mul(a.v, b.v)};
}
FqElem inverse(const FqElem& a) { return {a.field, a.field->inv(a.v)}; }
FqElem operator/(const FqElem& a, const FqElem& b) { return a * inverse(b); }
FqElem pow(const FqElem& a, std::uint64_t e) { return {a.field, a.field->pow(a.v, e)}; }
FqElem frobenius(const FqElem& a) { return {a.field, a.field->frob(a.v)}; }

Embedding::Embedding(FieldPtr src, FieldPtr dst, std::uint32_t gen_image)
    : src_(src), dst_(dst), gen_image_(gen_image), table_(src->size()), inverse_(dst->size(), -1) {
  std::vector<std::uint32_t> powers(src->degree());
  std::uint32_t cur = dst->from_int(1);
  for (auto& pw : powers) {
    pw = cur;
    cur = dst->mul(cur, gen_image);
  }
  for (std::uint32_t a = 0; a < src->size(); ++a) {
    const auto d = src->digits(a);
    std::uint32_t img = 0;
    for (std::size_t i = 0; i < d.size(); ++i) img = dst->add(img, dst->mul(dst->from_int(d[i]), powers[i]));
    table_[a] = img;
    inverse_[img] = a;
  }
}

FqElem Embedding::operator()(const FqElem& x) const {
  if (x.field != src_) throw Error(ErrorKind::FieldMismatch, "embedding source is " + src_->name());
  return {dst_, table_[x.v]};
}

std::optional<FqElem> Embedding::preimage(const FqElem& y) const {
  if (y.field != dst_) throw Error(ErrorKind::FieldMismatch, "embedding target is " + dst_->name());
  if (inverse_[y.v] < 0) return std::nullopt;
  return FqElem{src_, static_cast<std::uint32_t>(inverse_[y.v])};
}

const Embedding& embedding(FieldPtr source, FieldPtr target) {
  if (source->p() != target->p() || target->degree() % source->degree() != 0)
    throw Error(ErrorKind::NotASubfield, source->name() + " does not embed in " + target->name());
  static std::map<std::pair<FieldPtr, FieldPtr>, std::unique_ptr<Embedding>> cache;
  {
    std::lock_guard lock(registry_mutex());
    if (auto it = cache.find({source, target}); it != cache.end()) return *it->second;
  }
  const auto& f = source->defining_poly();
  std::uint32_t root = 0;
  bool found = false;
  for (std::uint32_t x = 0; x < target->size() && !found; ++x) {
    std::uint32_t acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = target->add(target->mul(acc, x), target->from_int(f[i]));
    if (acc == 0) {
      root = x;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::NotASubfield, "no root of defining polynomial");
  auto emb = std::unique_ptr<Embedding>(new Embedding(source, target, root));
  std::lock_guard lock(registry_mutex());
  auto [it, inserted] = cache.emplace(std::make_pair(source, target), std::move(emb));
  return *it->second;
}

FqElem trace(const FqElem& x, FieldPtr sub) {
  const auto& e = embedding(sub, x.field);
  const std::uint32_t m = x.field->degree() / sub->degree();
  const std::uint64_t qs = sub->size();
  std::uint32_t acc = 0, cur = x.v;
  for (std::uint32_t i = 0; i < m; ++i) {
    acc = x.field->add(acc, cur);
    cur = x.field->pow(cur, qs);
  }
  auto r = e.preimage({x.field, acc});
  if (!r) throw Error(ErrorKind::NotASubfield, "trace left the subfield");
  return *r;
}

FqElem norm(const FqElem& x, FieldPtr sub) {
  const auto& e = embedding(sub, x.field);
  const std::uint32_t m = x.field->degree() / sub->degree();
  const std::uint64_t qs = sub->size();
  std::uint32_t acc = x.field->from_int(1), cur = x.v;
  for (std::uint32_t i = 0; i < m; ++i) {
    acc = x.field->mul(acc, cur);
    cur = x.field->pow(cur, qs);
  }
  auto r = e.preimage({x.field, acc});
  if (!r) throw Error(ErrorKind::NotASubfield, "norm left the subfield");
  return *r;
}

std::vector<FqElem> elements(FieldPtr f) {
  std::vector<FqElem> out;
  out.reserve(f->size());
  for (std::uint32_t a = 0; a < f->size(); ++a) out.push_back({f, a});
  return out;
}

std::string to_string(const FqElem& x) {
  if (x.field->is_prime_field()) return std::to_string(x.v);
  std::ostringstream os;
  os << "⟨";
  const auto d = x.coeffs();
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << "⟩";
  return os.str();
}

}  // namespace kato
