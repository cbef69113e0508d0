#include "kato/presentation.hpp"

#include <algorithm>

#include "kato/error.hpp"

namespace kato {

ZModPr::ZModPr(std::uint32_t p, std::uint32_t r) : p_(p), r_(r), n_(1) {
  if (r == 0) throw Error(ErrorKind::LengthMismatch, "Z/p^r needs r >= 1");
  pw_.push_back(1);
  for (std::uint32_t i = 0; i < r; ++i) {
    n_ *= p;
    pw_.push_back(n_);
  }
}

std::uint64_t ZModPr::reduce(long long x) const noexcept {
  const long long n = static_cast<long long>(n_);
  return static_cast<std::uint64_t>(((x % n) + n) % n);
}

std::uint32_t ZModPr::val(std::uint64_t a) const noexcept {
  a %= n_;
  if (a == 0) return r_;
  std::uint32_t k = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++k;
  }
  return k;
}

std::uint64_t ZModPr::unit_inverse(std::uint64_t u) const {
  u %= n_;
  if (u % p_ == 0) throw Error(ErrorKind::ZeroInput, "inverse of a non-unit in Z/p^r");
  for (std::uint64_t x = 1; x < n_; ++x)
    if ((u * x) % n_ == 1) return x;
  return 1;  // n_ == 1 never happens since r >= 1
}

namespace {

void axpy(const ZModPr& R, ZVec& y, std::uint64_t a, const ZVec& x) {
  if (a == 0) return;
  const std::uint64_t n = R.modulus();
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i]) y[i] = (y[i] + n - (a * x[i]) % n) % n;
}

void scale(const ZModPr& R, ZVec& y, std::uint64_t a) {
  for (auto& e : y) e = R.mul(e, a);
}

bool all_zero(const ZVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
}

}  // namespace

HowellBasis::HowellBasis(ZModPr ring, std::size_t ncols) : ring_(ring), ncols_(ncols), pivot_(ncols) {}

bool HowellBasis::insert(ZVec v) {
  if (v.size() != ncols_) throw Error(ErrorKind::LengthMismatch, "row width differs from module rank");
  for (auto& e : v) e %= ring_.modulus();
  bool grew = false;
  std::vector<ZVec> work{std::move(v)};
  while (!work.empty()) {
    ZVec w = std::move(work.back());
    work.pop_back();
    for (std::size_t c = 0; c < ncols_; ++c) {
      if (w[c] == 0) continue;
      const std::uint32_t vw = ring_.val(w[c]);
      auto& slot = pivot_[c];
      if (slot) {
        const std::uint32_t k = ring_.val((*slot)[c]);
        if (vw >= k) {
          axpy(ring_, w, w[c] / ring_.p_pow(k), *slot);
          continue;
        }
      }
      // w becomes the pivot row at column c
      scale(ring_, w, ring_.unit_inverse(w[c] / ring_.p_pow(vw)));
      if (slot) {
        ZVec old = std::move(*slot);
        axpy(ring_, old, old[c] / ring_.p_pow(vw), w);
        work.push_back(std::move(old));
      }
      if (vw > 0) {
        ZVec annihilated = w;
        scale(ring_, annihilated, ring_.p_pow(ring_.r() - vw));
        work.push_back(std::move(annihilated));
      }
      slot = std::move(w);
      grew = true;
      break;
    }
  }
  return grew;
}

ZVec HowellBasis::reduce(ZVec v) const {
  for (auto& e : v) e %= ring_.modulus();
  for (std::size_t c = 0; c < ncols_; ++c) {
    if (v[c] == 0 || !pivot_[c]) continue;
    const std::uint32_t k = ring_.val((*pivot_[c])[c]);
    if (ring_.val(v[c]) < k) continue;
    axpy(ring_, v, v[c] / ring_.p_pow(k), *pivot_[c]);
  }
  return v;
}

bool HowellBasis::contains(const ZVec& v) const {
  if (v.size() != ncols_) throw Error(ErrorKind::LengthMismatch, "vector width differs from module rank");
  return all_zero(reduce(v));
}

std::uint64_t HowellBasis::span_log_order() const {
  std::uint64_t s = 0;
  for (std::size_t c = 0; c < ncols_; ++c)
    if (pivot_[c]) s += ring_.r() - ring_.val((*pivot_[c])[c]);
  return s;
}

std::vector<ZVec> HowellBasis::rows() const {
  std::vector<ZVec> out;
  for (const auto& r : pivot_)
    if (r) out.push_back(*r);
  return out;
}

std::vector<std::uint32_t> cokernel_invariants(const ZModPr& R, std::vector<ZVec> m, std::size_t ncols) {
  const std::size_t nrows = m.size();
  std::vector<std::uint32_t> out;
  std::size_t t = 0;
  for (; t < std::min(nrows, ncols); ++t) {
    std::uint32_t best = R.r();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < nrows && best > 0; ++i)
      for (std::size_t j = t; j < ncols; ++j)
        if (m[i][j] && R.val(m[i][j]) < best) {
          best = R.val(m[i][j]);
          bi = i;
          bj = j;
          if (best == 0) break;
        }
    if (best == R.r()) break;
    std::swap(m[t], m[bi]);
    for (auto& row : m) std::swap(row[t], row[bj]);
    scale(R, m[t], R.unit_inverse(m[t][t] / R.p_pow(best)));
    const std::uint64_t piv = R.p_pow(best);
    for (std::size_t i = 0; i < nrows; ++i)
      if (i != t && m[i][t]) axpy(R, m[i], m[i][t] / piv, m[t]);
    // column operations only touch row t once the column is cleared
    for (std::size_t j = t + 1; j < ncols; ++j) m[t][j] = 0;
    if (best > 0) out.push_back(best);
  }
  for (std::size_t j = t; j < ncols; ++j) out.push_back(R.r());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ZVec> left_kernel(const ZModPr& R, const std::vector<ZVec>& rows, std::size_t ncols) {
  const std::size_t m = rows.size();
  HowellBasis hb(R, ncols + m);
  for (std::size_t i = 0; i < m; ++i) {
    ZVec aug(ncols + m, 0);
    std::copy(rows[i].begin(), rows[i].end(), aug.begin());
    aug[ncols + i] = 1;
    hb.insert(std::move(aug));
  }
  std::vector<ZVec> out;
  for (const auto& row : hb.rows()) {
    if (!std::all_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(ncols), [](auto x) { return x == 0; }))
      continue;
    out.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(ncols), row.end());
  }
  return out;
}

GroupPresentation::GroupPresentation(std::uint32_t p, std::uint32_t r, std::vector<std::string> generators)
    : generators_(std::move(generators)), basis_(ZModPr(p, r), generators_.size()) {}

std::size_t GroupPresentation::add_generator(std::string label) {
  if (!relations_.empty()) throw Error(ErrorKind::LengthMismatch, "generators must precede relations");
  generators_.push_back(std::move(label));
  basis_ = HowellBasis(basis_.ring(), generators_.size());
  return generators_.size() - 1;
}

bool GroupPresentation::add_relation(const ZVec& row) {
  if (row.size() != generators_.size()) throw Error(ErrorKind::LengthMismatch, "relation width");
  ZVec r = row;
  for (auto& e : r) e %= ring().modulus();
  if (all_zero(r) || !basis_.insert(r)) return false;
  relations_.push_back(std::move(r));
  return true;
}

std::uint64_t GroupPresentation::log_order() const {
  return ring().r() * generators_.size() - basis_.span_log_order();
}

std::uint64_t GroupPresentation::order() const {
  const std::uint64_t e = log_order();
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (n > UINT64_MAX / ring().p()) throw Error(ErrorKind::TooLarge, "group order exceeds 64 bits");
    n *= ring().p();
  }
  return n;
}

std::vector<std::uint32_t> GroupPresentation::invariant_factors() const {
  return cokernel_invariants(ring(), basis_.rows(), generators_.size());
}

ZVec GroupPresentation::unit_vector(std::size_t i) const {
  ZVec v(generators_.size(), 0);
  v.at(i) = 1;
  return v;
}

}  // namespace kato
