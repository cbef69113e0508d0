#include "kato/suites.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <random>
#include <thread>

#include "kato/error.hpp"
#include "kato/forms.hpp"
#include "kato/kato_complex.hpp"
#include "kato/kato_groups.hpp"
#include "kato/mackey.hpp"
#include "kato/milnor.hpp"
#include "kato/witt.hpp"

namespace kato {

using json = nlohmann::ordered_json;

void SuiteResult::record(bool ok, std::uint64_t weight) {
  checks += weight;
  if (!ok) {
    ++failures;
    pass = false;
  }
}

json SuiteResult::to_json() const {
  return json{{"name", name}, {"pass", pass}, {"checks", checks}, {"failures", failures}, {"detail", detail}};
}

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// f dt = d(P/M) for M = den f, solved as P'M - PM' = N M over F_q with
// deg P <= max(deg M, deg N + 1).
bool integrable(const DiffForm& w) {
  if (w.is_zero()) return true;
  const FieldPtr k = w.field();
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
  std::vector<std::vector<FqElem>> a(static_cast<std::size_t>(rows), std::vector<FqElem>(cols.size() + 1, FqElem::zero(k)));
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

// N/M with deg N, deg M <= deg, M monic, N nonzero
RatFunc random_rat(std::mt19937_64& rng, FieldPtr k, int deg) {
  std::uniform_int_distribution<std::uint32_t> c(0, k->size() - 1);
  std::uniform_int_distribution<int> dd(0, deg);
  while (true) {
    const int dn = dd(rng), dm = dd(rng);
    std::vector<std::uint32_t> n, m;
    for (int i = 0; i <= dn; ++i) n.push_back(c(rng));
    for (int i = 0; i < dm; ++i) m.push_back(c(rng));
    m.push_back(1);
    Poly num(k, n);
    if (!num.is_zero()) return RatFunc(num, Poly(k, m));
  }
}

}  // namespace

SuiteResult suite_witt_ring() {
  SuiteResult res{"witt_ring"};
  json cases = json::array();
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint32_t k = 1; ipow(p, k) <= 256; ++k)
      for (std::uint32_t r = 1; r <= kMaxWittLength && ipow(p, k * r) <= 256; ++r) {
        if (ipow(p, r - 1) > 64) continue;
        const FieldPtr f = make_field(p, k);
        const std::uint64_t n = ipow(f->size(), r);
        std::vector<std::uint32_t> add_t(n * n), mul_t(n * n), neg_t(n);
        std::vector<WittFq> all;
        for (std::uint64_t i = 0; i < n; ++i) all.push_back(witt_from_index(i, f, r));
        for (std::uint64_t i = 0; i < n; ++i) {
          neg_t[i] = static_cast<std::uint32_t>(witt_index(neg(all[i])));
          for (std::uint64_t j = 0; j < n; ++j) {
            add_t[i * n + j] = static_cast<std::uint32_t>(witt_index(add(all[i], all[j])));
            mul_t[i * n + j] = static_cast<std::uint32_t>(witt_index(mul(all[i], all[j])));
          }
        }
        const std::uint64_t one = witt_index(WittFq::one(f, r));
        std::uint64_t bad = 0;
        for (std::uint64_t a = 0; a < n; ++a) {
          bad += add_t[a * n] != a;
          bad += mul_t[a * n + one] != a;
          bad += add_t[a * n + neg_t[a]] != 0;
          for (std::uint64_t b = 0; b < n; ++b) {
            bad += add_t[a * n + b] != add_t[b * n + a];
            bad += mul_t[a * n + b] != mul_t[b * n + a];
            for (std::uint64_t c = 0; c < n; ++c) {
              bad += add_t[add_t[a * n + b] * n + c] != add_t[a * n + add_t[b * n + c]];
              bad += mul_t[mul_t[a * n + b] * n + c] != mul_t[a * n + mul_t[b * n + c]];
              bad += mul_t[a * n + add_t[b * n + c]] != add_t[mul_t[a * n + b] * n + mul_t[a * n + c]];
            }
          }
        }
        res.record(bad == 0, 3 * n + 2 * n * n + 3 * n * n * n);
        cases.push_back({{"field", f->name()}, {"r", r}, {"elements", n}, {"failures", bad}});
      }
  res.detail["axioms"] = cases;

  // ghost components of integer lifts: w_i = sum_j p^j x_j^{p^{i-j}} mod p^{i+1}
  json ghost = json::array();
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const FieldPtr f = make_field(p, 1);
    for (std::uint32_t r = 1; r <= 3; ++r) {
      const std::uint64_t n = ipow(p, r);
      auto w = [&](const WittFq& x, std::uint32_t i) {
        const std::uint64_t M = ipow(p, i + 1);
        std::uint64_t s = 0;
        for (std::uint32_t j = 0; j <= i; ++j) {
          std::uint64_t v = 1;
          for (std::uint64_t e = 0; e < ipow(p, i - j); ++e) v = v * x[j].v % M;
          s = (s + ipow(p, j) * v) % M;
        }
        return s;
      };
      std::uint64_t bad = 0;
      for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b) {
          const WittFq x = witt_from_index(a, f, r), y = witt_from_index(b, f, r);
          const WittFq s = add(x, y), m = mul(x, y), ng = neg(x);
          for (std::uint32_t i = 0; i < r; ++i) {
            const std::uint64_t M = ipow(p, i + 1);
            bad += w(s, i) != (w(x, i) + w(y, i)) % M;
            bad += w(m, i) != w(x, i) * w(y, i) % M;
            bad += w(ng, i) != (M - w(x, i)) % M;
          }
        }
      res.record(bad == 0, 3 * n * n * r);
      ghost.push_back({{"p", p}, {"r", r}, {"failures", bad}});
    }
  }
  res.detail["ghost"] = ghost;
  return res;
}

SuiteResult suite_coker_wp() {
  SuiteResult res{"coker_wp"};
  json cases = json::array();
  for (std::uint32_t p : {2u, 3u})
    for (std::uint32_t k = 1; k <= 3; ++k)
      for (std::uint32_t r = 1; r <= 3; ++r) {
        const FieldPtr f = make_field(p, k);
        const CokerWp c = coker_wp(f, r);
        const std::uint64_t order = c.group.order();
        const bool ok = order == ipow(p, r) && c.group.invariant_factors().size() == 1 && witt_invariant(c.distinguished) % p != 0;
        res.record(ok);
        cases.push_back({{"field", f->name()}, {"r", r}, {"order", order}, {"invariant_factors", c.group.invariant_factors()}});
      }
  res.detail["cases"] = cases;
  return res;
}

SuiteResult suite_weil(std::uint64_t seed) {
  SuiteResult res{"weil"};
  std::mt19937_64 rng(seed);
  json cases = json::array();
  for (FieldPtr k : {make_field(2, 1), make_field(3, 1)}) {
    std::uint64_t bad = 0, nontrivial = 0;
    for (int i = 0; i < 200; ++i) {
      const MilnorRat s = MilnorRat::single({random_rat(rng, k, 4), random_rat(rng, k, 4)});
      const WeilReport w = weil_check(s, 4);
      bad += !w.ok;
      nontrivial += !w.residues.empty();
      res.record(w.ok);
    }
    std::uint64_t lin_bad = 0, lin = 0;
    for (const auto& a : elements(k))
      for (const auto& b : elements(k)) {
        const bool ok = weil_check(MilnorRat::single({RatFunc(Poly::linear(a)), RatFunc(Poly::linear(b))}), 1).ok;
        lin_bad += !ok;
        ++lin;
        res.record(ok);
      }
    cases.push_back({{"field", k->name()}, {"random", 200}, {"random_failures", bad}, {"random_nontrivial", nontrivial},
                     {"linear_pairs", lin}, {"linear_failures", lin_bad}});
  }
  res.detail["cases"] = cases;
  return res;
}

SuiteResult suite_cartier(std::uint64_t seed) {
  SuiteResult res{"cartier"};
  std::mt19937_64 rng(seed);
  json inverse_cases = json::array();
  for (FieldPtr k : {make_field(2, 1), make_field(3, 1), make_field(2, 2)}) {
    std::uint64_t bad = 0;
    for (const auto& w : form_pool(k, 2)) bad += !(cartier(inv_cartier(w)) == w);
    for (int i = 0; i < 200; ++i) {
      const DiffForm w = DiffForm::one_form(random_rat(rng, k, 4));
      bad += !(cartier(inv_cartier(w)) == w);
    }
    res.record(bad == 0);
    inverse_cases.push_back({{"field", k->name()}, {"failures", bad}});
  }
  res.detail["c_cinv_identity"] = inverse_cases;

  json kernel_cases = json::array();
  for (auto [p, e, D] : {std::tuple{2u, 1u, 4}, {3u, 1u, 2}, {2u, 2u, 2}}) {
    const FieldPtr k = make_field(p, e);
    std::uint64_t exact = 0, mism = 0, total = 0;
    for (const auto& w : form_pool(k, D)) {
      const bool ex = integrable(w);
      exact += ex;
      mism += ex != is_exact(w);
      ++total;
    }
    res.record(mism == 0 && exact > 0, total);
    kernel_cases.push_back({{"field", k->name()}, {"D", D}, {"forms", total}, {"exact", exact}, {"mismatches", mism}});
  }
  res.detail["kernel_is_exact"] = kernel_cases;

  json surj = json::array();
  for (auto [p, D] : {std::pair{2u, 4}, {3u, 2}}) {
    const WpSurjectivityReport r = wp_surjective_on_Binf(make_field(p, 1), 3, D);
    res.record(r.ok && r.in_binf > 0, r.checked);
    surj.push_back({{"field", make_field(p, 1)->name()}, {"level", 3}, {"D", D}, {"checked", r.checked}, {"in_binf", r.in_binf},
                    {"failures", r.failures}});
  }
  res.detail["wp_onto_binf_mod_b1"] = surj;
  return res;
}

SuiteResult suite_presentation() {
  SuiteResult res{"presentation"};
  const FieldPtr f2 = make_field(2, 1);
  json rel_cases = json::array();
  for (std::uint32_t r : {1u, 2u})
    for (auto [n, D] : {std::pair{1, 2}, {2, 1}}) {
      const auto rels = relation_instances(make_pool(f2, r, n, D));
      std::uint64_t bad = 0;
      std::map<std::string, std::uint64_t> kinds;
      for (const auto& rel : rels) {
        const bool ok = invariant_vector(rel.symbols).is_zero();
        bad += !ok;
        res.record(ok);
        static const char* names[] = {"repeated", "diagonal", "wp", "multiplicative"};
        ++kinds[names[static_cast<int>(rel.kind)]];
      }
      rel_cases.push_back({{"r", r}, {"n", n}, {"D", D}, {"instances", rels.size()}, {"kinds", kinds}, {"failures", bad}});
    }
  res.detail["relations"] = rel_cases;

  json pf_cases = json::array();
  for (std::uint32_t r : {1u, 2u}) {
    const auto inst = pf_instances_rat(make_lattice(f2, 2, true), r);
    std::uint64_t bad = 0;
    for (const auto& pf : inst) {
      const bool ok = extended_symbol(pf.lower) == extended_symbol(pf.upper);
      bad += !ok;
      res.record(ok);
    }
    res.record(!inst.empty());
    pf_cases.push_back({{"r", r}, {"lattice_bound", 2}, {"instances", inst.size()}, {"failures", bad}});
  }
  res.detail["projection_formula"] = pf_cases;
  return res;
}

SuiteResult suite_finite_theorem() {
  SuiteResult res{"finite_theorem"};
  json cases = json::array();
  for (auto [p, k, r, D] : {std::tuple{2u, 1u, 1u, 2}, {2u, 1u, 2u, 2}, {3u, 1u, 1u, 1}, {2u, 2u, 1u, 1}}) {
    const FiniteTheoremReport rep = verify_finite_theorem(make_field(p, k), r, D);
    json checks = json::array();
    for (const auto& c : rep.checks) {
      res.record(c.pass);
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    }
    res.record(rep.kh0_order == ipow(p, r));
    cases.push_back({{"q", rep.q},
                     {"r", r},
                     {"D", D},
                     {"pool_size", rep.pool_size},
                     {"deg0_log_order", rep.deg0_rank},
                     {"kh0_order", rep.kh0_order},
                     {"kh0_invariant_factors", rep.kh0_invariant_factors},
                     {"f_star_surjective", rep.f_star_surjective},
                     {"kernel_log_order", rep.kernel_dim_at_truncation},
                     {"checks", checks}});
  }
  res.detail["cases"] = cases;
  return res;
}

SuiteResult suite_hbn(std::uint64_t seed) {
  SuiteResult res{"hbn"};
  json cases = json::array();
  const FieldPtr f2 = make_field(2, 1);
  // r = 1: even samples are tame, odd ones carry a rational a (Schmid cases)
  struct Run {
    std::uint32_t r;
    std::size_t samples, probes;
  };
  for (const Run run : {Run{1, 200, 20}, Run{2, 100, 0}}) {
    const HbnReport rep = hbn_check(f2, run.r, 2, seed, run.samples, run.probes);
    res.record(rep.sum_failures == 0, rep.samples);
    res.record(rep.pair_witness);
    res.record(rep.probe_failures == 0 && rep.probes == run.probes, rep.probes);
    if (run.r == 1) res.record(rep.wild_samples > 0);
    cases.push_back({{"field", f2->name()},
                     {"r", run.r},
                     {"D", 2},
                     {"samples", rep.samples},
                     {"sum_failures", rep.sum_failures},
                     {"wild_samples", rep.wild_samples},
                     {"pair_witness", rep.pair_witness},
                     {"probes", rep.probes},
                     {"probe_failures", rep.probe_failures}});
  }
  res.detail["cases"] = cases;
  return res;
}

SuiteResult suite_mackey() {
  SuiteResult res{"mackey"};
  json cases = json::array();
  for (auto [p, k] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}})
    for (std::uint32_t r : {1u, 2u}) {
      const FieldPtr f = make_field(p, k);
      json orders = json::array();
      std::uint64_t prev = ~0ull;
      bool monotone = true;
      for (int b = 1; b <= 4; ++b) {
        const MackeyGroupTruncation g = mackey_group(make_lattice(f, b), 1, r, false);
        const std::uint64_t lo = g.group.log_order();
        monotone = monotone && lo <= prev;
        prev = lo;
        orders.push_back(lo);
      }
      res.record(monotone);
      res.record(prev == 0);
      cases.push_back({{"field", f->name()}, {"r", r}, {"log_orders_by_bound", orders}, {"trivial_at_bound_4", prev == 0}});
    }
  res.detail["cases"] = cases;
  return res;
}

SuiteResult suite_dsm(std::uint64_t seed) {
  SuiteResult res{"dsm"};
  const FieldPtr f2 = make_field(2, 1);
  const DlogKernelReport dk = dlog_kernel_check(f2, 2);
  res.record(dk.ok, dk.checked);
  res.detail["dlog_kernel"] = {{"field", f2->name()}, {"D", 2}, {"checked", dk.checked}, {"pth_powers", dk.pth_powers}, {"ok", dk.ok}};
  const DsmReport ds = dsm_check(f2, 2, seed, 100);
  res.record(ds.ok && ds.samples == 100, ds.samples);
  res.detail["routes"] = {{"field", f2->name()}, {"D", 2}, {"samples", ds.samples}, {"failures", ds.failures}};
  return res;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"witt_ring", "coker_wp", "weil",  "cartier", "presentation",
                                              "finite_theorem", "hbn", "mackey", "dsm"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "witt_ring") return suite_witt_ring();
  if (name == "coker_wp") return suite_coker_wp();
  if (name == "weil") return suite_weil(seed);
  if (name == "cartier") return suite_cartier(seed);
  if (name == "presentation") return suite_presentation();
  if (name == "finite_theorem") return suite_finite_theorem();
  if (name == "hbn") return suite_hbn(seed);
  if (name == "mackey") return suite_mackey();
  if (name == "dsm") return suite_dsm(seed);
  throw Error(ErrorKind::ConfigError, "unknown suite " + name);
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, std::uint64_t seed, unsigned jobs) {
  for (const auto& n : names)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw Error(ErrorKind::ConfigError, "unknown suite " + n);
  std::vector<SuiteResult> out(names.size());
  std::vector<std::exception_ptr> errors(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < names.size();) {
      try {
        out[i] = run_suite(names[i], seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(names.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace kato
