#include "kato/kato_complex.hpp"

#include <algorithm>

#include "kato/forms.hpp"
#include "kato/witt.hpp"

namespace kato {

namespace {

FqElem basis_elem(FieldPtr f, std::uint32_t j) { return {f, f->pow(f->generator(), j)}; }

std::uint64_t mod_pr(std::uint32_t p, std::uint32_t r) {
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < r; ++i) m *= p;
  return m;
}

std::vector<RatFunc> multiplicative_pool(FieldPtr f, int D) {
  std::vector<RatFunc> out;
  if (f->size() > 2) out.push_back(RatFunc::constant(FqElem{f, f->primitive()}));
  for (int d = 1; d <= D; ++d)
    for (const auto& pi : monic_irreducibles(f, d)) out.push_back(RatFunc(pi));
  const auto el = elements(f);
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = i + 1; j < el.size(); ++j) out.push_back(RatFunc(Poly::linear(el[i]), Poly::linear(el[j])));
  return out;
}

// polynomials c_0 + ... + c_d t^d, nonzero, d <= bound
std::vector<RatFunc> polynomial_pool(FieldPtr f, int bound) {
  std::vector<RatFunc> out;
  const std::uint32_t q = f->size();
  std::uint64_t count = 1;
  for (int i = 0; i <= bound; ++i) count *= q;
  if (count > 4096) throw Error(ErrorKind::TooLarge, "symbol pool too large");
  for (std::uint64_t c = 1; c < count; ++c) {
    std::vector<std::uint32_t> co;
    for (std::uint64_t x = c; x; x /= q) co.push_back(static_cast<std::uint32_t>(x % q));
    out.push_back(RatFunc(Poly(f, co)));
  }
  return out;
}

}  // namespace

ZVec deg0_vector(const KatoComplexP1& c, std::size_t i, const WittFq& x) {
  ZVec out(c.deg0_generators, 0);
  const ZVec w = witt_coordinates(x);
  std::copy(w.begin(), w.end(), out.begin() + static_cast<std::ptrdiff_t>(c.offsets[i]));
  return out;
}

KatoComplexP1 build_complex(FieldPtr f, std::uint32_t r, int D, int symbol_bound) {
  if (D < 1) throw Error(ErrorKind::BoundTooSmall, "complex needs D >= 1");
  if (symbol_bound < 0) throw Error(ErrorKind::BoundTooSmall, "negative symbol bound");
  KatoComplexP1 c;
  c.field = f;
  c.r = r;
  c.D = D;
  c.symbol_bound = symbol_bound;
  c.places = enumerate_places(f, D);
  const ZModPr ring(f->p(), r);
  for (const auto& v : c.places) {
    const FieldPtr k = residue_field(v).field;
    const CokerWp cw = coker_wp(k, r);
    c.offsets.push_back(c.deg0_generators);
    c.distinguished.push_back(cw.distinguished);
    c.block_relations.push_back(cw.group.relations());
    for (std::uint32_t j = 0; j < k->degree(); ++j) {
      c.deg0_labels.push_back(cw.group.generators()[j] + "@" + to_string(v));
      c.cor.push_back(witt_invariant(teichmuller(basis_elem(k, j), r)));
    }
    c.deg0_generators += k->degree();
  }

  // base symbols
  std::vector<WittRat> as;
  if (r == 1) {
    for (const auto& a : polynomial_pool(f, symbol_bound)) as.push_back(WittRat({a}));
  } else {
    for (std::uint32_t j = 0; j < f->degree(); ++j) as.push_back(teichmuller(RatFunc::constant(basis_elem(f, j)), r));
  }
  for (const auto& a : as)
    for (const auto& b : multiplicative_pool(f, D)) {
      const KatoSymbol s = make_symbol(a, {b});
      ZVec col(c.deg0_generators, 0);
      for (const auto& v : symbol_support(s))
        if (std::find(c.places.begin(), c.places.end(), v) == c.places.end())
          throw Error(ErrorKind::SupportExceedsBound, to_string(s) + " at " + to_string(v));
      for (std::size_t i = 0; i < c.places.size(); ++i) {
        WittFq res;
        if (r == 1) {
          const DiffForm w = a[0] * dlog(b);
          res = WittFq({residue_dt(w.f, c.places[i])});
        } else {
          res = residue_tame(s, c.places[i]);
        }
        const ZVec add = deg0_vector(c, i, res);
        for (std::size_t j = 0; j < col.size(); ++j) col[j] = ring.add(col[j], add[j]);
      }
      c.pool.push_back({s, nullptr, to_string(s)});
      c.boundary.push_back(std::move(col));
    }

  // corestrictions from constant extensions, needed at r > 1 to reach units
  // at places of degree >= 2
  if (r > 1)
    for (int m = 2; m <= D; ++m) {
      const FieldPtr E = make_field(f->p(), f->degree() * static_cast<std::uint32_t>(m));
      for (const auto& pi : monic_irreducibles(f, m)) {
        const FqElem theta = residue_field(Place::finite(pi)).root;
        if (theta.field != E) throw std::logic_error("residue field is not the constant extension");
        for (std::uint32_t j = 0; j < E->degree(); ++j) {
          const KatoSymbol s = make_symbol(teichmuller(RatFunc::constant(basis_elem(E, j)), r),
                                           {RatFunc::t(E) - RatFunc::constant(theta)});
          const InvariantVector iv = cor_invariants({s}, f);
          ZVec col(c.deg0_generators, 0);
          for (const auto& [v, x] : iv.entries) {
            auto it = std::find(c.places.begin(), c.places.end(), v);
            if (it == c.places.end()) throw Error(ErrorKind::SupportExceedsBound, to_string(v));
            const std::size_t i = static_cast<std::size_t>(it - c.places.begin());
            // the class with invariant x: x / inv(d) times the distinguished generator d
            const std::uint64_t u = ring.unit_inverse(witt_invariant(c.distinguished[i]));
            const ZVec dv = deg0_vector(c, i, c.distinguished[i]);
            const std::uint64_t scale = ring.mul(x, u);
            for (std::size_t k = 0; k < col.size(); ++k) col[k] = ring.add(col[k], ring.mul(scale, dv[k]));
          }
          c.pool.push_back({s, E, "cor_{" + E->name() + "/" + f->name() + "} " + to_string(s)});
          c.boundary.push_back(std::move(col));
        }
      }
    }
  return c;
}

GroupPresentation deg0_group(const KatoComplexP1& c) {
  GroupPresentation g(c.field->p(), c.r, c.deg0_labels);
  for (std::size_t i = 0; i < c.places.size(); ++i)
    for (const auto& rel : c.block_relations[i]) {
      ZVec row(c.deg0_generators, 0);
      std::copy(rel.begin(), rel.end(), row.begin() + static_cast<std::ptrdiff_t>(c.offsets[i]));
      g.add_relation(row);
    }
  return g;
}

GroupPresentation kh0(const KatoComplexP1& c) {
  GroupPresentation g = deg0_group(c);
  for (const auto& col : c.boundary) g.add_relation(col);
  return g;
}

std::uint64_t f_star(const KatoComplexP1& c, const ZVec& z) {
  const ZModPr ring(c.field->p(), c.r);
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < z.size(); ++j) s = ring.add(s, ring.mul(c.cor[j], z[j]));
  return s;
}

bool FiniteTheoremReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.pass; });
}

FiniteTheoremReport verify_finite_theorem(FieldPtr f, std::uint32_t r, int D, int symbol_bound) {
  const KatoComplexP1 c = build_complex(f, r, D, symbol_bound);
  const ZModPr ring(f->p(), r);
  FiniteTheoremReport rep;
  rep.q = f->size();
  rep.r = r;
  rep.D = D;
  rep.pool_size = c.pool.size();
  const GroupPresentation d0 = deg0_group(c);
  rep.deg0_rank = d0.log_order();

  // (i) complex condition
  TheoremCheck c1{"cor_after_boundary_zero", true, ""};
  for (std::size_t i = 0; i < c.pool.size(); ++i)
    if (f_star(c, c.boundary[i]) != 0) {
      c1.pass = false;
      c1.witness = c.pool[i].label;
      break;
    }
  // Cor must also kill the wp relations of every block
  for (std::size_t i = 0; i < c.places.size() && c1.pass; ++i)
    for (const auto& rel : c.block_relations[i]) {
      ZVec row(c.deg0_generators, 0);
      std::copy(rel.begin(), rel.end(), row.begin() + static_cast<std::ptrdiff_t>(c.offsets[i]));
      if (f_star(c, row) != 0) {
        c1.pass = false;
        c1.witness = "wp relation at " + to_string(c.places[i]);
        break;
      }
    }
  rep.checks.push_back(c1);

  // (ii) surjectivity: some deg0 generator maps to a unit
  TheoremCheck c2{"f_star_surjective", false, ""};
  for (std::size_t j = 0; j < c.cor.size(); ++j)
    if (ring.val(c.cor[j]) == 0) {
      c2.pass = true;
      c2.witness = c.deg0_labels[j];
      break;
    }
  rep.f_star_surjective = c2.pass;
  rep.checks.push_back(c2);

  // (iii) exactness at truncation
  const GroupPresentation k = kh0(c);
  TheoremCheck c3{"kernel_in_boundary_image", true, ""};
  std::vector<ZVec> cor_rows;
  for (auto x : c.cor) cor_rows.push_back({x});
  for (const auto& kv : left_kernel(ring, cor_rows, 1))
    if (!k.is_zero(kv)) {
      c3.pass = false;
      for (std::size_t j = 0; j < kv.size(); ++j)
        if (kv[j]) c3.witness += (c3.witness.empty() ? "" : " + ") + std::to_string(kv[j]) + "*" + c.deg0_labels[j];
      break;
    }
  rep.checks.push_back(c3);

  // (iv) order
  rep.kh0_invariant_factors = k.invariant_factors();
  rep.kh0_order = k.order();
  TheoremCheck c4{"kh0_order", rep.kh0_order == mod_pr(f->p(), r), std::to_string(rep.kh0_order)};
  rep.checks.push_back(c4);
  const std::uint64_t lo = k.log_order();
  rep.kernel_dim_at_truncation = rep.f_star_surjective && lo >= r ? lo - r : lo;
  return rep;
}

}  // namespace kato
