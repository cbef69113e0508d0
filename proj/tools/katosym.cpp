// katosym: command-line driver for the Witt, Milnor, Kato and Mackey
// computations and the verification suites.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage, config or
// parse error.

#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kato/kato_complex.hpp"
#include "kato/kato_groups.hpp"
#include "kato/mackey.hpp"
#include "kato/milnor.hpp"
#include "kato/parse.hpp"
#include "kato/suites.hpp"
#include "kato/witt.hpp"

using json = nlohmann::ordered_json;
using namespace kato;

namespace {

constexpr const char* kSchema = "kato-symbol/1";

struct RunConfig {
  std::uint32_t p = 0;  // 0: derived from q
  std::uint32_t q = 2;
  std::uint32_t r = 1;
  int n = 1;
  int D = 2;
  int L = 4;
  std::uint64_t seed = 1;
  std::string format = "json";
  unsigned jobs = 1;
  int symbol_bound = 1;
  std::size_t samples = 100;
  std::size_t probes = 20;
  std::size_t count = 100;
  bool wp_quotient = false;

  FieldPtr field = nullptr;

  json to_json() const {
    return json{{"p", p},         {"q", q},
                {"r", r},         {"n", n},
                {"D", D},         {"L", L},
                {"seed", seed},   {"format", format},
                {"jobs", jobs},   {"symbol_bound", symbol_bound},
                {"samples", samples}, {"probes", probes},
                {"count", count}, {"wp_quotient", wp_quotient}};
  }
};

// A command result: nested JSON, an optional flat table for CSV, and the
// overall verdict.
struct Report {
  json result = json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool pass = true;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

void resolve(RunConfig& c) {
  if (c.q < 2) config_error("q must be at least 2");
  std::uint32_t p = 2;
  while (c.q % p) ++p;
  std::uint32_t k = 0;
  for (std::uint32_t m = c.q; m > 1; m /= p) {
    if (m % p) config_error("q = " + std::to_string(c.q) + " is not a prime power");
    ++k;
  }
  if (c.p != 0 && c.p != p) config_error("q = " + std::to_string(c.q) + " is not a power of p = " + std::to_string(c.p));
  c.p = p;
  if (c.r < 1 || c.r > kMaxWittLength) config_error("r must lie in [1, " + std::to_string(kMaxWittLength) + "]");
  if (c.n < 0) config_error("n must be nonnegative");
  if (c.D < 1) config_error("D must be positive");
  if (c.L < 1) config_error("L must be positive");
  if (c.symbol_bound < 0) config_error("symbol_bound must be nonnegative");
  if (c.format != "json" && c.format != "csv" && c.format != "text") config_error("format must be json, csv or text");
  if (c.jobs < 1) config_error("jobs must be positive");
  c.field = make_field(p, k);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

void flatten(const json& j, const std::string& path, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const std::string& command, const RunConfig& c, const Report& rep, std::ostream& os) {
  if (c.format == "csv") {
    if (rep.csv_header.empty()) config_error("csv output is not available for " + command + "; use json");
    for (std::size_t i = 0; i < rep.csv_header.size(); ++i) os << (i ? "," : "") << csv_escape(rep.csv_header[i]);
    os << "\n";
    for (const auto& row : rep.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
      os << "\n";
    }
    return;
  }
  json out{{"schema", kSchema}, {"command", command}, {"config", c.to_json()}, {"pass", rep.pass}, {"result", rep.result}};
  if (c.format == "json") {
    os << out.dump(2) << "\n";
  } else {
    flatten(out, "", os);
  }
}

RatFunc random_rat(std::mt19937_64& rng, FieldPtr k, int deg) {
  std::uniform_int_distribution<std::uint32_t> coef(0, k->size() - 1);
  std::uniform_int_distribution<int> dd(0, deg);
  while (true) {
    const int dn = dd(rng), dm = dd(rng);
    std::vector<std::uint32_t> num, den;
    for (int i = 0; i <= dn; ++i) num.push_back(coef(rng));
    for (int i = 0; i < dm; ++i) den.push_back(coef(rng));
    den.push_back(1);
    Poly a(k, num);
    if (!a.is_zero()) return RatFunc(a, Poly(k, den));
  }
}

json invariants_json(const InvariantVector& v) {
  json m = json::object();
  for (const auto& [pl, x] : v.entries) m[to_string(pl)] = x;
  return m;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// ---------------------------------------------------------------------------

Report cmd_witt_table(const RunConfig& c) {
  Report rep;
  const FieldPtr f = c.field;
  const CokerWp cw = coker_wp(f, c.r);
  const std::uint64_t n = ipow(f->size(), c.r);
  json coker{{"order", cw.group.order()},
             {"invariant_factors", cw.group.invariant_factors()},
             {"generator", to_string(cw.distinguished)},
             {"generator_invariant", witt_invariant(cw.distinguished)}};
  const bool order_ok = cw.group.order() == ipow(c.p, c.r);
  json checks = json::array({{{"name", "coker_order_is_p^r"}, {"pass", order_ok}}});
  rep.pass = order_ok;
  rep.result["field"] = f->name();
  rep.result["elements"] = n;
  rep.result["coker_wp"] = coker;
  rep.csv_header = {"a", "b", "sum", "product"};
  if (n <= 256) {
    std::vector<WittFq> all;
    json names = json::array();
    for (std::uint64_t i = 0; i < n; ++i) {
      all.push_back(witt_from_index(i, f, c.r));
      names.push_back(to_string(all.back()));
    }
    json add_t = json::array(), mul_t = json::array();
    bool field_tables = true;
    for (std::uint64_t i = 0; i < n; ++i) {
      json ra = json::array(), rm = json::array();
      for (std::uint64_t j = 0; j < n; ++j) {
        const WittFq s = add(all[i], all[j]), m = mul(all[i], all[j]);
        ra.push_back(witt_index(s));
        rm.push_back(witt_index(m));
        rep.csv_rows.push_back({to_string(all[i]), to_string(all[j]), to_string(s), to_string(m)});
        if (c.r == 1) field_tables = field_tables && s[0] == all[i][0] + all[j][0] && m[0] == all[i][0] * all[j][0];
      }
      add_t.push_back(ra);
      mul_t.push_back(rm);
    }
    rep.result["element_names"] = names;
    rep.result["addition"] = add_t;
    rep.result["multiplication"] = mul_t;
    if (c.r == 1) {
      checks.push_back({{"name", "matches_field_tables"}, {"pass", field_tables}});
      rep.pass = rep.pass && field_tables;
    }
  } else {
    rep.result["tables_omitted"] = "more than 256 elements";
  }
  rep.result["checks"] = checks;
  return rep;
}

int entry_degree(const RatFunc& f) { return std::max(f.num().degree(), f.den().degree()); }

Report cmd_weil_check(const RunConfig& c, const std::string& symbol) {
  Report rep;
  rep.csv_header = {"index", "symbol", "ok", "nontrivial_places"};
  auto one = [&](std::size_t idx, const MilnorRat& s, int D) {
    const WeilReport w = weil_check(s, D);
    rep.pass = rep.pass && w.ok;
    json res = json::object();
    for (const auto& [pl, x] : w.residues) res[to_string(pl)] = to_string(x);
    rep.csv_rows.push_back({std::to_string(idx), to_string(s), w.ok ? "true" : "false", std::to_string(w.residues.size())});
    return json{{"symbol", to_string(s)}, {"ok", w.ok}, {"residues", res}, {"norm_product", to_string(w.product)}};
  };
  json samples = json::array();
  if (!symbol.empty()) {
    const MilnorRat s = parse_milnor(symbol, c.field);
    int D = 1;
    for (const auto& [e, coeff] : s.terms())
      for (const auto& x : e) D = std::max(D, entry_degree(x));
    samples.push_back(one(0, s, D));
  } else {
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.count; ++i)
      samples.push_back(one(i, MilnorRat::single({random_rat(rng, c.field, c.D), random_rat(rng, c.field, c.D)}), c.D));
  }
  std::size_t failures = 0;
  for (const auto& s : samples) failures += !s["ok"].get<bool>();
  rep.result["field"] = c.field->name() + "(t)";
  rep.result["samples"] = samples.size();
  rep.result["failures"] = failures;
  rep.result["symbols"] = samples;
  return rep;
}

Report cmd_invariants(const RunConfig& c, const std::string& symbol) {
  Report rep;
  rep.result["field"] = c.field->name() + "(t)";
  if (symbol.empty()) {
    const HbnReport h = hbn_check(c.field, c.r, c.D, c.seed, c.samples, c.r == 1 ? c.probes : 0);
    rep.pass = h.ok();
    rep.result["hbn"] = {{"samples", h.samples},         {"sum_failures", h.sum_failures}, {"wild_samples", h.wild_samples},
                         {"pair_witness", h.pair_witness}, {"probes", h.probes},           {"probe_failures", h.probe_failures}};
    rep.csv_header = {"samples", "sum_failures", "wild_samples", "probes", "probe_failures"};
    rep.csv_rows.push_back({std::to_string(h.samples), std::to_string(h.sum_failures), std::to_string(h.wild_samples),
                            std::to_string(h.probes), std::to_string(h.probe_failures)});
    return rep;
  }
  const KatoSum sum = parse_kato_sum(symbol, c.field);
  for (const auto& s : sum)
    if (s.a.length() != c.r) config_error("symbol has Witt length " + std::to_string(s.a.length()) + " but r = " + std::to_string(c.r));
  const InvariantVector v = invariant_vector(sum);
  json syms = json::array();
  for (const auto& s : sum) syms.push_back(to_string(s));
  rep.result["symbols"] = syms;
  rep.result["modulus"] = v.modulus();
  rep.result["invariants"] = invariants_json(v);
  rep.result["total"] = v.total();
  rep.pass = v.total() == 0;
  rep.result["checks"] = json::array({{{"name", "sum_of_invariants_zero"}, {"pass", rep.pass}}});
  rep.csv_header = {"place", "invariant"};
  for (const auto& [pl, x] : v.entries) rep.csv_rows.push_back({to_string(pl), std::to_string(x)});
  return rep;
}

Report cmd_kh0(const RunConfig& c) {
  Report rep;
  const FiniteTheoremReport t = verify_finite_theorem(c.field, c.r, c.D, c.symbol_bound);
  json checks = json::array();
  for (const auto& ch : t.checks) checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"witness", ch.witness}});
  rep.pass = t.ok();
  rep.result = {{"field", c.field->name() + "(t)"},
                {"pool_size", t.pool_size},
                {"deg0_log_order", t.deg0_rank},
                {"kh0_order", t.kh0_order},
                {"kh0_invariant_factors", t.kh0_invariant_factors},
                {"f_star_surjective", t.f_star_surjective},
                {"kernel_log_order", t.kernel_dim_at_truncation},
                {"checks", checks}};
  rep.csv_header = {"check", "pass", "witness"};
  for (const auto& ch : t.checks) rep.csv_rows.push_back({ch.name, ch.pass ? "true" : "false", ch.witness});
  return rep;
}

Report cmd_mackey_reduce(const RunConfig& c, const std::string& symbol) {
  Report rep;
  if (symbol.empty()) {
    const MackeyGroupTruncation g = mackey_group(make_lattice(c.field, c.L), c.n, c.r, c.wp_quotient);
    rep.result = {{"lattice", make_lattice(c.field, c.L).name(c.field) + " .. " + make_lattice(c.field, c.L).name(make_lattice(c.field, c.L).member(c.L))},
                  {"generators", g.group.generators().size()},
                  {"census", g.census},
                  {"order", g.group.order()},
                  {"log_order", g.group.log_order()},
                  {"invariant_factors", g.group.invariant_factors()}};
    rep.csv_header = {"n", "r", "L", "log_order"};
    rep.csv_rows.push_back({std::to_string(c.n), std::to_string(c.r), std::to_string(c.L), std::to_string(g.group.log_order())});
    return rep;
  }
  const auto parsed = parse_mackey(symbol);
  if (std::holds_alternative<MackeySymbolRat>(parsed)) {
    const MackeySymbolRat& s = std::get<MackeySymbolRat>(parsed);
    const InvariantVector v = extended_symbol(s);
    rep.pass = v.total() == 0;
    rep.result = {{"symbol", to_string(s)},
                  {"extended_symbol", invariants_json(v)},
                  {"total", v.total()},
                  {"checks", json::array({{{"name", "sum_of_invariants_zero"}, {"pass", rep.pass}}})}};
    rep.csv_header = {"place", "invariant"};
    for (const auto& [pl, x] : v.entries) rep.csv_rows.push_back({to_string(pl), std::to_string(x)});
    return rep;
  }
  const MackeySymbol& s = std::get<MackeySymbol>(parsed);
  const int m = static_cast<int>(s.level()->degree() / s.base->degree());
  const FieldLattice L = make_lattice(s.base, std::max(c.L, m));
  const MackeyGroupTruncation g = mackey_group(L, s.weight(), s.a.length(), c.wp_quotient);
  const bool zero = g.group.is_zero(mackey_coordinates(g, s));
  const std::uint64_t ext = extended_symbol(s);
  // a symbol reducing to zero must have vanishing extended symbol
  rep.pass = !zero || ext == 0;
  rep.result = {{"symbol", to_string(s)},
                {"canonical", to_string(canonical(s))},
                {"lattice_bound", L.bound},
                {"truncation_log_order", g.group.log_order()},
                {"reduces_to_zero", zero},
                {"extended_symbol", ext},
                {"checks", json::array({{{"name", "zero_class_has_zero_extended_symbol"}, {"pass", rep.pass}}})}};
  rep.csv_header = {"symbol", "reduces_to_zero", "extended_symbol"};
  rep.csv_rows.push_back({to_string(s), zero ? "true" : "false", std::to_string(ext)});
  return rep;
}

Report cmd_verify(const RunConfig& c, const std::string& suite) {
  Report rep;
  const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  const auto results = run_suites(names, c.seed, c.jobs);
  json arr = json::array();
  rep.csv_header = {"suite", "pass", "checks", "failures"};
  for (const auto& r : results) {
    rep.pass = rep.pass && r.pass;
    arr.push_back(r.to_json());
    rep.csv_rows.push_back({r.name, r.pass ? "true" : "false", std::to_string(r.checks), std::to_string(r.failures)});
  }
  rep.result["suites"] = arr;
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witt vector, Milnor K and Kato symbol computations over finite fields and F_q(t)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  RunConfig c;
  app.add_option("--p", c.p, "characteristic (derived from q when omitted)");
  app.add_option("--q", c.q, "size of the constant field");
  app.add_option("--r", c.r, "Witt length");
  app.add_option("--n", c.n, "symbol weight for Mackey truncations");
  app.add_option("--D", c.D, "degree bound for places and pools");
  app.add_option("--L", c.L, "degree bound of the field lattice");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--format", c.format, "json, csv or text");
  app.add_option("--jobs", c.jobs, "worker threads for verify");
  app.add_option("--symbol-bound,--symbol_bound", c.symbol_bound, "degree bound of the a-slot pool in kh0");
  app.add_option("--samples", c.samples, "random samples for invariants");
  app.add_option("--probes", c.probes, "injectivity probes for invariants at r = 1");
  app.add_option("--count", c.count, "random symbols for weil-check");
  app.add_flag("--wp-quotient,--wp_quotient", c.wp_quotient, "quotient Mackey truncations by wp");

  std::string symbol, suite = "all";
  auto* witt = app.add_subcommand("witt-table", "W_r(F_q) tables and the cokernel of wp");
  auto* weil = app.add_subcommand("weil-check", "Weil reciprocity for weight-2 Milnor symbols over F_q(t)");
  weil->add_option("symbol", symbol, "a symbol {f, g}; random samples when omitted");
  auto* inv = app.add_subcommand("invariants", "local invariants of a Kato symbol over F_q(t)");
  inv->add_option("symbol", symbol, "a symbol <(a0; ...) | b1, ...>; random sum checks when omitted");
  auto* kh = app.add_subcommand("kh0", "homology of the truncated Kato complex of P^1");
  auto* mk = app.add_subcommand("mackey-reduce", "reduce a Mackey symbol in the truncated Mackey product");
  mk->add_option("symbol", symbol, "a symbol {(a); b1, ...}_{E/F}; the truncation itself when omitted");
  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("suite", suite, "suite name or all");
  for (auto* s : {witt, weil, inv, kh, mk, ver}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    resolve(c);
    Report rep;
    std::string command;
    if (*witt) {
      command = "witt-table";
      rep = cmd_witt_table(c);
    } else if (*weil) {
      command = "weil-check";
      rep = cmd_weil_check(c, symbol);
    } else if (*inv) {
      command = "invariants";
      rep = cmd_invariants(c, symbol);
    } else if (*kh) {
      command = "kh0";
      rep = cmd_kh0(c);
    } else if (*mk) {
      command = "mackey-reduce";
      rep = cmd_mackey_reduce(c, symbol);
    } else {
      command = "verify";
      rep = cmd_verify(c, suite);
    }
    std::ostringstream os;
    emit(command, c, rep, os);
    std::cout << os.str();
    return rep.pass ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "katosym: " << e.what() << "\n";
    return 2;
  }
}
