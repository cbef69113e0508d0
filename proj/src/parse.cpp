#include "kato/parse.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "kato/error.hpp"

namespace kato {

namespace {

[[noreturn]] void fail(std::string_view what, std::string_view input) {
  throw Error(ErrorKind::ParseError, std::string(what) + " in \"" + std::string(input) + "\"");
}

// ⟨ and ⟩ become < and >
std::string normalize(std::string_view s) {
  static const std::string lang = "⟨", rang = "⟩";
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, lang.size(), lang) == 0) {
      out += '<';
      i += lang.size();
    } else if (s.compare(i, rang.size(), rang) == 0) {
      out += '>';
      i += rang.size();
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// split at separators outside (), {}, <>
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '{' || c == '<') ++depth;
    if (c == ')' || c == '}' || c == '>') --depth;
    if (depth < 0) fail("unbalanced brackets", s);
    if (c == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) fail("unbalanced brackets", s);
  out.push_back(trim(s.substr(start)));
  return out;
}

long long parse_int(std::string_view s, std::string_view input) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail("expected an integer", input);
  return v;
}

// "c*rest" -> (c, rest); otherwise (1, s)
std::pair<long long, std::string_view> split_coeff(std::string_view s) {
  s = trim(s);
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') ++i;
  const std::size_t digits = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == digits) return {1, s};
  std::size_t j = i;
  while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
  if (j < s.size() && s[j] == '*') return {parse_int(s.substr(0, i), s), trim(s.substr(j + 1))};
  return {1, s};
}

// Recursive descent over F_q(t):
//   expr := ['-'] term (('+'|'-') term)*
//   term := factor (['*'|'/'] factor)*        juxtaposition multiplies
//   factor := '-' factor | primary ['^' int]
//   primary := '(' expr ')' | 't' | 'g' | '<' digits '>' | integer
class ExprParser {
 public:
  ExprParser(std::string_view s, FieldPtr f) : s_(s), f_(f) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'", s_);
    return v;
  }

 private:
  std::string_view s_;
  FieldPtr f_;
  std::size_t i_ = 0;

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool starts_primary() {
    skip();
    if (i_ >= s_.size()) return false;
    const char c = s_[i_];
    return c == '(' || c == 't' || c == 'g' || c == '<' || std::isdigit(static_cast<unsigned char>(c));
  }

  RatFunc expr() {
    RatFunc v = term();
    while (true) {
      if (peek('+')) {
        ++i_;
        v = v + term();
      } else if (peek('-')) {
        ++i_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  RatFunc term() {
    RatFunc v = factor();
    while (true) {
      if (peek('*')) {
        ++i_;
        v = v * factor();
      } else if (peek('/')) {
        ++i_;
        const RatFunc d = factor();
        if (d.is_zero()) fail("division by zero", s_);
        v = v * d.inverse();
      } else if (starts_primary()) {
        v = v * factor();
      } else {
        return v;
      }
    }
  }

  RatFunc factor() {
    if (peek('-')) {
      ++i_;
      return RatFunc(f_) - factor();
    }
    RatFunc v = primary();
    if (peek('^')) {
      ++i_;
      skip();
      std::size_t j = i_;
      if (j < s_.size() && s_[j] == '-') ++j;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      const long long e = parse_int(s_.substr(i_, j - i_), s_);
      i_ = j;
      if (e < 0 && v.is_zero()) fail("negative power of zero", s_);
      v = e < 0 ? pow(v.inverse(), static_cast<std::uint64_t>(-e)) : pow(v, static_cast<std::uint64_t>(e));
    }
    return v;
  }

  RatFunc primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end", s_);
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      RatFunc v = expr();
      if (!peek(')')) fail("expected ')'", s_);
      ++i_;
      return v;
    }
    if (c == 't') {
      ++i_;
      return RatFunc::t(f_);
    }
    if (c == 'g') {
      ++i_;
      return RatFunc::constant(FqElem{f_, f_->generator()});
    }
    if (c == '<') {
      const std::size_t close = s_.find('>', i_);
      if (close == std::string_view::npos) fail("expected '>'", s_);
      const auto parts = split_top(s_.substr(i_ + 1, close - i_ - 1), ',');
      if (parts.size() != f_->degree()) fail("coefficient list needs " + std::to_string(f_->degree()) + " entries", s_);
      std::vector<std::uint32_t> digits;
      for (auto d : parts) {
        const long long x = parse_int(d, s_);
        if (x < 0 || x >= static_cast<long long>(f_->p())) fail("coefficient outside [0, p)", s_);
        digits.push_back(static_cast<std::uint32_t>(x));
      }
      i_ = close + 1;
      std::uint32_t code = 0;
      for (std::size_t k = digits.size(); k-- > 0;) code = code * f_->p() + digits[k];
      return RatFunc::constant(FqElem{f_, code});
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t j0 = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return RatFunc::constant(FqElem::from_int(f_, parse_int(s_.substr(j0, i_ - j0), s_)));
    }
    fail("unexpected '" + std::string(1, c) + "'", s_);
  }
};

FieldPtr field_of_size(std::uint64_t n, std::string_view input) {
  if (n < 2) fail("field size below 2", input);
  std::uint32_t p = 2;
  while (n % p) ++p;
  std::uint32_t k = 0;
  std::uint64_t m = n;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  if (m != 1) fail("field size is not a prime power", input);
  return make_field(p, k);
}

std::vector<RatFunc> parse_rat_list(std::string_view s, FieldPtr f) {
  std::vector<RatFunc> out;
  if (trim(s).empty()) return out;
  for (auto part : split_top(s, ',')) out.push_back(ExprParser(part, f).parse());
  return out;
}

std::string_view strip_brackets(std::string_view s, char open, char close, std::string_view input) {
  s = trim(s);
  if (s.size() < 2 || s.front() != open || s.back() != close) fail(std::string("expected ") + open + "..." + close, input);
  return s.substr(1, s.size() - 2);
}

}  // namespace

std::pair<FieldPtr, bool> parse_field_name(std::string_view s0) {
  const std::string norm = normalize(s0);
  std::string_view s = trim(norm);
  bool rational = false;
  if (s.size() > 3 && s.substr(s.size() - 3) == "(t)") {
    rational = true;
    s = trim(s.substr(0, s.size() - 3));
  }
  if (s.substr(0, 2) != "F_") fail("expected a field name F_q", s0);
  s.remove_prefix(2);
  if (!s.empty() && s.front() == '{') s = strip_brackets(s, '{', '}', s0);
  std::uint64_t size = 0;
  if (const auto caret = s.find('^'); caret != std::string_view::npos) {
    const long long b = parse_int(s.substr(0, caret), s0), e = parse_int(s.substr(caret + 1), s0);
    if (b < 2 || e < 1 || e > 32) fail("bad field size", s0);
    size = 1;
    for (long long i = 0; i < e; ++i) {
      size *= static_cast<std::uint64_t>(b);
      if (size > (1u << 20)) fail("field too large", s0);
    }
  } else {
    const long long n = parse_int(s, s0);
    if (n < 2) fail("bad field size", s0);
    size = static_cast<std::uint64_t>(n);
  }
  return {field_of_size(size, s0), rational};
}

RatFunc parse_ratfunc(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  if (trim(norm).empty()) fail("empty expression", s);
  return ExprParser(norm, f).parse();
}

FqElem parse_elem(std::string_view s, FieldPtr f) {
  const RatFunc v = parse_ratfunc(s, f);
  if (!v.is_constant()) fail("expected a constant", s);
  return v.num().coeff(0) * inverse(v.den().coeff(0));
}

Poly parse_poly(std::string_view s, FieldPtr f) {
  const RatFunc v = parse_ratfunc(s, f);
  if (!v.den().is_one()) fail("expected a polynomial", s);
  return v.num();
}

Place parse_place(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  const std::string_view t = trim(norm);
  if (t == "inf") return Place::infinity(f);
  const Poly pi = parse_poly(strip_brackets(t, '(', ')', s), f);
  try {
    return Place::finite(pi);
  } catch (const Error& e) {
    fail(std::string("not a place: ") + e.what(), s);
  }
}

WittRat parse_witt_rat(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  std::vector<RatFunc> e;
  for (auto part : split_top(strip_brackets(norm, '(', ')', s), ';')) e.push_back(ExprParser(part, f).parse());
  if (e.size() > kMaxWittLength) fail("Witt length above " + std::to_string(kMaxWittLength), s);
  return WittRat(std::move(e));
}

WittFq parse_witt_fq(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  std::vector<FqElem> e;
  for (auto part : split_top(strip_brackets(norm, '(', ')', s), ';')) e.push_back(parse_elem(part, f));
  if (e.size() > kMaxWittLength) fail("Witt length above " + std::to_string(kMaxWittLength), s);
  return WittFq(std::move(e));
}

KatoSymbol parse_kato_symbol(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  const auto [c, rest] = split_coeff(norm);
  const std::string_view body = strip_brackets(rest, '<', '>', s);
  const auto halves = split_top(body, '|');
  if (halves.size() != 2) fail("expected exactly one '|'", s);
  return make_symbol(parse_witt_rat(halves[0], f), parse_rat_list(halves[1], f), c);
}

KatoSum parse_kato_sum(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  KatoSum out;
  for (auto part : split_top(norm, '+')) out.push_back(parse_kato_symbol(part, f));
  return out;
}

MilnorRat parse_milnor(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  std::optional<MilnorRat> sum;
  for (auto part : split_top(norm, '+')) {
    const auto [c, rest] = split_coeff(part);
    const auto entries = parse_rat_list(strip_brackets(rest, '{', '}', s), f);
    if (entries.empty()) fail("empty symbol", s);
    for (const auto& e : entries)
      if (e.is_zero()) fail("zero entry", s);
    const MilnorRat term = MilnorRat::single(entries, c);
    sum = sum ? *sum + term : term;
  }
  return *sum;
}

DiffForm parse_form(std::string_view s, FieldPtr f) {
  const std::string norm = normalize(s);
  std::string_view t = trim(norm);
  if (t == "0") return DiffForm::one_form(RatFunc(f));
  if (t.size() < 2 || t.substr(t.size() - 2) != "dt") fail("expected a form f * dt", s);
  t = trim(t.substr(0, t.size() - 2));
  if (t.empty()) return DiffForm::one_form(RatFunc::one(f));
  if (t.back() == '*') t = trim(t.substr(0, t.size() - 1));
  return DiffForm::one_form(ExprParser(t, f).parse());
}

std::variant<MackeySymbol, MackeySymbolRat> parse_mackey(std::string_view s) {
  const std::string norm = normalize(s);
  const auto [c, rest] = split_coeff(norm);
  const std::size_t sub = rest.rfind("}_{");
  if (rest.empty() || rest.front() != '{' || sub == std::string_view::npos || rest.back() != '}')
    fail("expected {(a); b1, ...}_{E/F}", s);
  const std::string_view body = rest.substr(1, sub - 1);
  const std::string_view names = rest.substr(sub + 3, rest.size() - sub - 4);
  const std::size_t slash = names.find('/');
  if (slash == std::string_view::npos) fail("expected E/F", s);
  const auto [E, e_rat] = parse_field_name(names.substr(0, slash));
  const auto [F, f_rat] = parse_field_name(names.substr(slash + 1));
  if (e_rat != f_rat) fail("both fields must be finite or both rational", s);
  if (E->p() != F->p() || E->degree() % F->degree() != 0) fail(E->name() + " does not contain " + F->name(), s);
  const auto parts = split_top(body, ';');
  // the Witt slot is the first part; at most one further top-level ';'
  if (parts.size() > 2) fail("expected one ';' between the Witt slot and the entries", s);
  const std::string_view bs = parts.size() == 2 ? parts[1] : std::string_view{};
  if (e_rat) return make_mackey(F, parse_witt_rat(parts[0], E), parse_rat_list(bs, E), c);
  std::vector<FqElem> entries;
  for (const auto& b : parse_rat_list(bs, E)) {
    if (!b.is_constant()) fail("entries over a finite field must be constants", s);
    entries.push_back(b.num().coeff(0) * inverse(b.den().coeff(0)));
  }
  return make_mackey(F, parse_witt_fq(parts[0], E), entries, c);
}

}  // namespace kato
