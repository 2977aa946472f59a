#include "nashdcf/session.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "nashdcf/polytext.hpp"
#include "nashdcf/regions.hpp"

namespace nashdcf {

// ---------------------------------------------------------------- element text

namespace {

std::string digits_text(const Integer& t, int digits) {
  std::string s = Integer(abs(t)).get_str();
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return (t < 0 ? "-~" : "~") + s;
}

std::optional<Rational> rational_constant(const Element& x) {
  if (auto q = x.rational_value()) return q;
  try {
    const MPoly d = x.defining_polynomial();
    if (d.degree(var::kZ) == 1 && !d.has_var_where(var::is_tag)) {
      auto c = d.coefficients(var::kZ);
      return Rational(-c[0].constant_value() / c[1].constant_value());
    }
  } catch (const DegreeBudgetExhausted&) {
  }
  return std::nullopt;
}

// Truncation toward zero of x * 10^digits, decided by refinement. Only a
// rational value can sit on the grid, so that case is settled exactly first
// whenever the cheap refinement stalls.
std::string real_text(const Element& x, int digits) {
  if (auto q = x.rational_value()) return to_string(*q);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  bool checked_rational = false;
  for (long bits = 64; bits <= 4096; bits *= 2) {
    if (bits > 256 && !checked_rational) {
      checked_rational = true;
      if (auto q = rational_constant(x)) return to_string(*q);
    }
    const ComplexBox b = x.enclosure(bits);
    const Rational lo = b.re().lo().to_rational() * scale, hi = b.re().hi().to_rational() * scale;
    if (sgn(lo) != sgn(hi) || sgn(lo) == 0) continue;
    Integer tl, th;
    mpz_tdiv_q(tl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_tdiv_q(th.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (tl == th) return digits_text(tl, digits);
  }
  return "?";
}

}  // namespace

std::string approximate(const Element& e, int digits) {
  if (e.is_real()) return real_text(e, digits);
  auto [re, im] = e.split_re_im();
  const std::string r = real_text(re, digits), i = real_text(im, digits);
  const bool neg = !i.empty() && i.front() == '-';
  const std::string mag = neg ? i.substr(1) : i;
  const std::string imag = mag == "1" ? "I" : mag + "*I";
  if (r == "0") return (neg ? "-" : "") + imag;
  return r + (neg ? " - " : " + ") + imag;
}

std::string describe_element(const Element& e) {
  std::string def;
  try {
    def = to_string(e.defining_polynomial());
  } catch (const DegreeBudgetExhausted&) {
    def = "?";
  }
  return std::string(e.is_real() ? "real " : "complex ") + approximate(e) + " def " + def;
}

// ---------------------------------------------------------------- state

struct Session::State {
  std::unique_ptr<Engine> engine = std::make_unique<Engine>();
  std::map<std::string, Element> elems;
  std::map<std::string, DiffPoly> dps;
  std::map<std::string, Element> scope;  // generator names while evaluating `extend`
  std::optional<Element> last;
  std::vector<std::pair<bool, std::string>> journal;
};

namespace {

using State = Session::State;
using ZPoly = std::vector<Element>;  // polynomial in Z, lowest first

const std::set<std::string> kKeywords = {"var", "let", "adjoin", "dp", "witness", "owitness", "solutions",
                                         "rootbetween", "extend", "delta", "sign", "iszero", "check", "eval",
                                         "wp", "raxioms", "print", "save", "load", "I", "Z", "_"};

void ztrim(ZPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

ZPoly zadd(ZPoly a, const ZPoly& b, bool negate_b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) a[k] = negate_b ? a[k] - b[k] : a[k] + b[k];
  ztrim(a);
  return a;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  ztrim(r);
  return r;
}

ZPoly zconst(const Element& c) {
  ZPoly p{c};
  ztrim(p);
  return p;
}

std::string strip_column(const std::string& what) {
  auto at = what.rfind(" at column ");
  return at == std::string::npos ? what : what.substr(0, at);
}

bool is_y_form(const std::string& s) {
  if (s.empty() || s[0] != 'y') return false;
  if (s.size() == 1) return true;
  if (s.find_first_not_of('\'', 1) == std::string::npos) return true;
  return s.size() > 3 && s[1] == '[' && s.back() == ']';
}

std::optional<std::uint32_t> tag_index(const std::string& s) {
  if (s.size() < 2 || s[0] != 'L' || s.find_first_not_of("0123456789", 1) != std::string::npos) return std::nullopt;
  return static_cast<std::uint32_t>(std::stoul(s.substr(1)));
}

std::string tag_name(std::uint32_t t) { return "L" + std::to_string(t); }

class Interp {
 public:
  Interp(State& st, std::string_view line) : st_(st), text_(line), toks_(tokenize(line)) {}

  void run(std::ostream& out) {
    const Token& t = peek();
    if (t.kind != Token::kIdent) fail("expected a command", t);
    const std::string cmd = take().text;
    if (cmd == "var") return cmd_var(out);
    if (cmd == "let") return cmd_let(out);
    if (cmd == "dp") return cmd_dp(out);
    if (cmd == "solutions") return cmd_solutions(out);
    if (cmd == "extend") return cmd_extend(out);
    if (cmd == "sign") return cmd_sign(out);
    if (cmd == "iszero") return cmd_iszero(out);
    if (cmd == "check") return cmd_check(out);
    if (cmd == "eval") return cmd_eval(out);
    if (cmd == "print") return cmd_print(out);
    if (cmd == "wp") return cmd_wp(out);
    if (cmd == "raxioms") return cmd_raxioms(out);
    if (auto e = producing(cmd)) {
      expect_end();
      st_.last = *e;
      out << approximate(*e) << "\n";
      return;
    }
    fail("unknown command '" + cmd + "'", t);
  }

 private:
  // ---- tokens

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Token::kEnd; }
  bool is_op(const Token& t, const char* op) const { return t.kind == Token::kOp && t.text == op; }
  bool accept_op(const char* op) {
    if (!is_op(peek(), op)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(const char* w) {
    if (peek().kind != Token::kIdent || peek().text != w) return false;
    ++pos_;
    return true;
  }
  bool accept_flag(const char* name) {
    if (is_op(peek(), "-") && is_op(peek(1), "-") && peek(2).kind == Token::kIdent && peek(2).text == name) {
      pos_ += 3;
      return true;
    }
    return false;
  }
  [[noreturn]] static void fail(const std::string& msg, const Token& t) { throw ParseError(msg, t.column); }
  void expect_end() const {
    if (!at_end()) fail("unexpected '" + peek().text + "'", peek());
  }
  std::string expect_ident(const char* what) {
    if (peek().kind != Token::kIdent) fail(std::string("expected ") + what, peek());
    return take().text;
  }
  Integer expect_integer(const char* what) {
    const bool neg = accept_op("-");
    if (peek().kind != Token::kNumber) fail(std::string("expected ") + what, peek());
    Integer v(take().text, 10);
    return neg ? Integer(-v) : v;
  }
  unsigned long expect_count(const char* what) {
    const Token& t = peek();
    Integer v = expect_integer(what);
    if (v < 0 || !v.fits_ulong_p()) fail(std::string(what) + " out of range", t);
    return v.get_ui();
  }
  std::string quoted(const char* what) {
    if (peek().kind != Token::kString) fail(std::string("expected quoted ") + what, peek());
    return take().text;
  }

  // ---- element expressions

  ZPoly expr(bool allow_z) {
    ZPoly p = term(allow_z);
    while (true) {
      if (accept_op("+")) p = zadd(p, term(allow_z), false);
      else if (accept_op("-")) p = zadd(p, term(allow_z), true);
      else return p;
    }
  }

  ZPoly term(bool allow_z) {
    ZPoly p = unary(allow_z);
    while (true) {
      if (accept_op("*")) {
        p = zmul(p, unary(allow_z));
      } else if (is_op(peek(), "/")) {
        const Token& slash = take();
        ZPoly d = unary(allow_z);
        if (d.size() > 1) fail("division by a polynomial in Z", slash);
        if (d.empty()) fail("division by zero", slash);
        const Element inv = d[0].inverse();
        for (auto& c : p) c = c * inv;
      } else {
        return p;
      }
    }
  }

  ZPoly unary(bool allow_z) {
    if (accept_op("-")) return zadd({}, unary(allow_z), true);
    if (accept_op("+")) return unary(allow_z);
    ZPoly base = primary(allow_z);
    if (accept_op("^")) {
      const unsigned long e = expect_count("exponent");
      ZPoly r = zconst(Element::from_rational(1));
      for (unsigned long k = 0; k < e; ++k) r = zmul(r, base);
      return r;
    }
    return base;
  }

  ZPoly primary(bool allow_z) {
    const Token t = peek();
    if (t.kind == Token::kNumber) {
      ++pos_;
      return zconst(Element::from_rational(Rational(Integer(t.text, 10))));
    }
    if (accept_op("(")) {
      ZPoly p = expr(allow_z);
      if (!accept_op(")")) fail("expected ')'", peek());
      return p;
    }
    if (t.kind != Token::kIdent) fail(t.kind == Token::kEnd ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
    ++pos_;
    if (t.text == "delta" && is_op(peek(), "(")) {
      ++pos_;
      const Token at = peek();
      Element a = element_of(expr(false), at);
      if (!accept_op(")")) fail("expected ')'", peek());
      return zconst(st_.engine->apply_delta(a));
    }
    if (t.text == "Z") {
      if (!allow_z) fail("Z is only allowed in adjoin", t);
      return {Element(), Element::from_rational(1)};
    }
    return zconst(resolve(t));
  }

  Element resolve(const Token& t) {
    if (auto it = st_.scope.find(t.text); it != st_.scope.end()) return it->second;
    if (t.text == "var") return st_.engine->fresh_var();
    if (t.text == "I") return Element::imaginary_unit();
    if (t.text == "_") {
      if (!st_.last) fail("no previous result", t);
      return *st_.last;
    }
    if (auto k = tag_index(t.text)) {
      if (!st_.engine->tags().allocated(*k)) fail("unallocated tag " + t.text, t);
      return Element::from_tag(*k);
    }
    if (auto it = st_.elems.find(t.text); it != st_.elems.end()) return it->second;
    fail("unknown identifier '" + t.text + "'", t);
  }

  Element element_of(const ZPoly& p, const Token& at) {
    if (p.size() > 1) fail("Z is only allowed in adjoin", at);
    return p.empty() ? Element() : p[0];
  }
  /// Whole remaining expression.
  Element element_expr() {
    const Token at = peek();
    Element e = element_of(expr(false), at);
    expect_end();
    return e;
  }
  /// One whitespace-separated argument: a product, so sums need parentheses.
  Element element_arg() {
    const Token at = peek();
    return element_of(term(false), at);
  }

  // ---- differential polynomials

  Resolver resolver() {
    return [this](const std::string& name) -> std::optional<Element> {
      if (name == "I") return Element::imaginary_unit();
      if (auto k = tag_index(name)) {
        if (!st_.engine->tags().allocated(*k)) return std::nullopt;
        return Element::from_tag(*k);
      }
      if (auto it = st_.elems.find(name); it != st_.elems.end()) return it->second;
      return std::nullopt;
    };
  }

  DiffPoly parse_dp(std::string_view text, std::size_t column) {
    try {
      return parse_diffpoly(text, resolver());
    } catch (const ParseError& e) {
      throw ParseError(strip_column(e.what()), e.column() + column - 1);
    }
  }

  DiffPoly diffpoly_arg() {
    const Token t = peek();
    if (t.kind == Token::kString) {
      ++pos_;
      return parse_dp(t.text, t.column + 1);
    }
    if (is_op(t, "(")) {
      int depth = 0;
      std::size_t k = pos_;
      for (; k < toks_.size(); ++k) {
        if (is_op(toks_[k], "(")) ++depth;
        if (is_op(toks_[k], ")") && --depth == 0) break;
        if (toks_[k].kind == Token::kEnd) fail("expected ')'", toks_[k]);
      }
      const std::size_t open = t.column, close = toks_[k].column;
      pos_ = k + 1;
      return parse_dp(text_.substr(open, close - open - 1), open + 1);
    }
    if (t.kind == Token::kIdent) {
      ++pos_;
      if (auto it = st_.dps.find(t.text); it != st_.dps.end()) return it->second;
      return parse_dp(t.text, t.column);
    }
    if (t.kind == Token::kNumber) {
      ++pos_;
      return DiffPoly(Element::from_rational(Rational(Integer(t.text, 10))));
    }
    fail("expected a differential polynomial", t);
  }

  // ---- commands

  std::optional<Element> producing(const std::string& cmd) {
    if (cmd == "adjoin") {
      ZPoly p = expr(true);
      RootSelector sel = RootSelector::smallest();
      if (accept_word("real")) {
        const Token& at = peek();
        const Integer k = expect_integer("root index");
        if (k < 1 || !k.fits_sint_p()) fail("root index must be positive", at);
        sel = RootSelector::real_index(static_cast<int>(k.get_si()));
      } else {
        accept_word("smallest");
      }
      return adjoin_root(std::move(p), sel);
    }
    if (cmd == "witness") {
      DiffPoly p = diffpoly_arg();
      DiffPoly q = diffpoly_arg();
      return st_.engine->blum_witness(p, q);
    }
    if (cmd == "owitness") {
      DiffPoly p = diffpoly_arg();
      std::vector<DiffPoly> qs;
      while (!at_end() && !(peek().kind == Token::kIdent && peek().text == "at")) qs.push_back(diffpoly_arg());
      if (!accept_word("at")) fail("expected 'at'", peek());
      std::vector<Element> point;
      while (!at_end()) point.push_back(element_arg());
      return st_.engine->ordered_witness(p, qs, point);
    }
    if (cmd == "rootbetween") {
      DiffPoly p = diffpoly_arg();
      Element a = element_arg();
      Element b = element_arg();
      return st_.engine->root_between(p, a, b);
    }
    if (cmd == "delta") return st_.engine->apply_delta(element_arg());
    return std::nullopt;
  }

  void check_name(const Token& at, const std::string& name) {
    if (kKeywords.count(name) || tag_index(name) || is_y_form(name)) fail("reserved name '" + name + "'", at);
  }

  void cmd_var(std::ostream& out) {
    expect_end();
    const Element e = st_.engine->fresh_var();
    st_.last = e;
    out << tag_name(*e.support().begin()) << "\n";
  }

  void cmd_let(std::ostream& out) {
    const Token at = peek();
    const std::string name = expect_ident("a name");
    check_name(at, name);
    if (!accept_op("=")) fail("expected '='", peek());
    std::optional<Element> e;
    // `delta(x) + ...` is an expression; `delta x` is the command form
    const bool call = peek().text == "delta" && is_op(peek(1), "(");
    if (peek().kind == Token::kIdent && !call) {
      const std::size_t save = pos_;
      const std::string word = take().text;
      e = producing(word);
      if (e) expect_end();
      else pos_ = save;
    }
    if (!e) e = element_expr();
    st_.elems[name] = *e;
    st_.last = *e;
    out << name << " = " << approximate(*e) << "\n";
  }

  void cmd_dp(std::ostream& out) {
    const Token at = peek();
    const std::string name = expect_ident("a name");
    check_name(at, name);
    if (!is_op(peek(), "=")) fail("expected '='", peek());
    const std::size_t col = take().column;
    DiffPoly p = parse_dp(text_.substr(col), col + 1);
    st_.dps[name] = p;
    out << name << " = " << p.str() << "\n";
  }

  void cmd_solutions(std::ostream& out) {
    const unsigned long n = expect_count("a count");
    expect_end();
    auto sols = st_.engine->distinct_solutions(static_cast<unsigned>(n));
    for (std::size_t k = 0; k < sols.size(); ++k) {
      const std::string name = "sol" + std::to_string(k + 1);
      st_.elems[name] = sols[k];
      out << name << " = " << approximate(sols[k]) << "\n";
    }
    if (!sols.empty()) st_.last = sols.back();
  }

  void cmd_extend(std::ostream& out) {
    const unsigned long n = expect_count("a count");
    if (n == 0) fail("extend needs at least one generator", peek());
    if (!accept_word("with")) fail("expected 'with'", peek());
    // expression boundaries: top-level commas, up to 'as' or the end
    std::vector<std::size_t> starts{pos_};
    int depth = 0;
    for (; !at_end(); ++pos_) {
      const Token& t = peek();
      if (is_op(t, "(")) ++depth;
      if (is_op(t, ")")) --depth;
      if (depth == 0 && is_op(t, ",")) starts.push_back(pos_ + 1);
      if (depth == 0 && t.kind == Token::kIdent && t.text == "as") break;
    }
    const std::size_t list_end = pos_;
    std::vector<std::string> names;
    if (accept_word("as")) {
      while (!at_end()) {
        const Token at = peek();
        names.push_back(expect_ident("a name"));
        check_name(at, names.back());
      }
    }
    expect_end();
    if (starts.size() != n) fail("extend " + std::to_string(n) + " needs " + std::to_string(n) + " expressions", peek());
    if (names.empty())
      for (unsigned long k = 1; k <= n; ++k) names.push_back("e" + std::to_string(k));
    if (names.size() != n) fail("wrong number of names after 'as'", peek());
    const std::size_t end_pos = pos_;
    auto h = [&](const std::vector<Element>& gens) {
      for (std::size_t k = 0; k < n; ++k) st_.scope[names[k]] = gens[k];
      std::vector<Element> values;
      for (std::size_t k = 0; k < starts.size(); ++k) {
        pos_ = starts[k];
        values.push_back(element_of(expr(false), toks_[starts[k]]));
        const std::size_t stop = k + 1 < starts.size() ? starts[k + 1] - 1 : list_end;
        if (pos_ != stop) fail("unexpected '" + peek().text + "'", peek());
      }
      st_.scope.clear();
      return values;
    };
    std::vector<Element> gens;
    try {
      gens = st_.engine->adjoin_generators(static_cast<unsigned>(n), h);
    } catch (...) {
      st_.scope.clear();
      throw;
    }
    pos_ = end_pos;
    for (std::size_t k = 0; k < n; ++k) {
      st_.elems[names[k]] = gens[k];
      out << names[k] << " = " << tag_name(*gens[k].support().begin()) << "\n";
    }
    st_.last = gens.back();
  }

  void cmd_sign(std::ostream& out) {
    const int s = element_expr().sign();
    out << (s > 0 ? "positive" : s < 0 ? "negative" : "zero") << "\n";
  }

  void cmd_iszero(std::ostream& out) { out << (element_expr().is_zero() ? "true" : "false") << "\n"; }

  void cmd_check(std::ostream& out) {
    DiffPoly p = diffpoly_arg();
    Element f = element_arg();
    expect_end();
    out << (st_.engine->diff_eval(p, f).is_zero() ? "zero" : "nonzero") << "\n";
  }

  void cmd_eval(std::ostream& out) {
    Element e = element_arg();
    unsigned long bits = 64;
    if (accept_flag("prec")) bits = expect_count("precision");
    expect_end();
    if (bits == 0 || bits > 100000) fail("precision must be in 1..100000", peek());
    out << approximate(e, static_cast<int>(std::max(1UL, bits * 30103 / 100000))) << "\n";
  }

  void cmd_print(std::ostream& out) { out << approximate(element_expr()) << "\n"; }

  RegionMode mode_word() {
    const Token at = peek();
    const std::string w = expect_ident("real or complex");
    if (w == "real") return RegionMode::kReal;
    if (w == "complex") return RegionMode::kComplex;
    fail("expected real or complex", at);
  }

  MPoly region_text(const std::string& text, const Token& at) {
    try {
      return parse_poly(text);
    } catch (const ParseError& e) {
      throw ParseError(strip_column(e.what()), e.column() + at.column);
    }
  }

  void cmd_wp(std::ostream& out) {
    if (!accept_word("member")) fail("expected 'member'", peek());
    const RegionMode mode = mode_word();
    const Token at = peek();
    const MPoly poly = region_text(quoted("polynomial"), at);
    std::vector<Element> coords;
    while (!at_end()) coords.push_back(element_arg());
    const RegionPoly p = region_poly(poly, static_cast<unsigned>(coords.size()), mode);
    out << (wp_member(p, RegionPoint(coords)) ? "true" : "false") << "\n";
  }

  void cmd_raxioms(std::ostream& out) {
    const Token pa = peek();
    const MPoly p = region_text(quoted("polynomial"), pa);
    const Token qa = peek();
    const MPoly q = region_text(quoted("polynomial"), qa);
    AxiomOptions opt;
    RegionMode mode = RegionMode::kReal;
    while (!at_end()) {
      if (accept_flag("samples")) opt.samples = expect_count("sample count");
      else if (accept_flag("seed")) opt.seed = expect_count("seed");
      else if (accept_flag("mode")) mode = mode_word();
      else if (accept_flag("bound")) opt.r2_bound = Rational(expect_integer("bound"));
      else fail("unexpected '" + peek().text + "'", peek());
    }
    unsigned m = 1;
    for (const MPoly* f : {&p, &q})
      for (Var v : f->variables()) m = std::max(m, static_cast<unsigned>(v));
    const AxiomReport rep = check_R_axioms(region_poly(p, m, mode), region_poly(q, m, mode), opt);
    out << rep.str();
  }

  State& st_;
  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string clean_line(std::string_view line) {
  bool quoted = false;
  std::size_t end = line.size();
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') quoted = !quoted;
    if (line[k] == '#' && !quoted) {
      end = k;
      break;
    }
  }
  line = line.substr(0, end);
  const auto b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = line.find_last_not_of(" \t\r");
  return std::string(line.substr(b, e - b + 1));
}

std::string first_word(const std::string& line) { return line.substr(0, line.find_first_of(" \t")); }

std::string path_argument(const std::string& line) {
  std::string rest = clean_line(std::string_view(line).substr(first_word(line).size()));
  if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"') rest = rest.substr(1, rest.size() - 2);
  if (rest.empty()) throw std::invalid_argument("expected a path");
  return rest;
}

std::vector<std::string> derived_records(State& st) {
  std::vector<std::string> out;
  out.push_back("tags " + std::to_string(st.engine->tags().high_water()));
  for (const auto& [name, p] : st.dps)
    out.push_back("dp " + name + " order " + std::to_string(p.order()) + " degree " +
                  (p.is_zero() ? std::string("-inf") : std::to_string(p.degree())));
  for (const auto& [name, e] : st.elems) out.push_back("elem " + name + " " + describe_element(e));
  for (const auto& [tag, e] : st.engine->pins()) out.push_back("pin " + tag_name(tag) + " " + describe_element(e));
  for (const auto& w : st.engine->log()) {
    std::string r = "witness " + to_string(w.kind) + " tags";
    for (auto t : w.tags) r += " " + tag_name(t);
    r += " selections";
    for (const auto& s : w.selections) r += " " + s;
    out.push_back(r);
  }
  return out;
}

const std::set<std::string> kRecordKinds = {"cmd", "fail", "tags", "dp", "elem", "pin", "witness", "end"};

}  // namespace

// ---------------------------------------------------------------- session

Session::Session() : st_(std::make_unique<State>()) {}
Session::~Session() = default;

Engine& Session::engine() { return *st_->engine; }

std::optional<Element> Session::element(const std::string& name) const {
  auto it = st_->elems.find(name);
  if (it == st_->elems.end()) return std::nullopt;
  return it->second;
}

const std::map<std::string, Element>& Session::elements() const { return st_->elems; }

void Session::execute(std::string_view raw, std::ostream& out) {
  const std::string line = clean_line(raw);
  if (line.empty()) return;
  const std::string word = first_word(line);
  if (word == "save") {
    save(path_argument(line));
    out << "saved " << path_argument(line) << "\n";
    return;
  }
  if (word == "load") {
    load(path_argument(line));
    out << "loaded " << path_argument(line) << "\n";
    return;
  }
  try {
    Interp(*st_, line).run(out);
  } catch (...) {
    st_->journal.push_back({false, line});
    throw;
  }
  st_->journal.push_back({true, line});
}

int Session::run(std::istream& in, std::ostream& out, std::ostream& err) {
  int failed = 0;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    try {
      execute(line, out);
    } catch (const std::exception& e) {
      err << "line " << n << ": " << e.what() << "\n";
      ++failed;
    }
  }
  return failed;
}

std::string Session::save_text() const {
  std::vector<std::string> records;
  for (const auto& [ok, line] : st_->journal) records.push_back((ok ? "cmd " : "fail ") + line);
  auto derived = derived_records(*st_);
  records.insert(records.end(), derived.begin(), derived.end());
  std::string out = "nashdcf/1\n";
  for (const auto& r : records) out += r + "\n";
  out += "end " + std::to_string(records.size()) + "\n";
  return out;
}

void Session::save(const std::string& path) const {
  const std::string text = save_text();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f.flush()) throw std::runtime_error("cannot write " + path);
}

void Session::restore(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) break;  // an unterminated line is a torn write
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw SessionError("not a session file");
  if (lines[0] != "nashdcf/1") {
    if (lines[0].rfind("nashdcf/", 0) == 0)
      throw SessionError("version mismatch: expected nashdcf/1, found " + lines[0]);
    throw SessionError("not a session file");
  }

  std::vector<std::pair<std::string, std::string>> records;  // kind, full line
  bool ended = false;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::size_t index = records.size() + 1;
    if (ended) throw SessionError("corrupt record " + std::to_string(index) + ": data after end");
    const std::string kind = first_word(lines[k]);
    if (!kRecordKinds.count(kind)) throw SessionError("corrupt record " + std::to_string(index) + ": unknown kind");
    if (kind == "end") {
      if (lines[k] != "end " + std::to_string(records.size()))
        throw SessionError("corrupt record " + std::to_string(index) + ": record count mismatch");
      ended = true;
      continue;
    }
    records.emplace_back(kind, lines[k]);
  }
  if (!ended) {
    if (records.empty()) throw SessionError("truncated session file: no valid record");
    throw SessionError("truncated session file: last valid record " + std::to_string(records.size()) + " (" +
                       records.back().second + ")");
  }

  auto fresh = std::make_unique<State>();
  std::ostringstream sink;
  std::size_t k = 0;
  for (; k < records.size(); ++k) {
    const auto& [kind, line] = records[k];
    if (kind != "cmd" && kind != "fail") break;
    const std::string cmd = line.substr(kind.size() + 1);
    const std::string where = "corrupt record " + std::to_string(k + 1);
    const std::string word = first_word(cmd);
    if (word == "save" || word == "load") throw SessionError(where + ": nested " + word);
    bool ok = true;
    std::string why;
    try {
      Interp(*fresh, cmd).run(sink);
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    if (kind == "cmd" && !ok) throw SessionError(where + ": replay failed: " + why);
    if (kind == "fail" && ok) throw SessionError(where + ": command succeeded on replay");
    fresh->journal.push_back({ok, cmd});
  }
  const auto derived = derived_records(*fresh);
  for (std::size_t d = 0; d < derived.size() || k + d < records.size(); ++d) {
    const std::string where = "corrupt record " + std::to_string(k + d + 1);
    if (k + d >= records.size()) throw SessionError(where + ": missing derived record");
    if (d >= derived.size() || records[k + d].second != derived[d])
      throw SessionError(where + ": does not match the replayed state");
  }
  st_ = std::move(fresh);
}

void Session::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SessionError("cannot read " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  restore(buf.str());
}

}  // namespace nashdcf
