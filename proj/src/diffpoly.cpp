#include <algorithm>

#include "nashdcf/diffclosure.hpp"
#include "nashdcf/polytext.hpp"

namespace nashdcf {

namespace {

std::uint32_t index_of(Var v) { return v - var::kDiffBase; }

}  // namespace

DiffPoly::DiffPoly(const Element& c) {
  if (!c.is_zero()) t_.push_back({Monomial(), c});
}

DiffPoly DiffPoly::y(std::uint32_t k) {
  DiffPoly p;
  p.t_.push_back({Monomial::of(var::diff(k)), Element::from_rational(1)});
  return p;
}

DiffPoly DiffPoly::from_mpoly(const MPoly& p) {
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    for (const auto& [v, e] : t.mono.powers())
      if (!var::is_diff(v)) throw std::invalid_argument("not a differential variable: " + var::name(v));
    terms.push_back({t.mono, Element::from_rational(t.coef)});
  }
  return from_terms(std::move(terms));
}

DiffPoly DiffPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return compare(a.first, b.first) > 0; });
  DiffPoly out;
  for (auto& t : terms) {
    if (!out.t_.empty() && out.t_.back().first == t.first) out.t_.back().second = out.t_.back().second + t.second;
    else out.t_.push_back(std::move(t));
  }
  std::erase_if(out.t_, [](const Term& t) { return t.second.is_zero(); });
  return out;
}

int DiffPoly::order() const {
  int n = -1;
  for (const auto& [m, c] : t_)
    for (const auto& [v, e] : m.powers()) n = std::max(n, static_cast<int>(index_of(v)));
  return n;
}

int DiffPoly::degree() const {
  if (t_.empty()) return kMinusInfinity;
  int d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, static_cast<int>(m.total_degree()));
  return d;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly out = *this;
  for (auto& [m, c] : out.t_) c = -c;
  return out;
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
  std::vector<DiffPoly::Term> terms = a.t_;
  terms.insert(terms.end(), b.t_.begin(), b.t_.end());
  return DiffPoly::from_terms(std::move(terms));
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return a + (-b); }

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  std::vector<DiffPoly::Term> terms;
  terms.reserve(a.t_.size() * b.t_.size());
  for (const auto& [ma, ca] : a.t_)
    for (const auto& [mb, cb] : b.t_) terms.push_back({ma * mb, ca * cb});
  return DiffPoly::from_terms(std::move(terms));
}

DiffPoly DiffPoly::pow(unsigned e) const {
  DiffPoly r(Element::from_rational(1)), b = *this;
  while (e > 0) {
    if (e & 1u) r = r * b;
    e >>= 1u;
    if (e > 0) b = b * b;
  }
  return r;
}

DiffPoly DiffPoly::partial(std::uint32_t k) const {
  const Var v = var::diff(k);
  std::vector<Term> terms;
  for (const auto& [m, c] : t_) {
    const std::uint32_t e = m.degree(v);
    if (e == 0) continue;
    terms.push_back({m.with(v, e - 1), c * Element::from_rational(static_cast<long>(e))});
  }
  return from_terms(std::move(terms));
}

Element DiffPoly::evaluate(const std::vector<Element>& values) const {
  if (order() >= static_cast<int>(values.size())) throw std::invalid_argument("evaluate: too few values");
  Element sum;
  for (const auto& [m, c] : t_) {
    Element term = c;
    for (const auto& [v, e] : m.powers()) term = term * values[index_of(v)].pow(e);
    sum = sum + term;
  }
  return sum;
}

std::vector<Element> DiffPoly::univariate(std::uint32_t k, const std::vector<Element>& values) const {
  const Var xk = var::diff(k);
  std::vector<Element> out;
  for (const auto& [m, c] : t_) {
    Element term = c;
    for (const auto& [v, e] : m.powers()) {
      if (v == xk) continue;
      if (index_of(v) >= values.size()) throw std::invalid_argument("univariate: too few values");
      term = term * values[index_of(v)].pow(e);
    }
    const std::uint32_t d = m.degree(xk);
    if (out.size() <= d) out.resize(d + 1);
    out[d] = out[d] + term;
  }
  return out;
}

std::string DiffPoly::str() const {
  if (t_.empty()) return "0";
  auto yname = [](std::uint32_t k) {
    if (k == 0) return std::string("y");
    if (k <= 2) return "y" + std::string(k, '\'');
    return "y[" + std::to_string(k) + "]";
  };
  std::string out;
  bool first = true;
  for (const auto& [m, c] : t_) {
    std::string mono;
    for (const auto& [v, e] : m.powers()) {
      if (!mono.empty()) mono += "*";
      mono += yname(index_of(v));
      if (e > 1) mono += "^" + std::to_string(e);
    }
    std::string coef;
    bool negative = false;
    if (auto q = c.rational_value()) {
      negative = sgn(*q) < 0;
      Rational a = negative ? Rational(-*q) : *q;
      if (!(a == 1) || mono.empty()) coef = to_string(a);
    } else {
      coef = "[" + c.str() + "]";
    }
    if (first) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    first = false;
    out += coef;
    if (!coef.empty() && !mono.empty()) out += "*";
    out += mono;
  }
  return out;
}

namespace {

class DiffParser {
 public:
  DiffParser(std::string_view text, const Resolver& resolve) : toks_(tokenize(text)), resolve_(resolve) {}

  DiffPoly parse() {
    DiffPoly p = expr();
    if (peek().kind != Token::kEnd) throw ParseError("unexpected '" + peek().text + "'", peek().column);
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(const char* op) {
    if (peek().kind == Token::kOp && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  DiffPoly expr() {
    DiffPoly p = term();
    while (true) {
      if (accept("+")) p = p + term();
      else if (accept("-")) p = p - term();
      else return p;
    }
  }

  DiffPoly term() {
    DiffPoly p = unary();
    while (true) {
      if (accept("*")) {
        p = p * unary();
      } else if (peek().kind == Token::kOp && peek().text == "/") {
        const std::size_t col = peek().column;
        ++pos_;
        DiffPoly d = unary();
        if (d.order() >= 0) throw ParseError("division by a non-constant", col);
        if (d.is_zero()) throw ParseError("division by zero", col);
        p = p * DiffPoly(d.terms().front().second.inverse());
      } else {
        return p;
      }
    }
  }

  DiffPoly unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  DiffPoly power() {
    DiffPoly base = primary();
    if (accept("^")) {
      const Token& t = peek();
      if (t.kind != Token::kNumber) throw ParseError("exponent must be a nonnegative integer", t.column);
      ++pos_;
      base = base.pow(static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  DiffPoly primary() {
    const Token t = peek();
    if (t.kind == Token::kNumber) {
      ++pos_;
      return DiffPoly(Element::from_rational(Rational(Integer(t.text, 10))));
    }
    if (t.kind == Token::kIdent) {
      ++pos_;
      if (auto k = y_index(t.text)) return DiffPoly::y(*k);
      if (auto e = resolve_(t.text)) return DiffPoly(*e);
      throw ParseError("unknown identifier '" + t.text + "'", t.column);
    }
    if (accept("(")) {
      DiffPoly p = expr();
      if (!accept(")")) throw ParseError("expected ')'", peek().column);
      return p;
    }
    throw ParseError(t.kind == Token::kEnd ? std::string("unexpected end of input") : "unexpected '" + t.text + "'",
                     t.column);
  }

  static std::optional<std::uint32_t> y_index(const std::string& s) {
    if (s.empty() || s[0] != 'y') return std::nullopt;
    if (s.size() == 1) return 0;
    if (s.find_first_not_of('\'', 1) == std::string::npos) return static_cast<std::uint32_t>(s.size() - 1);
    if (s[1] == '[' && s.back() == ']') return static_cast<std::uint32_t>(std::stoul(s.substr(2, s.size() - 3)));
    return std::nullopt;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Resolver& resolve_;
};

}  // namespace

DiffPoly parse_diffpoly(std::string_view text, const Resolver& resolve) { return DiffParser(text, resolve).parse(); }

}  // namespace nashdcf
