#include "nashdcf/polytext.hpp"

#include <cctype>

namespace nashdcf {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Token::kNumber, std::string(text.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '@') {
      std::size_t j = i + 1;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      while (j < text.size() && text[j] == '\'') ++j;
      if (j < text.size() && text[j] == '[') {
        std::size_t k = j + 1;
        while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
        if (k < text.size() && text[k] == ']' && k > j + 1) j = k + 1;
      }
      out.push_back({Token::kIdent, std::string(text.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (c == '"') {
      std::size_t j = text.find('"', i + 1);
      if (j == std::string_view::npos) throw ParseError("unterminated string", col);
      out.push_back({Token::kString, std::string(text.substr(i + 1, j - i - 1)), col});
      i = j + 1;
      continue;
    }
    if (std::string_view("+-*/^(),=;").find(c) != std::string_view::npos) {
      out.push_back({Token::kOp, std::string(1, c), col});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", col);
  }
  out.push_back({Token::kEnd, "", text.size() + 1});
  return out;
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : toks_(tokenize(text)) {}

  MPoly parse() {
    MPoly p = expr();
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

  MPoly expr() {
    MPoly p = term();
    while (true) {
      if (accept("+")) {
        p += term();
      } else if (accept("-")) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  MPoly term() {
    MPoly p = unary();
    while (true) {
      if (accept("*")) {
        p *= unary();
      } else if (peek().kind == Token::kOp && peek().text == "/") {
        std::size_t col = peek().column;
        ++pos_;
        MPoly d = unary();
        if (!d.is_constant() || d.is_zero()) throw ParseError("division by a non-constant or zero", col);
        p = p.scaled(1 / d.constant_value());
      } else {
        return p;
      }
    }
  }

  MPoly unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  MPoly power() {
    MPoly base = primary();
    if (accept("^")) {
      const Token& t = peek();
      if (t.kind != Token::kNumber) throw ParseError("exponent must be a nonnegative integer", t.column);
      ++pos_;
      base = base.pow(static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  MPoly primary() {
    const Token t = peek();
    switch (t.kind) {
      case Token::kNumber:
        ++pos_;
        return MPoly(Rational(Integer(t.text, 10)));
      case Token::kIdent:
        ++pos_;
        return MPoly::variable(variable(t));
      case Token::kOp:
        if (t.text == "(") {
          ++pos_;
          MPoly p = expr();
          if (!accept(")")) throw ParseError("expected ')'", peek().column);
          return p;
        }
        break;
      default:
        break;
    }
    throw ParseError(t.kind == Token::kEnd ? std::string("unexpected end of input") : "unexpected '" + t.text + "'",
                     t.column);
  }

  static Var variable(const Token& t) {
    const std::string& s = t.text;
    if (s == "Z") return var::kZ;
    if (s == "g") return var::kGamma;
    if (s.size() > 1 && (s[0] == 'L' || s[0] == 'x')) {
      bool digits = true;
      for (std::size_t i = 1; i < s.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(s[i]));
      if (digits) {
        unsigned long k = std::stoul(s.substr(1));
        return s[0] == 'L' ? var::tag(static_cast<std::uint32_t>(k)) : var::diff(static_cast<std::uint32_t>(k));
      }
    }
    throw ParseError("unknown variable '" + s + "'", t.column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

}  // namespace nashdcf
