#include <cctype>
#include <charconv>
#include <string>
#include <system_error>

#include "dirac/error.hpp"
#include "dirac/expr.hpp"

namespace dirac {

namespace {

std::string describe(const std::vector<std::string>& expected) {
  std::string s;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i != 0) {
      s += i + 1 == expected.size() ? " or " : ", ";
    }
    s += expected[i];
  }
  return s;
}

}  // namespace

ParseError::ParseError(Reason reason, std::size_t offset, std::vector<std::string> expected,
                       const std::string& what)
    : Error(what + " at byte " + std::to_string(offset) +
            (expected.empty() ? std::string() : " (expected " + describe(expected) + ")")),
      reason_(reason),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace dirac

namespace dirac::expr {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end, invalid };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string_view text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    Token tok;
    tok.offset = pos_;
    if (pos_ >= src_.size()) {
      tok.kind = Tok::end;
      return tok;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number(tok);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
        ++end;
      }
      tok.kind = Tok::ident;
      tok.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return tok;
    }
    ++pos_;
    tok.text = src_.substr(tok.offset, 1);
    switch (c) {
      case '+':
        tok.kind = Tok::plus;
        break;
      case '-':
        tok.kind = Tok::minus;
        break;
      case '*':
        tok.kind = Tok::star;
        break;
      case '/':
        tok.kind = Tok::slash;
        break;
      case '^':
        tok.kind = Tok::caret;
        break;
      case '(':
        tok.kind = Tok::lparen;
        break;
      case ')':
        tok.kind = Tok::rparen;
        break;
      default:
        tok.kind = Tok::invalid;
        break;
    }
    return tok;
  }

 private:
  Token number(Token tok) {
    std::size_t end = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
        ++end;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      mantissa += digits();
    }
    if (mantissa == 0) {
      // lone '.'
      ++pos_;
      tok.kind = Tok::invalid;
      tok.text = src_.substr(tok.offset, 1);
      return tok;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) {
        ++end;
      }
      if (digits() == 0) {
        end = save;
      }
    }
    tok.kind = Tok::number;
    tok.text = src_.substr(pos_, end - pos_);
    pos_ = end;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) {
    cur_ = lexer_.next();
    ahead_ = lexer_.next();
  }

  Expr parse_all() {
    Expr e = expression();
    if (cur_.kind != Tok::end) {
      fail({"operator", "end of input"});
    }
    return e;
  }

 private:
  void advance() {
    cur_ = ahead_;
    ahead_ = lexer_.next();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = cur_.kind == Tok::end ? "end of input" : "'" + std::string(cur_.text) + "'";
    throw ParseError(ParseError::Reason::syntax, cur_.offset, std::move(expected),
                     "unexpected " + found);
  }

  Expr expression() {
    Expr lhs = term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const bool plus = cur_.kind == Tok::plus;
      advance();
      Expr rhs = term();
      lhs = plus ? Expr::add(std::move(lhs), std::move(rhs))
                 : Expr::sub(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const bool times = cur_.kind == Tok::star;
      advance();
      Expr rhs = unary();
      lhs = times ? Expr::mul(std::move(lhs), std::move(rhs))
                  : Expr::div(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr unary() {
    if (cur_.kind != Tok::minus) {
      return power();
    }
    // "-<number>" not raised to a power is a negative literal.
    if (ahead_.kind == Tok::number) {
      advance();
      const Token num = cur_;
      const double v = number_value(num);
      advance();
      if (cur_.kind != Tok::caret) {
        return Expr::constant(-v);
      }
      return Expr::neg(power_tail(Expr::constant(v)));
    }
    advance();
    return Expr::neg(unary());
  }

  Expr power() { return power_tail(primary()); }

  Expr power_tail(Expr base) {
    while (cur_.kind == Tok::caret) {
      advance();
      base = Expr::pow(std::move(base), exponent());
    }
    return base;
  }

  int exponent() {
    bool paren = false;
    if (cur_.kind == Tok::lparen) {
      paren = true;
      advance();
    }
    bool negative = false;
    if (cur_.kind == Tok::minus) {
      negative = true;
      advance();
    }
    if (cur_.kind != Tok::number) {
      fail({"integer exponent"});
    }
    int n = 0;
    const auto text = cur_.text;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), n);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail({"integer exponent"});
    }
    advance();
    if (paren) {
      if (cur_.kind != Tok::rparen) {
        fail({"')'"});
      }
      advance();
    }
    return negative ? -n : n;
  }

  double number_value(const Token& tok) const {
    double v = 0.0;
    const auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size()) {
      throw ParseError(ParseError::Reason::syntax, tok.offset, {},
                       "number out of range '" + std::string(tok.text) + "'");
    }
    return v;
  }

  Expr primary() {
    switch (cur_.kind) {
      case Tok::number: {
        const double v = number_value(cur_);
        advance();
        return Expr::constant(v);
      }
      case Tok::lparen: {
        advance();
        Expr inner = expression();
        if (cur_.kind != Tok::rparen) {
          fail({"')'"});
        }
        advance();
        return inner;
      }
      case Tok::ident:
        return identifier();
      default:
        fail({"number", "identifier", "'('", "'-'"});
    }
  }

  Expr identifier() {
    const Token id = cur_;
    advance();
    if (id.text == "x") {
      return Expr::variable(Var::x);
    }
    if (id.text == "t") {
      return Expr::variable(Var::t);
    }
    if (id.text == "pi") {
      return Expr::pi();
    }
    Kind fn{};
    if (id.text == "sin") {
      fn = Kind::sin;
    } else if (id.text == "cos") {
      fn = Kind::cos;
    } else if (id.text == "exp") {
      fn = Kind::exp;
    } else if (id.text == "tanh") {
      fn = Kind::tanh;
    } else {
      throw ParseError(ParseError::Reason::unknown_identifier, id.offset,
                       {"x", "t", "pi", "sin", "cos", "exp", "tanh"},
                       "unknown identifier '" + std::string(id.text) + "'");
    }
    if (cur_.kind != Tok::lparen) {
      fail({"'('"});
    }
    advance();
    Expr arg = expression();
    if (cur_.kind != Tok::rparen) {
      fail({"')'"});
    }
    advance();
    return Expr::make(fn, std::span(&arg, 1));
  }

  Lexer lexer_;
  Token cur_;
  Token ahead_;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace dirac::expr
