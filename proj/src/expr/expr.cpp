#include "dirac/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <stdexcept>

#include "scalar_ops.hpp"

namespace dirac::expr {

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  int exponent = 0;
  std::vector<Expr> children;
};

int arity(Kind kind) noexcept {
  switch (kind) {
    case Kind::constant:
    case Kind::var_x:
    case Kind::var_t:
    case Kind::pi:
      return 0;
    case Kind::neg:
    case Kind::pow:
    case Kind::sin:
    case Kind::cos:
    case Kind::exp:
    case Kind::tanh:
      return 1;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div:
      return 2;
  }
  return 0;
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = v == Var::x ? Kind::var_x : Kind::var_t;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pi;
  return Expr(std::move(n));
}

Expr Expr::make(Kind kind, std::span<const Expr> children, int exponent) {
  if (static_cast<std::size_t>(arity(kind)) != children.size() || arity(kind) == 0) {
    throw std::invalid_argument("Expr::make: arity mismatch");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->exponent = kind == Kind::pow ? exponent : 0;
  n->children.assign(children.begin(), children.end());
  return Expr(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
  const std::array c{std::move(a), std::move(b)};
  return make(Kind::add, c);
}
Expr Expr::sub(Expr a, Expr b) {
  const std::array c{std::move(a), std::move(b)};
  return make(Kind::sub, c);
}
Expr Expr::mul(Expr a, Expr b) {
  const std::array c{std::move(a), std::move(b)};
  return make(Kind::mul, c);
}
Expr Expr::div(Expr a, Expr b) {
  const std::array c{std::move(a), std::move(b)};
  return make(Kind::div, c);
}
Expr Expr::neg(Expr a) { return make(Kind::neg, std::span(&a, 1)); }
Expr Expr::pow(Expr base, int exponent) { return make(Kind::pow, std::span(&base, 1), exponent); }
Expr Expr::sin(Expr a) { return make(Kind::sin, std::span(&a, 1)); }
Expr Expr::cos(Expr a) { return make(Kind::cos, std::span(&a, 1)); }
Expr Expr::exp(Expr a) { return make(Kind::exp, std::span(&a, 1)); }
Expr Expr::tanh(Expr a) { return make(Kind::tanh, std::span(&a, 1)); }

Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
int Expr::exponent() const noexcept { return node_->exponent; }
std::span<const Expr> Expr::children() const noexcept { return node_->children; }
const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }

bool Expr::is_constant(double v) const noexcept {
  return node_->kind == Kind::constant && node_->value == v;
}

std::size_t Expr::node_count() const noexcept {
  std::size_t n = 1;
  for (const auto& c : node_->children) {
    n += c.node_count();
  }
  return n;
}

std::size_t Expr::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& c : node_->children) {
    d = std::max(d, c.depth());
  }
  return d + 1;
}

bool operator==(const Expr& a, const Expr& b) noexcept {
  if (a.node_ == b.node_) {
    return true;
  }
  if (a.kind() != b.kind()) {
    return false;
  }
  switch (a.kind()) {
    case Kind::constant:
      return std::bit_cast<std::uint64_t>(a.value()) == std::bit_cast<std::uint64_t>(b.value());
    case Kind::pow:
      if (a.exponent() != b.exponent()) {
        return false;
      }
      break;
    default:
      break;
  }
  const auto ca = a.children();
  const auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

double evaluate(const Expr& e, double x, double t) {
  switch (e.kind()) {
    case Kind::constant:
      return e.value();
    case Kind::var_x:
      return x;
    case Kind::var_t:
      return t;
    case Kind::pi:
      return detail::pi_value;
    case Kind::pow:
      return detail::ipow(evaluate(e.child(0), x, t), e.exponent());
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div: {
      const double a = evaluate(e.child(0), x, t);
      const double b = evaluate(e.child(1), x, t);
      return detail::apply_binary(e.kind(), a, b);
    }
    default:
      return detail::apply_unary(e.kind(), evaluate(e.child(0), x, t));
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength of the printed form. A literal with a leading minus sign
// prints at unary level.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::add:
    case Kind::sub:
      return 1;
    case Kind::mul:
    case Kind::div:
      return 2;
    case Kind::neg:
      return 3;
    case Kind::pow:
      return 4;
    case Kind::constant:
      return std::signbit(e.value()) ? 3 : 5;
    default:
      return 5;
  }
}

void format_number(double v, std::string& out) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) {
    out.push_back('(');
  }
  print(e, out);
  if (parens) {
    out.push_back(')');
  }
}

const char* function_name(Kind k) {
  switch (k) {
    case Kind::sin:
      return "sin";
    case Kind::cos:
      return "cos";
    case Kind::exp:
      return "exp";
    case Kind::tanh:
      return "tanh";
    default:
      return "?";
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::constant:
      format_number(e.value(), out);
      return;
    case Kind::var_x:
      out.push_back('x');
      return;
    case Kind::var_t:
      out.push_back('t');
      return;
    case Kind::pi:
      out += "pi";
      return;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div: {
      const int p = precedence(e);
      print_wrapped(e.child(0), precedence(e.child(0)) < p, out);
      switch (e.kind()) {
        case Kind::add:
          out += " + ";
          break;
        case Kind::sub:
          out += " - ";
          break;
        case Kind::mul:
          out += "*";
          break;
        default:
          out += "/";
          break;
      }
      print_wrapped(e.child(1), precedence(e.child(1)) <= p, out);
      return;
    }
    case Kind::neg: {
      out.push_back('-');
      const Expr& c = e.child(0);
      // "-2" would read back as a negative literal, so keep the node explicit.
      print_wrapped(c, c.kind() == Kind::constant || precedence(c) < 3, out);
      return;
    }
    case Kind::pow:
      print_wrapped(e.child(0), precedence(e.child(0)) < 5, out);
      out.push_back('^');
      out += std::to_string(e.exponent());
      return;
    default:
      out += function_name(e.kind());
      out.push_back('(');
      print(e.child(0), out);
      out.push_back(')');
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

}  // namespace dirac::expr
