#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirac::expr {

enum class Kind : std::uint8_t {
  constant,
  var_x,
  var_t,
  pi,
  add,
  sub,
  mul,
  div,
  neg,
  pow,
  sin,
  cos,
  exp,
  tanh,
};

enum class Var : std::uint8_t { x, t };

/// Number of child expressions for a node kind.
int arity(Kind kind) noexcept;

/// Immutable scalar expression tree in the variables x and t.
///
/// Nodes are shared; copying an Expr is cheap and never deep-copies. The
/// factory functions build exactly the node requested (no simplification),
/// so `parse(to_string(e)) == e` holds structurally.
class Expr {
 public:
  /// Default-constructed expression is the constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(Var v);
  static Expr pi();
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr neg(Expr a);
  static Expr pow(Expr base, int exponent);
  static Expr sin(Expr a);
  static Expr cos(Expr a);
  static Expr exp(Expr a);
  static Expr tanh(Expr a);
  /// Builds a node of the given unary/binary kind from its children.
  static Expr make(Kind kind, std::span<const Expr> children, int exponent = 0);

  Kind kind() const noexcept;
  /// Literal value; meaningful for Kind::constant only.
  double value() const noexcept;
  /// Integer exponent; meaningful for Kind::pow only.
  int exponent() const noexcept;
  std::span<const Expr> children() const noexcept;
  const Expr& child(std::size_t i) const;

  bool is_constant(double v) const noexcept;
  std::size_t node_count() const noexcept;
  std::size_t depth() const noexcept;

  /// Structural equality. Constants compare by bit pattern.
  friend bool operator==(const Expr& a, const Expr& b) noexcept;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Parses the infix grammar: `+ -` < `* /` < unary `-` < `^` (integer
/// exponent), parentheses, `sin cos exp tanh` calls, variables `x` `t`, and
/// the literal `pi`. Throws ParseError.
Expr parse(std::string_view source);

/// Prints with minimal parentheses. Literals use the shortest decimal form
/// that round-trips.
std::string to_string(const Expr& e);

Expr differentiate(const Expr& e, Var v);

/// Constant folding plus the exact identities 0+e, e+0, e-0, 1*e, e*1, 0*e,
/// e*0, e/1, e^1, e^0, --e. Folding is skipped when it would yield a
/// non-finite literal.
Expr simplify(const Expr& e);

/// Tree-walk evaluation.
double evaluate(const Expr& e, double x, double t);

/// Postfix instruction tape compiled from an Expr. Evaluation performs the
/// same floating-point operations in the same order as the tree walk, so
/// results are bit-identical.
class EvalPlan {
 public:
  /// binary_const/x/t apply a binary node whose right operand is a leaf.
  enum class Op : std::uint8_t {
    push_const,
    load_x,
    load_t,
    unary,
    binary,
    binary_const,
    binary_x,
    binary_t,
    pow
  };

  struct Instr {
    Op op;
    Kind kind;          // unary/binary node kind
    std::int32_t arg;   // constant-pool index or exponent
  };

  EvalPlan() = default;

  /// `scratch` must provide at least slot_count() doubles.
  double evaluate(double x, double t, std::span<double> scratch) const;
  double evaluate(double x, double t) const;

  /// out[j] = evaluate(xs[j], t) for every j, bit-identical to the per-point
  /// calls. Nodes are processed in blocks, one instruction at a time, so the
  /// dispatch cost is shared by the whole block. Throws std::invalid_argument
  /// when the spans differ in size.
  void evaluate_many(std::span<const double> xs, double t, std::span<double> out) const;

  std::span<const Instr> instructions() const noexcept { return tape_; }
  std::span<const double> constants() const noexcept { return pool_; }
  std::size_t slot_count() const noexcept { return slots_; }

 private:
  friend EvalPlan compile(const Expr& e);
  std::vector<Instr> tape_;
  std::vector<double> pool_;
  std::size_t slots_ = 0;
};

EvalPlan compile(const Expr& e);

}  // namespace dirac::expr
