#include <algorithm>
#include <array>
#include <stdexcept>

#include "dirac/expr.hpp"
#include "scalar_ops.hpp"

namespace dirac::expr {

namespace {

struct Emitter {
  EvalPlan::Instr instr(EvalPlan::Op op, Kind kind = Kind::constant, std::int32_t arg = 0) {
    return EvalPlan::Instr{op, kind, arg};
  }

  // Children are emitted left to right, matching the operand evaluation order
  // of the tree walk.
  void emit(const Expr& e) {
    switch (e.kind()) {
      case Kind::constant:
        push_const(e.value());
        return;
      case Kind::pi:
        push_const(detail::pi_value);
        return;
      case Kind::var_x:
        tape.push_back(instr(EvalPlan::Op::load_x));
        grow(1);
        return;
      case Kind::var_t:
        tape.push_back(instr(EvalPlan::Op::load_t));
        grow(1);
        return;
      case Kind::pow:
        emit(e.child(0));
        tape.push_back(instr(EvalPlan::Op::pow, Kind::pow, e.exponent()));
        return;
      case Kind::add:
      case Kind::sub:
      case Kind::mul:
      case Kind::div:
        emit(e.child(0));
        emit_binary(e.kind(), e.child(1));
        return;
      default:
        emit(e.child(0));
        tape.push_back(instr(EvalPlan::Op::unary, e.kind()));
        return;
    }
  }

  // A leaf right operand is folded into the instruction instead of being
  // pushed; the operation and its operand order are unchanged.
  void emit_binary(Kind kind, const Expr& rhs) {
    switch (rhs.kind()) {
      case Kind::constant:
      case Kind::pi:
        tape.push_back(instr(EvalPlan::Op::binary_const, kind,
                             static_cast<std::int32_t>(pool.size())));
        pool.push_back(rhs.kind() == Kind::pi ? detail::pi_value : rhs.value());
        return;
      case Kind::var_x:
        tape.push_back(instr(EvalPlan::Op::binary_x, kind));
        return;
      case Kind::var_t:
        tape.push_back(instr(EvalPlan::Op::binary_t, kind));
        return;
      default:
        emit(rhs);
        tape.push_back(instr(EvalPlan::Op::binary, kind));
        --depth;
        return;
    }
  }

  void push_const(double v) {
    tape.push_back(instr(EvalPlan::Op::push_const, Kind::constant,
                         static_cast<std::int32_t>(pool.size())));
    pool.push_back(v);
    grow(1);
  }

  void grow(std::size_t n) {
    depth += n;
    max_depth = std::max(max_depth, depth);
  }

  std::vector<EvalPlan::Instr> tape;
  std::vector<double> pool;
  std::size_t depth = 0;
  std::size_t max_depth = 0;
};

// lhs[l] = lhs[l] (op) rhs(l). The switch sits outside the lane loop so each
// case is a straight loop the compiler can vectorise.
template <class Rhs>
void binary_lanes(Kind kind, double* lhs, std::size_t lanes, Rhs rhs) {
  switch (kind) {
    case Kind::add:
      for (std::size_t l = 0; l < lanes; ++l) {
        lhs[l] = detail::apply_binary(Kind::add, lhs[l], rhs(l));
      }
      return;
    case Kind::sub:
      for (std::size_t l = 0; l < lanes; ++l) {
        lhs[l] = detail::apply_binary(Kind::sub, lhs[l], rhs(l));
      }
      return;
    case Kind::mul:
      for (std::size_t l = 0; l < lanes; ++l) {
        lhs[l] = detail::apply_binary(Kind::mul, lhs[l], rhs(l));
      }
      return;
    default:
      for (std::size_t l = 0; l < lanes; ++l) {
        lhs[l] = detail::apply_binary(kind, lhs[l], rhs(l));
      }
      return;
  }
}

}  // namespace

EvalPlan compile(const Expr& e) {
  Emitter em;
  em.emit(e);
  EvalPlan plan;
  plan.tape_ = std::move(em.tape);
  plan.pool_ = std::move(em.pool);
  plan.slots_ = em.max_depth;
  return plan;
}

double EvalPlan::evaluate(double x, double t, std::span<double> scratch) const {
  if (scratch.size() < slots_) {
    throw std::invalid_argument("EvalPlan::evaluate: scratch smaller than slot_count()");
  }
  if (tape_.empty()) {
    return 0.0;
  }
  double* sp = scratch.data();  // next free slot
  for (const Instr& in : tape_) {
    switch (in.op) {
      case Op::push_const:
        *sp++ = pool_[static_cast<std::size_t>(in.arg)];
        break;
      case Op::load_x:
        *sp++ = x;
        break;
      case Op::load_t:
        *sp++ = t;
        break;
      case Op::unary:
        sp[-1] = detail::apply_unary(in.kind, sp[-1]);
        break;
      case Op::pow:
        sp[-1] = detail::ipow(sp[-1], in.arg);
        break;
      case Op::binary:
        --sp;
        sp[-1] = detail::apply_binary(in.kind, sp[-1], sp[0]);
        break;
      case Op::binary_const:
        sp[-1] = detail::apply_binary(in.kind, sp[-1], pool_[static_cast<std::size_t>(in.arg)]);
        break;
      case Op::binary_x:
        sp[-1] = detail::apply_binary(in.kind, sp[-1], x);
        break;
      case Op::binary_t:
        sp[-1] = detail::apply_binary(in.kind, sp[-1], t);
        break;
    }
  }
  return scratch[0];
}

double EvalPlan::evaluate(double x, double t) const {
  constexpr std::size_t inline_slots = 64;
  if (slots_ <= inline_slots) {
    std::array<double, inline_slots> scratch;
    return evaluate(x, t, scratch);
  }
  std::vector<double> scratch(slots_);
  return evaluate(x, t, scratch);
}

void EvalPlan::evaluate_many(std::span<const double> xs, double t, std::span<double> out) const {
  if (xs.size() != out.size()) {
    throw std::invalid_argument("EvalPlan::evaluate_many: input and output sizes differ");
  }
  if (tape_.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  constexpr std::size_t block = 256;
  // Slot s of lane l lives at stack[s * block + l].
  std::vector<double> stack(slots_ * block);
  for (std::size_t begin = 0; begin < xs.size(); begin += block) {
    const std::size_t lanes = std::min(block, xs.size() - begin);
    const double* x = xs.data() + begin;
    std::size_t depth = 0;  // number of occupied slots
    for (const Instr& in : tape_) {
      double* top = stack.data() + (depth == 0 ? 0 : (depth - 1) * block);
      switch (in.op) {
        case Op::push_const: {
          const double v = pool_[static_cast<std::size_t>(in.arg)];
          std::fill_n(stack.data() + depth * block, lanes, v);
          ++depth;
          break;
        }
        case Op::load_x:
          std::copy_n(x, lanes, stack.data() + depth * block);
          ++depth;
          break;
        case Op::load_t:
          std::fill_n(stack.data() + depth * block, lanes, t);
          ++depth;
          break;
        case Op::unary:
          for (std::size_t l = 0; l < lanes; ++l) {
            top[l] = detail::apply_unary(in.kind, top[l]);
          }
          break;
        case Op::pow:
          for (std::size_t l = 0; l < lanes; ++l) {
            top[l] = detail::ipow(top[l], in.arg);
          }
          break;
        case Op::binary: {
          const double* rhs = top;
          binary_lanes(in.kind, top - block, lanes, [rhs](std::size_t l) { return rhs[l]; });
          --depth;
          break;
        }
        case Op::binary_const: {
          const double v = pool_[static_cast<std::size_t>(in.arg)];
          binary_lanes(in.kind, top, lanes, [v](std::size_t) { return v; });
          break;
        }
        case Op::binary_x:
          binary_lanes(in.kind, top, lanes, [x](std::size_t l) { return x[l]; });
          break;
        case Op::binary_t:
          binary_lanes(in.kind, top, lanes, [t](std::size_t) { return t; });
          break;
      }
    }
    std::copy_n(stack.data(), lanes, out.data() + begin);
  }
}

}  // namespace dirac::expr
