#include "nbp/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbp/decoder_engine.hpp"

namespace nbp {

Tape::Id Tape::push(Op op, Id a, Id b, double aux, double value) {
  op_.push_back(op);
  a_.push_back(a);
  b_.push_back(b);
  aux_.push_back(aux);
  val_.push_back(value);
  return static_cast<Id>(op_.size() - 1);
}

Tape::Id Tape::leaf(double value) { return push(Op::leaf, -1, -1, 0.0, value); }

Tape::Id Tape::add(Id a, Id b) { return push(Op::add, a, b, 0.0, value(a) + value(b)); }

Tape::Id Tape::sub(Id a, Id b) { return push(Op::sub, a, b, 0.0, value(a) - value(b)); }

Tape::Id Tape::mul(Id a, Id b) { return push(Op::mul, a, b, 0.0, value(a) * value(b)); }

Tape::Id Tape::scale(Id a, double c) { return push(Op::scale, a, -1, c, c * value(a)); }

Tape::Id Tape::one_minus(Id a) { return push(Op::one_minus, a, -1, 0.0, 1.0 - value(a)); }

Tape::Id Tape::neg(Id a) { return push(Op::neg, a, -1, 0.0, -value(a)); }

Tape::Id Tape::clip(Id a, double bound) {
  const double x = value(a);
  note_branch(x < -bound ? 0x11u : (x > bound ? 0x12u : 0x10u));
  return push(Op::clip, a, -1, bound, std::clamp(x, -bound, bound));
}

Tape::Id Tape::abs_of(Id a) {
  const double x = value(a);
  note_branch(x < 0.0 ? 0x21u : (x > 0.0 ? 0x22u : 0x20u));
  return push(Op::abs, a, -1, 0.0, std::fabs(x));
}

Tape::Id Tape::relu(Id a) {
  const double x = value(a);
  note_branch(x > 0.0 ? 0x31u : 0x30u);
  return push(Op::relu, a, -1, 0.0, std::max(x, 0.0));
}

Tape::Id Tape::log_floor(Id a, double floor) {
  const double x = value(a);
  note_branch(x > floor ? 0x41u : 0x40u);
  return push(Op::log_floor, a, -1, floor, std::log(std::max(x, floor)));
}

Tape::Id Tape::tanh_half(Id a) {
  return push(Op::tanh_half, a, -1, 0.0, tanh_odd(0.5 * value(a)));
}

Tape::Id Tape::atanh_two(Id a) {
  return push(Op::atanh_two, a, -1, 0.0, 2.0 * atanh_odd(value(a)));
}

Tape::Id Tape::sigmoid_of(Id a) { return push(Op::sigmoid, a, -1, 0.0, sigmoid(value(a))); }

double Tape::compute(std::size_t i) const {
  const auto va = [&] { return val_[static_cast<std::size_t>(a_[i])]; };
  const auto vb = [&] { return val_[static_cast<std::size_t>(b_[i])]; };
  switch (op_[i]) {
    case Op::leaf: return val_[i];
    case Op::add: return va() + vb();
    case Op::sub: return va() - vb();
    case Op::mul: return va() * vb();
    case Op::scale: return aux_[i] * va();
    case Op::one_minus: return 1.0 - va();
    case Op::neg: return -va();
    case Op::clip: return std::clamp(va(), -aux_[i], aux_[i]);
    case Op::abs: return std::fabs(va());
    case Op::relu: return std::max(va(), 0.0);
    case Op::log_floor: return std::log(std::max(va(), aux_[i]));
    case Op::tanh_half: return tanh_odd(0.5 * va());
    case Op::atanh_two: return 2.0 * atanh_odd(va());
    case Op::sigmoid: return sigmoid(va());
  }
  throw std::logic_error("tape: unknown op");
}

void Tape::replay() {
  for (std::size_t i = 0; i < op_.size(); ++i) val_[i] = compute(i);
}

void Tape::backward(Id root) {
  if (root < 0 || static_cast<std::size_t>(root) >= op_.size())
    throw std::invalid_argument("tape: backward root out of range");
  adj_.assign(op_.size(), 0.0);
  adj_[static_cast<std::size_t>(root)] = 1.0;

  for (std::size_t i = op_.size(); i-- > 0;) {
    const double g = adj_[i];
    if (g == 0.0) continue;
    const auto ia = static_cast<std::size_t>(a_[i]);
    const auto ib = static_cast<std::size_t>(b_[i]);
    switch (op_[i]) {
      case Op::leaf:
        break;
      case Op::add:
        adj_[ia] += g;
        adj_[ib] += g;
        break;
      case Op::sub:
        adj_[ia] += g;
        adj_[ib] -= g;
        break;
      case Op::mul:
        adj_[ia] += g * val_[ib];
        adj_[ib] += g * val_[ia];
        break;
      case Op::scale:
        adj_[ia] += g * aux_[i];
        break;
      case Op::one_minus:
        adj_[ia] -= g;
        break;
      case Op::neg:
        adj_[ia] -= g;
        break;
      case Op::clip: {
        const double x = val_[ia];
        if (x > -aux_[i] && x < aux_[i]) adj_[ia] += g;
        break;
      }
      case Op::abs: {
        const double x = val_[ia];
        if (x > 0.0) adj_[ia] += g;
        else if (x < 0.0) adj_[ia] -= g;
        break;  // subgradient 0 at exactly 0
      }
      case Op::relu:
        if (val_[ia] > 0.0) adj_[ia] += g;
        break;
      case Op::log_floor:
        if (val_[ia] > aux_[i]) adj_[ia] += g / val_[ia];
        break;
      case Op::tanh_half: {
        const double y = val_[i];
        adj_[ia] += g * 0.5 * (1.0 - y * y);
        break;
      }
      case Op::atanh_two: {
        const double x = val_[ia];
        adj_[ia] += g * 2.0 / (1.0 - x * x);
        break;
      }
      case Op::sigmoid: {
        const double y = val_[i];
        adj_[ia] += g * y * (1.0 - y);
        break;
      }
    }
  }
}

void Tape::note_branch(std::uint64_t code) {
  // FNV-1a over the eight bytes of the code; order sensitive by design.
  for (int k = 0; k < 8; ++k) {
    branch_sig_ ^= (code >> (8 * k)) & 0xffu;
    branch_sig_ *= 1099511628211ull;
  }
}

void Tape::clear() {
  op_.clear();
  a_.clear();
  b_.clear();
  aux_.clear();
  val_.clear();
  adj_.clear();
  branch_sig_ = 14695981039346656037ull;
}

}  // namespace nbp
