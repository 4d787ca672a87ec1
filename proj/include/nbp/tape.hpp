#pragma once

#include <cstdint>
#include <vector>

namespace nbp {

// Reverse-mode autodiff tape. Operations are recorded eagerly with their
// values; backward() walks the record once in exact reverse order. The op
// set is the closed list the unrolled decoders and the loss need, nothing
// generic beyond that.
//
// Kinked ops (clamps, |x|, max(x,0), the log floor) contribute a code to a
// running branch signature when recorded. Two evaluations with different
// signatures took different subgradient branches; finite-difference checks
// use this to exclude kink-adjacent points. Callers with selection logic of
// their own (min-sum argmin routing) fold their choices in via note_branch.
//
// Subgradient conventions at the kinks themselves: d|x|/dx is 0 at x = 0,
// max(x,0) has slope 0 at x = 0, clamps pass gradient only strictly inside
// their interval, the log floor passes only strictly above the floor.
class Tape {
 public:
  using Id = std::int32_t;

  Id leaf(double value);

  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);
  Id scale(Id a, double c);   // c * x
  Id one_minus(Id a);         // 1 - x
  Id neg(Id a);               // -x

  Id clip(Id a, double bound);  // std::clamp(x, -bound, bound)
  Id abs_of(Id a);              // std::fabs(x)
  Id relu(Id a);                // std::max(x, 0.0)
  Id log_floor(Id a, double floor);  // std::log(std::max(x, floor))

  Id tanh_half(Id a);   // tanh_odd(0.5 x)
  Id atanh_two(Id a);   // 2 atanh_odd(x); input must sit inside (-1, 1)
  Id sigmoid_of(Id a);  // 1 / (1 + exp(-x))

  double value(Id id) const { return val_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return op_.size(); }

  // Seeds the adjoint of `root` with 1 and propagates to every node.
  void backward(Id root);
  double adjoint(Id id) const { return adj_[static_cast<std::size_t>(id)]; }

  // Recomputes every recorded value in order; reproduces them bit for bit.
  void replay();

  void note_branch(std::uint64_t code);
  std::uint64_t branch_signature() const { return branch_sig_; }

  // Drops the record but keeps allocated capacity for reuse across batches.
  void clear();

 private:
  enum class Op : std::uint8_t {
    leaf, add, sub, mul, scale, one_minus, neg,
    clip, abs, relu, log_floor, tanh_half, atanh_two, sigmoid,
  };

  Id push(Op op, Id a, Id b, double aux, double value);
  double compute(std::size_t i) const;

  std::vector<Op> op_;
  std::vector<Id> a_, b_;
  std::vector<double> aux_;  // scale factor, clamp bound, or log floor
  std::vector<double> val_;
  std::vector<double> adj_;
  std::uint64_t branch_sig_ = 14695981039346656037ull;  // FNV-1a offset basis
};

}  // namespace nbp
