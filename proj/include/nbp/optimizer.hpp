#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nbp {

struct OptimizerConfig {
  enum class Kind { sgd, rmsprop, adam };
  Kind kind = Kind::rmsprop;
  double learning_rate = 0.001;
  int minibatch_size = 120;
  int steps = 0;  // step budget for a training run

  double rms_decay = 0.9;
  double rms_epsilon = 1e-10;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const;
  std::string kind_name() const;
};

OptimizerConfig::Kind optimizer_kind_from_name(const std::string& name);

// Per-parameter accumulators; sized on first use, zero initialized.
struct OptimizerState {
  std::vector<double> first;   // Adam first moment
  std::vector<double> second;  // RMSProp / Adam squared-gradient average
  long long step = 0;
};

// One update in place. Slots with a zero trainable flag are left untouched,
// including their accumulator state; an empty mask trains everything.
void optimizer_step(const OptimizerConfig& config, OptimizerState& state,
                    std::span<double> params, std::span<const double> grads,
                    std::span<const std::uint8_t> trainable);

}  // namespace nbp
