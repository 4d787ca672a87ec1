#include "nbp/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace nbp {

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("optimizer: learning rate must be positive");
  if (minibatch_size < 1) throw std::invalid_argument("optimizer: minibatch size must be at least 1");
}

std::string OptimizerConfig::kind_name() const {
  switch (kind) {
    case Kind::sgd: return "sgd";
    case Kind::rmsprop: return "rmsprop";
    case Kind::adam: return "adam";
  }
  return "?";
}

OptimizerConfig::Kind optimizer_kind_from_name(const std::string& name) {
  if (name == "sgd") return OptimizerConfig::Kind::sgd;
  if (name == "rmsprop") return OptimizerConfig::Kind::rmsprop;
  if (name == "adam") return OptimizerConfig::Kind::adam;
  throw std::invalid_argument("optimizer: unknown kind '" + name + "'");
}

void optimizer_step(const OptimizerConfig& config, OptimizerState& state,
                    std::span<double> params, std::span<const double> grads,
                    std::span<const std::uint8_t> trainable) {
  config.validate();
  if (params.size() != grads.size())
    throw std::invalid_argument("optimizer: parameter and gradient sizes disagree");
  if (!trainable.empty() && trainable.size() != params.size())
    throw std::invalid_argument("optimizer: trainable mask size disagrees");

  const std::size_t n = params.size();
  if (state.first.size() != n) state.first.assign(n, 0.0);
  if (state.second.size() != n) state.second.assign(n, 0.0);
  state.step += 1;

  const double lr = config.learning_rate;
  for (std::size_t i = 0; i < n; ++i) {
    if (!trainable.empty() && !trainable[i]) continue;
    const double g = grads[i];
    switch (config.kind) {
      case OptimizerConfig::Kind::sgd:
        params[i] -= lr * g;
        break;
      case OptimizerConfig::Kind::rmsprop: {
        state.second[i] = config.rms_decay * state.second[i] + (1.0 - config.rms_decay) * g * g;
        params[i] -= lr * g / std::sqrt(state.second[i] + config.rms_epsilon);
        break;
      }
      case OptimizerConfig::Kind::adam: {
        state.first[i] = config.adam_beta1 * state.first[i] + (1.0 - config.adam_beta1) * g;
        state.second[i] = config.adam_beta2 * state.second[i] + (1.0 - config.adam_beta2) * g * g;
        const double m_hat =
            state.first[i] / (1.0 - std::pow(config.adam_beta1, static_cast<double>(state.step)));
        const double v_hat =
            state.second[i] / (1.0 - std::pow(config.adam_beta2, static_cast<double>(state.step)));
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
        break;
      }
    }
  }
}

}  // namespace nbp
