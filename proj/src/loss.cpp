#include "nbp/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nbp/decoder_engine.hpp"

namespace nbp {

void LossConfig::validate(int iterations) const {
  if (kind == Kind::final_iteration) {
    if (!taps.empty()) throw std::invalid_argument("loss: taps apply to multiloss only");
    return;
  }
  int prev = 0;
  for (int t : taps) {
    if (t <= prev) throw std::invalid_argument("loss: taps must be ascending and unique");
    if (t > iterations)
      throw std::invalid_argument("loss: tap " + std::to_string(t) +
                                  " exceeds the iteration count");
    prev = t;
  }
}

std::vector<int> LossConfig::effective_taps(int iterations) const {
  validate(iterations);
  if (kind == Kind::final_iteration) return {iterations};
  if (!taps.empty()) return taps;
  std::vector<int> all(static_cast<std::size_t>(iterations));
  for (int t = 1; t <= iterations; ++t) all[static_cast<std::size_t>(t - 1)] = t;
  return all;
}

double cross_entropy(std::span<const double> probabilities,
                     std::span<const std::uint8_t> targets) {
  if (probabilities.empty() || probabilities.size() != targets.size())
    throw std::invalid_argument("cross_entropy: probability and target sizes disagree");
  for (double o : probabilities)
    if (!(o >= 0.0 && o <= 1.0))
      throw std::invalid_argument("cross_entropy: output probability outside the unit interval");

  double acc = 0.0;
  for (std::size_t v = 0; v < probabilities.size(); ++v) {
    const double o = probabilities[v];
    const double term =
        targets[v] ? std::log(std::max(o, kLogFloor)) : std::log(std::max(1.0 - o, kLogFloor));
    acc = v == 0 ? term : acc + term;
  }
  return (-1.0 / static_cast<double>(probabilities.size())) * acc;
}

double multiloss_value(const std::vector<std::vector<double>>& probabilities_per_iteration,
                       std::span<const std::uint8_t> targets, const std::vector<int>& taps) {
  if (taps.empty()) throw std::invalid_argument("multiloss: no tapped iterations");
  double total = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const int t = taps[i];
    if (t < 1 || static_cast<std::size_t>(t) > probabilities_per_iteration.size())
      throw std::invalid_argument("multiloss: tap " + std::to_string(t) + " has no outputs");
    const double ce =
        cross_entropy(probabilities_per_iteration[static_cast<std::size_t>(t - 1)], targets);
    total = i == 0 ? ce : total + ce;
  }
  return total;
}

std::vector<double> probabilities_from_marginals(std::span<const double> marginals_llr) {
  std::vector<double> p(marginals_llr.size());
  for (std::size_t v = 0; v < marginals_llr.size(); ++v) p[v] = sigmoid(marginals_llr[v]);
  return p;
}

Tape::Id taped_cross_entropy(Tape& tape, std::span<const Tape::Id> marginals,
                             std::span<const std::uint8_t> targets) {
  if (marginals.empty() || marginals.size() != targets.size())
    throw std::invalid_argument("cross_entropy: probability and target sizes disagree");
  Tape::Id acc = -1;
  for (std::size_t v = 0; v < marginals.size(); ++v) {
    const Tape::Id o = tape.sigmoid_of(marginals[v]);
    const Tape::Id term =
        targets[v] ? tape.log_floor(o, kLogFloor) : tape.log_floor(tape.one_minus(o), kLogFloor);
    acc = v == 0 ? term : tape.add(acc, term);
  }
  return tape.scale(acc, -1.0 / static_cast<double>(marginals.size()));
}

Tape::Id taped_frame_loss(Tape& tape, const TapedDecode& decode,
                          std::span<const std::uint8_t> targets, const LossConfig& config) {
  const int iterations = static_cast<int>(decode.marginals.size());
  const std::vector<int> taps = config.effective_taps(iterations);
  Tape::Id total = -1;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const auto& m = decode.marginals[static_cast<std::size_t>(taps[i] - 1)];
    const Tape::Id ce = taped_cross_entropy(tape, m, targets);
    total = i == 0 ? ce : tape.add(total, ce);
  }
  return total;
}

}  // namespace nbp
