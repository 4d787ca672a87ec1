#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nbp/tape.hpp"
#include "nbp/taped_decoder.hpp"

namespace nbp {

// Floor inside the loss logarithms; log(max(x, kLogFloor)) never overflows
// and contributes zero gradient when the floor is active.
inline constexpr double kLogFloor = 1e-12;

// Which decoder iterations feed the training loss. Multiloss taps every
// listed iteration's marginalization; an empty tap list means all of them.
struct LossConfig {
  enum class Kind { final_iteration, multiloss };
  Kind kind = Kind::multiloss;
  std::vector<int> taps;  // 1-based iteration indices, ascending

  void validate(int iterations) const;
  std::vector<int> effective_taps(int iterations) const;
};

// Mean cross entropy over the word: -(1/N) sum y log o + (1-y) log(1-o).
// Inputs are probabilities of bit 1; values outside [0, 1] are rejected.
double cross_entropy(std::span<const double> probabilities, std::span<const std::uint8_t> targets);

// Sum of per-iteration cross entropies over the tapped iterations; each term
// keeps its own 1/N, nothing divides by the number of taps.
double multiloss_value(const std::vector<std::vector<double>>& probabilities_per_iteration,
                       std::span<const std::uint8_t> targets, const std::vector<int>& taps);

std::vector<double> probabilities_from_marginals(std::span<const double> marginals_llr);

// Taped mirrors of the two evaluations above, built from marginal nodes in
// the LLR domain. The arithmetic order matches the plain functions term for
// term so the dual-path equivalence holds to rounding.
Tape::Id taped_cross_entropy(Tape& tape, std::span<const Tape::Id> marginals,
                             std::span<const std::uint8_t> targets);
Tape::Id taped_frame_loss(Tape& tape, const TapedDecode& decode,
                          std::span<const std::uint8_t> targets, const LossConfig& config);

}  // namespace nbp
