#pragma once

#include <span>
#include <vector>

#include "nbp/linear_code.hpp"

namespace nbp {

// Exact reference decoders by full codebook enumeration; only for small k.
// Log-domain throughout, so extreme LLRs stay finite.
class ExhaustiveOracle {
 public:
  // Enumerates all 2^k codewords; refuses k > 20.
  explicit ExhaustiveOracle(const LinearCode& code);

  const std::vector<std::vector<std::uint8_t>>& codebook() const { return codebook_; }

  // Bitwise a-posteriori marginals log Pr(bit=1|y) / Pr(bit=0|y) given the
  // channel LLRs of one frame.
  std::vector<double> map_marginals_llr(std::span<const double> llr) const;

  // Pr(bit = 1 | y) per position.
  std::vector<double> map_posteriors(std::span<const double> llr) const;

  // Maximum-likelihood codeword; ties go to the first codeword in
  // enumeration order (information words counted in binary).
  std::vector<std::uint8_t> ml_codeword(std::span<const double> llr) const;

 private:
  std::vector<double> codeword_scores(std::span<const double> llr) const;

  const LinearCode* code_;
  std::vector<std::vector<std::uint8_t>> codebook_;
};

}  // namespace nbp
