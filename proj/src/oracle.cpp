#include "nbp/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbp {

namespace {

// log(sum(exp(x))) over the entries selected by pick.
template <typename Pick>
double log_sum_exp(const std::vector<double>& xs, Pick pick) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (pick(i) && xs[i] > best) best = xs[i];
  }
  if (best == -std::numeric_limits<double>::infinity()) return best;
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (pick(i)) acc += std::exp(xs[i] - best);
  }
  return best + std::log(acc);
}

}  // namespace

ExhaustiveOracle::ExhaustiveOracle(const LinearCode& code) : code_(&code) {
  if (code.k() > 20)
    throw std::invalid_argument("ExhaustiveOracle: k=" + std::to_string(code.k()) + " is too large");
  const std::size_t count = std::size_t{1} << code.k();
  codebook_.reserve(count);
  std::vector<std::uint8_t> info(code.k(), 0);
  for (std::size_t w = 0; w < count; ++w) {
    for (int j = 0; j < code.k(); ++j) info[j] = static_cast<std::uint8_t>((w >> j) & 1);
    codebook_.push_back(code.encode(info));
  }
}

std::vector<double> ExhaustiveOracle::codeword_scores(std::span<const double> llr) const {
  if (static_cast<int>(llr.size()) != code_->n())
    throw std::invalid_argument("oracle: LLR length does not match the code length");
  // log P(y|c) - log P(y|0) = sum over set bits of the channel LLR.
  std::vector<double> scores(codebook_.size(), 0.0);
  for (std::size_t w = 0; w < codebook_.size(); ++w) {
    double s = 0.0;
    for (int v = 0; v < code_->n(); ++v) {
      if (codebook_[w][v]) s += llr[v];
    }
    scores[w] = s;
  }
  return scores;
}

std::vector<double> ExhaustiveOracle::map_marginals_llr(std::span<const double> llr) const {
  const auto scores = codeword_scores(llr);
  std::vector<double> out(code_->n());
  for (int v = 0; v < code_->n(); ++v) {
    const double l1 = log_sum_exp(scores, [&](std::size_t w) { return codebook_[w][v] != 0; });
    const double l0 = log_sum_exp(scores, [&](std::size_t w) { return codebook_[w][v] == 0; });
    out[v] = l1 - l0;
  }
  return out;
}

std::vector<double> ExhaustiveOracle::map_posteriors(std::span<const double> llr) const {
  auto out = map_marginals_llr(llr);
  for (auto& x : out) x = 1.0 / (1.0 + std::exp(-x));
  return out;
}

std::vector<std::uint8_t> ExhaustiveOracle::ml_codeword(std::span<const double> llr) const {
  const auto scores = codeword_scores(llr);
  std::size_t best = 0;
  for (std::size_t w = 1; w < scores.size(); ++w) {
    if (scores[w] > scores[best]) best = w;
  }
  return codebook_[best];
}

}  // namespace nbp
