#include "nbp/mrrd.hpp"

#include <chrono>
#include <stdexcept>
#include <utility>

namespace nbp {

namespace {

DecoderSpec block_spec(DecoderSpec spec, int inner_iterations) {
  spec.iterations = inner_iterations;
  spec.early_stop = false;  // syndrome checks happen at block boundaries
  return spec;
}

MrrdConfig checked(MrrdConfig config) {
  config.validate();
  return config;
}

}  // namespace

void MrrdConfig::validate() const {
  if (branches < 1) throw std::invalid_argument("MrrdConfig: branches must be at least 1");
  if (blocks < 1) throw std::invalid_argument("MrrdConfig: blocks must be at least 1");
  if (inner_iterations < 1)
    throw std::invalid_argument("MrrdConfig: inner_iterations must be at least 1");
}

MrrdDecoder::MrrdDecoder(const LinearCode& code, MrrdConfig config)
    : code_(&code),
      config_(checked(std::move(config))),
      engine_(code, block_spec(config_.inner_spec, config_.inner_iterations)),
      sampler_(code) {}

std::optional<MrrdCandidate> MrrdDecoder::run_branch(RngStream& rng, std::span<const double> llr,
                                                     const Parameters& params, int branch,
                                                     MrrdStats& stats) const {
  Permutation cum = Permutation::identity(code_->n());
  std::vector<double> soft(llr.begin(), llr.end());

  for (int block = 1; block <= config_.blocks; ++block) {
    const DecodeOutput out = engine_.decode(soft, params);
    stats.iterations += config_.inner_iterations;
    stats.blocks += 1;

    if (out.valid) {
      // Automorphisms keep the code fixed, so the branch-frame word and its
      // un-permuted image must both be codewords.
      std::vector<std::uint8_t> word(code_->n());
      for (int i = 0; i < code_->n(); ++i)
        word[static_cast<std::size_t>(i)] = out.hard_decisions[static_cast<std::size_t>(cum[i])];
      if (!code_->is_codeword(word))
        throw std::logic_error("mrrd: candidate failed the original-frame parity check");
      return MrrdCandidate{std::move(word), std::move(cum), branch, block};
    }

    if (block < config_.blocks) {
      const Permutation pi = sampler_.sample(rng);
      soft = pi.apply(config_.extrinsic_carry ? out.marginals.back() : soft);
      cum = cum.then(pi);
    }
  }
  return std::nullopt;
}

std::vector<std::uint8_t> MrrdDecoder::decode(RngStream& rng, std::span<const double> llr,
                                              const Parameters& params, MrrdStats& stats) const {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t frame_seed = rng.next_u64();

  std::vector<MrrdCandidate> pool;
  for (int b = 0; b < config_.branches; ++b) {
    RngStream branch_rng(frame_seed, static_cast<std::uint64_t>(b));
    if (auto cand = run_branch(branch_rng, llr, params, b, stats)) pool.push_back(std::move(*cand));
  }
  stats.candidate_branches += static_cast<long long>(pool.size());

  std::vector<std::uint8_t> result;
  if (pool.empty()) {
    result = engine_.decode(llr, params).hard_decisions;
    stats.iterations += config_.inner_iterations;
  } else {
    // The channel symbols enter the likelihood only through -2 y / sigma^2,
    // so any negative multiple of the LLRs ranks candidates identically.
    std::vector<double> surrogate(llr.size());
    for (std::size_t i = 0; i < llr.size(); ++i) surrogate[i] = -0.5 * llr[i];
    result = least_metric_select(pool, surrogate).codeword;
  }

  stats.elapsed_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double bpsk_correlation(std::span<const double> y, std::span<const std::uint8_t> bits) {
  if (y.size() != bits.size())
    throw std::invalid_argument("bpsk_correlation: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += bits[i] ? -y[i] : y[i];
  return acc;
}

const MrrdCandidate& least_metric_select(std::span<const MrrdCandidate> candidates,
                                         std::span<const double> y) {
  if (candidates.empty()) throw std::invalid_argument("least_metric_select: no candidates");
  std::size_t best = 0;
  double best_corr = bpsk_correlation(y, candidates[0].codeword);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double corr = bpsk_correlation(y, candidates[i].codeword);
    if (corr > best_corr) {
      best = i;
      best_corr = corr;
    }
  }
  return candidates[best];
}

}  // namespace nbp
