#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nbp/channel.hpp"
#include "nbp/decoder_engine.hpp"
#include "nbp/linear_code.hpp"
#include "nbp/parameters.hpp"
#include "nbp/permutation.hpp"

namespace nbp {

// Parallel redundant decoding: m branches, each a chain of short inner decoder
// runs separated by random code automorphisms. A branch stops at the first
// valid codeword; the pooled candidates compete by BPSK correlation.
struct MrrdConfig {
  int branches = 1;           // m
  int blocks = 30;            // c, chain length per branch
  int inner_iterations = 2;   // decoder iterations per block
  DecoderSpec inner_spec;     // its iteration count and early stop are overridden
  // Feed each block the previous block's marginals (channel LLR plus
  // accumulated extrinsic) instead of the permuted channel LLRs alone.
  bool extrinsic_carry = false;

  void validate() const;
};

struct MrrdCandidate {
  std::vector<std::uint8_t> codeword;  // original coordinate frame
  Permutation cumulative;              // original frame -> branch frame
  int branch = 0;
  int block = 0;  // 1-based block where the codeword appeared
};

// Accumulating counters: decode() adds to the struct it is given, so one
// instance can aggregate a whole measurement run.
struct MrrdStats {
  long long iterations = 0;  // inner iterations executed, fallback included
  long long blocks = 0;      // branch blocks executed
  long long candidate_branches = 0;
  double elapsed_seconds = 0.0;
};

class MrrdDecoder {
 public:
  MrrdDecoder(const LinearCode& code, MrrdConfig config);

  const MrrdConfig& config() const { return config_; }
  const DecoderEngine& engine() const { return engine_; }

  // One chain of up to c blocks. Decodes the current soft values, checks the
  // syndrome, and either returns the un-permuted codeword or permutes the
  // soft state with a fresh automorphism and continues.
  std::optional<MrrdCandidate> run_branch(RngStream& rng, std::span<const double> llr,
                                          const Parameters& params, int branch,
                                          MrrdStats& stats) const;

  // Decodes one frame. Branch b draws its permutations from the stream
  // (frame_seed, b) where frame_seed is one draw from rng, so a larger branch
  // count replays the smaller one's branches unchanged and only adds to the
  // candidate pool. Without any candidate this falls back to the hard
  // decision of one fresh inner decode of the unpermuted LLRs.
  std::vector<std::uint8_t> decode(RngStream& rng, std::span<const double> llr,
                                   const Parameters& params, MrrdStats& stats) const;

 private:
  const LinearCode* code_;
  MrrdConfig config_;
  DecoderEngine engine_;  // inner spec with T = inner_iterations, no early stop
  AutomorphismSampler sampler_;
};

// Correlation of the received symbols with the BPSK image of the bits,
// sum of y_v * (1 - 2 c_v). Up to constants this orders candidates by
// Gaussian likelihood.
double bpsk_correlation(std::span<const double> y, std::span<const std::uint8_t> bits);

// Highest-correlation candidate; ties keep the earliest in pool order, which
// decode() fills in ascending branch order. Throws on an empty pool.
const MrrdCandidate& least_metric_select(std::span<const MrrdCandidate> candidates,
                                         std::span<const double> y);

}  // namespace nbp
