#pragma once

#include <span>
#include <vector>

#include "nbp/decoder_engine.hpp"
#include "nbp/tape.hpp"

namespace nbp {

// Tape node ids for one full parameter set, grouped like Parameters. Leaves
// are recorded in flattening order so a flat gradient can be read back out
// by walking the groups in sequence.
struct ParamNodes {
  std::vector<Tape::Id> input_weights;
  std::vector<Tape::Id> edge_weights;
  std::vector<Tape::Id> offsets;
  std::vector<Tape::Id> output_self_weights;
  std::vector<Tape::Id> output_edge_weights;
  std::vector<Tape::Id> gamma_raw;

  std::vector<Tape::Id> flat() const;
};

ParamNodes make_param_nodes(Tape& tape, const Parameters& params);

// Per-iteration marginal nodes of one unrolled decode, [iteration][variable].
struct TapedDecode {
  std::vector<std::vector<Tape::Id>> marginals;
};

// Records the decoder onto a tape, mirroring DecoderEngine::decode operation
// by operation so the forward values agree with the engine to rounding. The
// unroll always runs the full iteration count; early termination is an
// inference-time shortcut with no place in a fixed computation graph.
class TapedDecoder {
 public:
  TapedDecoder(const LinearCode& code, DecoderSpec spec);

  const DecoderEngine& engine() const { return engine_; }

  TapedDecode unroll(Tape& tape, const ParamNodes& pn, std::span<const double> llr) const;

 private:
  void variable_update(Tape& tape, int layer, std::span<const Tape::Id> llr_ids,
                       std::span<const Tape::Id> c2v, const ParamNodes& pn,
                       std::span<Tape::Id> v2c) const;
  void check_update(Tape& tape, int layer, std::span<const Tape::Id> v2c, const ParamNodes& pn,
                    std::span<Tape::Id> raw) const;
  void marginalize(Tape& tape, int layer, std::span<const Tape::Id> llr_ids,
                   std::span<const Tape::Id> c2v, const ParamNodes& pn,
                   std::span<Tape::Id> out) const;

  DecoderEngine engine_;
};

}  // namespace nbp
