#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbp/batch.hpp"
#include "nbp/loss.hpp"
#include "nbp/optimizer.hpp"
#include "nbp/taped_decoder.hpp"

namespace nbp {

// One recorded forward pass over a whole minibatch: the mean frame loss and
// the parameter leaves in flattening order. Reusable across steps; the tape
// keeps its capacity.
struct BatchTape {
  Tape tape;
  Tape::Id loss_id = -1;
  std::vector<Tape::Id> param_ids;

  double loss() const { return tape.value(loss_id); }
};

// Records decoder plus loss for every frame and averages. The decoder spec
// must have early termination disabled: a fixed graph cannot cut iterations.
void forward_with_tape(const TapedDecoder& decoder, const Parameters& params,
                       const LossConfig& loss, const Batch& batch, BatchTape& out);
BatchTape forward_with_tape(const LinearCode& code, const DecoderSpec& spec,
                            const Parameters& params, const LossConfig& loss, const Batch& batch);

// Flat gradient in parameter flattening order, one entry per parameter.
std::vector<double> backward(BatchTape& bt);

// Tape-free loss of the same batch through DecoderEngine::decode; the dual
// path for testing forward_with_tape.
double decode_loss(const DecoderEngine& engine, const Parameters& params, const LossConfig& loss,
                   const Batch& batch);

struct TrainConfig {
  LossConfig loss;
  OptimizerConfig optimizer;
  int snr_lo_db = 1;
  int snr_hi_db = 8;
  std::uint64_t seed = 1;
};

struct TracePoint {
  int step = 0;
  double loss = 0.0;
  double gamma = 0.0;  // squashed relaxation factor, when the spec has one
  bool has_gamma = false;
};

struct TrainResult {
  Parameters params;
  std::vector<TracePoint> trace;
};

// Runs the step budget from config.optimizer.steps. Deterministic for a
// fixed seed; throws on a non-finite loss naming the offending step.
TrainResult train(const LinearCode& code, const DecoderSpec& spec, const TrainConfig& config,
                  const Parameters* init = nullptr);

// CSV "step,loss" with a gamma column when the spec carries one.
std::string emit_loss_trace_csv(const std::vector<TracePoint>& trace);

// Key-value run description: code, spec, optimizer, seed, budget.
std::string emit_train_manifest(const LinearCode& code, const DecoderSpec& spec,
                                const TrainConfig& config);

}  // namespace nbp
