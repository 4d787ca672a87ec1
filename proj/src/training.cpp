#include "nbp/training.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nbp/text_format.hpp"

namespace nbp {

void forward_with_tape(const TapedDecoder& decoder, const Parameters& params,
                       const LossConfig& loss, const Batch& batch, BatchTape& out) {
  const DecoderSpec& spec = decoder.engine().spec();
  if (spec.early_stop)
    throw std::invalid_argument("forward_with_tape: disable early termination for training");
  if (batch.size() < 1) throw std::invalid_argument("forward_with_tape: empty batch");
  if (batch.n != decoder.engine().code().n())
    throw std::invalid_argument("forward_with_tape: batch length does not match the code");
  loss.validate(spec.iterations);
  validate_shapes(params, spec, decoder.engine().graph());

  out.tape.clear();
  const ParamNodes pn = make_param_nodes(out.tape, params);
  out.param_ids = pn.flat();

  Tape::Id total = -1;
  for (int f = 0; f < batch.size(); ++f) {
    const TapedDecode dec = decoder.unroll(out.tape, pn, batch.llr[static_cast<std::size_t>(f)]);
    const Tape::Id frame = taped_frame_loss(out.tape, dec, batch.targets, loss);
    total = f == 0 ? frame : out.tape.add(total, frame);
  }
  out.loss_id = out.tape.scale(total, 1.0 / static_cast<double>(batch.size()));
}

BatchTape forward_with_tape(const LinearCode& code, const DecoderSpec& spec,
                            const Parameters& params, const LossConfig& loss, const Batch& batch) {
  const TapedDecoder decoder(code, spec);
  BatchTape bt;
  forward_with_tape(decoder, params, loss, batch, bt);
  return bt;
}

std::vector<double> backward(BatchTape& bt) {
  bt.tape.backward(bt.loss_id);
  std::vector<double> grads(bt.param_ids.size());
  for (std::size_t i = 0; i < grads.size(); ++i) grads[i] = bt.tape.adjoint(bt.param_ids[i]);
  return grads;
}

double decode_loss(const DecoderEngine& engine, const Parameters& params, const LossConfig& loss,
                   const Batch& batch) {
  if (engine.spec().early_stop)
    throw std::invalid_argument("decode_loss: disable early termination for training");
  const std::vector<int> taps = loss.effective_taps(engine.spec().iterations);
  double total = 0.0;
  for (int f = 0; f < batch.size(); ++f) {
    const DecodeOutput out = engine.decode(batch.llr[static_cast<std::size_t>(f)], params);
    double frame = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const auto& marg = out.marginals[static_cast<std::size_t>(taps[i] - 1)];
      const double ce = cross_entropy(probabilities_from_marginals(marg), batch.targets);
      frame = i == 0 ? ce : frame + ce;
    }
    total = f == 0 ? frame : total + frame;
  }
  return (1.0 / static_cast<double>(batch.size())) * total;
}

namespace {

double squashed_gamma(const Parameters& params) {
  double acc = 0.0;
  for (double raw : params.gamma_raw) acc += sigmoid(raw);
  return acc / static_cast<double>(params.gamma_raw.size());
}

}  // namespace

TrainResult train(const LinearCode& code, const DecoderSpec& spec, const TrainConfig& config,
                  const Parameters* init) {
  config.optimizer.validate();
  if (config.optimizer.steps < 0) throw std::invalid_argument("train: negative step budget");

  DecoderSpec train_spec = spec;
  train_spec.early_stop = false;
  config.loss.validate(train_spec.iterations);

  const TapedDecoder decoder(code, train_spec);
  TrainResult result;
  result.params = init ? *init : decoder.engine().default_parameters();
  validate_shapes(result.params, train_spec, code.graph());

  std::vector<double> flat = flatten(result.params);
  const std::vector<std::uint8_t> mask = trainable_mask(result.params, train_spec);

  RngStream rng(config.seed, 0);
  BatchTape bt;
  OptimizerState state;
  result.trace.reserve(static_cast<std::size_t>(config.optimizer.steps));

  for (int step = 1; step <= config.optimizer.steps; ++step) {
    const Batch batch = sample_batch(rng, code, config.snr_lo_db, config.snr_hi_db,
                                     config.optimizer.minibatch_size);
    forward_with_tape(decoder, result.params, config.loss, batch, bt);
    const double loss = bt.loss();
    if (!std::isfinite(loss))
      throw std::runtime_error("train: loss diverged at step " + std::to_string(step));

    const std::vector<double> grads = backward(bt);
    optimizer_step(config.optimizer, state, flat, grads, mask);
    unflatten(result.params, flat);

    TracePoint point;
    point.step = step;
    point.loss = loss;
    if (!result.params.gamma_raw.empty()) {
      point.gamma = squashed_gamma(result.params);
      point.has_gamma = true;
    }
    result.trace.push_back(point);
  }
  return result;
}

std::string emit_loss_trace_csv(const std::vector<TracePoint>& trace) {
  const bool with_gamma = !trace.empty() && trace.front().has_gamma;
  std::string out = with_gamma ? "step,loss,gamma\n" : "step,loss\n";
  for (const TracePoint& p : trace) {
    out += std::to_string(p.step);
    out += ',';
    out += format_double(p.loss);
    if (with_gamma) {
      out += ',';
      out += format_double(p.gamma);
    }
    out += '\n';
  }
  return out;
}

std::string emit_train_manifest(const LinearCode& code, const DecoderSpec& spec,
                                const TrainConfig& config) {
  std::ostringstream out;
  out << "code " << code.id() << '\n';
  out << "spec " << spec.descriptor() << '\n';
  out << "optimizer " << config.optimizer.kind_name() << '\n';
  out << "learning_rate " << format_double(config.optimizer.learning_rate) << '\n';
  out << "minibatch " << config.optimizer.minibatch_size << '\n';
  out << "steps " << config.optimizer.steps << '\n';
  out << "seed " << config.seed << '\n';
  out << "snr_db " << config.snr_lo_db << ' ' << config.snr_hi_db << '\n';
  const std::vector<int> taps = config.loss.effective_taps(spec.iterations);
  out << "loss " << (config.loss.kind == LossConfig::Kind::multiloss ? "multiloss" : "final");
  for (int t : taps) out << ' ' << t;
  out << '\n';
  return out.str();
}

}  // namespace nbp
