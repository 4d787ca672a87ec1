#include "nbp/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace nbp {

namespace {

// Denominator floor of the relative error; below it the comparison is
// effectively absolute at tolerance * floor.
constexpr double kDenomFloor = 1e-4;

// Cancellation band of the loss term log(max(1 - sigmoid(m), 1e-12)) for the
// all-zero targets used here. Between these marginals 1 - sigmoid(m) is only
// a few ulps wide but not yet pinned to the floor, so the computed loss is a
// staircase in the parameters and finite differences cannot resolve the true
// slope at any step size. Below the band the term is smooth, above it the
// floor pins the term flat; a floor crossing under the stencil is already
// caught by the branch signature.
constexpr double kSaturationLo = 20.0;
constexpr double kSaturationHi = 28.0;

// Random operating point: weights jittered around 1, offsets small and
// nonnegative, relaxation raw values spread around 0.
Parameters random_point(const DecoderEngine& engine, RngStream& rng, double jitter) {
  Parameters p = engine.default_parameters();
  for (auto& w : p.edge_weights) w = 1.0 + jitter * rng.next_gaussian();
  for (auto& w : p.output_edge_weights) w = 1.0 + jitter * rng.next_gaussian();
  for (auto& b : p.offsets) b = 0.1 * std::fabs(rng.next_gaussian());
  for (auto& g : p.gamma_raw) g = 0.5 * rng.next_gaussian();
  if (engine.spec().train_input_weights) {
    for (auto& w : p.input_weights) w = 1.0 + jitter * rng.next_gaussian();
    for (auto& w : p.output_self_weights) w = 1.0 + jitter * rng.next_gaussian();
  }
  return p;
}

// True when any marginal the loss taps falls into the cancellation band.
bool saturated_sample(const DecoderEngine& engine, const Parameters& point,
                      const Batch& batch, const std::vector<int>& taps) {
  for (const auto& frame : batch.llr) {
    const DecodeOutput out = engine.decode(frame, point);
    for (int t : taps)
      for (double m : out.marginals[static_cast<std::size_t>(t - 1)])
        if (m > kSaturationLo && m < kSaturationHi) return true;
  }
  return false;
}

Batch random_batch(RngStream& rng, int n, int frames, double scale) {
  Batch batch;
  batch.n = n;
  batch.targets.assign(static_cast<std::size_t>(n), 0);
  batch.llr.resize(static_cast<std::size_t>(frames));
  batch.ebno_db.assign(static_cast<std::size_t>(frames), 0.0);
  for (auto& frame : batch.llr) {
    frame.resize(static_cast<std::size_t>(n));
    for (auto& x : frame) x = scale * rng.next_gaussian();
  }
  return batch;
}

}  // namespace

GradCheckReport grad_check(const LinearCode& code, const DecoderSpec& spec,
                           const LossConfig& loss, const GradCheckConfig& config) {
  DecoderSpec check_spec = spec;
  check_spec.early_stop = false;
  loss.validate(check_spec.iterations);

  const TapedDecoder decoder(code, check_spec);
  const Parameters shape_probe = decoder.engine().default_parameters();
  const std::vector<std::uint8_t> mask = trainable_mask(shape_probe, check_spec);

  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) coords.push_back(i);
  if (coords.empty())
    throw std::invalid_argument("grad_check: spec has no trainable parameters");

  const std::vector<int> taps = loss.effective_taps(check_spec.iterations);
  RngStream rng(config.seed, 0);
  GradCheckReport report;
  BatchTape bt;
  Parameters probe = shape_probe;

  while (report.accepted < config.points) {
    if (++report.attempts > config.max_attempts)
      throw std::runtime_error("grad_check: too many kink-adjacent samples");

    const Parameters point = random_point(decoder.engine(), rng, config.weight_jitter);
    const Batch batch = random_batch(rng, code.n(), config.frames, config.llr_scale);
    const std::size_t coord = coords[rng.next_below(coords.size())];

    if (saturated_sample(decoder.engine(), point, batch, taps)) {
      ++report.skipped_saturated;
      continue;
    }

    forward_with_tape(decoder, point, loss, batch, bt);
    const std::uint64_t sig0 = bt.tape.branch_signature();
    const std::vector<double> grads = backward(bt);
    const double ad = grads[coord];

    std::vector<double> flat = flatten(point);
    const auto eval = [&](double delta, std::uint64_t& sig) {
      flat[coord] += delta;
      unflatten(probe, flat);
      flat[coord] -= delta;
      forward_with_tape(decoder, probe, loss, batch, bt);
      sig = bt.tape.branch_signature();
      return bt.loss();
    };
    // Five-point central stencil: the h^2 truncation term cancels, which
    // matters when the gradient itself is small. All four evaluations must
    // stay on the branch of the unperturbed point.
    const double h = config.step;
    std::uint64_t sig_p1 = 0, sig_m1 = 0, sig_p2 = 0, sig_m2 = 0;
    const double f_p1 = eval(h, sig_p1);
    const double f_m1 = eval(-h, sig_m1);
    const double f_p2 = eval(2.0 * h, sig_p2);
    const double f_m2 = eval(-2.0 * h, sig_m2);

    if (sig_p1 != sig0 || sig_m1 != sig0 || sig_p2 != sig0 || sig_m2 != sig0) {
      ++report.skipped_kink;
      continue;
    }

    const double fd = (8.0 * (f_p1 - f_m1) - (f_p2 - f_m2)) / (12.0 * h);
    // Floored denominator: for vanishing gradients this turns the relative
    // tolerance t into an absolute tolerance t * kDenomFloor, keeping the
    // check meaningful where finite differences are all truncation noise.
    const double denom = std::max({std::fabs(ad), std::fabs(fd), kDenomFloor});
    report.max_rel_err = std::max(report.max_rel_err, std::fabs(ad - fd) / denom);
    ++report.accepted;
  }
  return report;
}

}  // namespace nbp
