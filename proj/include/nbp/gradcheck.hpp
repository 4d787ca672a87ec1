#pragma once

#include <cstdint>

#include "nbp/training.hpp"

namespace nbp {

struct GradCheckConfig {
  int points = 100;        // accepted samples required
  int max_attempts = 4000;
  double step = 1e-4;      // central difference h
  std::uint64_t seed = 97;
  int frames = 2;          // frames per sampled input
  double llr_scale = 2.5;
  double weight_jitter = 0.25;
};

struct GradCheckReport {
  int accepted = 0;
  int skipped_kink = 0;       // branch signature changed under the perturbation
  int skipped_saturated = 0;  // a marginal sat in the cancellation band of 1-sigmoid
  int attempts = 0;
  double max_rel_err = 0.0;
};

// Compares reverse-mode gradients against central finite differences, one
// random trainable coordinate at a random operating point per sample. A
// sample whose +-h evaluations cross a subgradient branch (clamp boundary,
// |x| at 0, max(x,0) at 0, min-selection change, log floor) is excluded and
// counted instead of compared. The relative error divides by the larger of
// the two magnitudes, floored at 1e-4; for vanishing gradients the check is
// therefore absolute at tolerance * 1e-4.
GradCheckReport grad_check(const LinearCode& code, const DecoderSpec& spec,
                           const LossConfig& loss, const GradCheckConfig& config);

}  // namespace nbp
