#pragma once

#include <span>
#include <vector>

#include "nbp/decoder_spec.hpp"
#include "nbp/linear_code.hpp"
#include "nbp/parameters.hpp"

namespace nbp {

// Odd-symmetric wrappers: the sign is carried by copysign so that negating
// every input negates every message bit for bit, which makes the codeword
// symmetry of the decoder exact in floating point, not just approximate.
double tanh_odd(double x);
double atanh_odd(double x);
double sigmoid(double x);

// Product clamp for the sum-product check update, keeps atanh finite.
inline constexpr double kProductClamp = 1.0 - 1e-12;

// One step of the relaxation low-pass filter on a check-to-variable message.
inline double relax_blend(double prev, double raw, double gamma) {
  return gamma * prev + (1.0 - gamma) * raw;
}

struct DecodeOutput {
  // LLR-domain marginals of each executed iteration, innermost size n.
  // Positive favors bit 1; probabilities are sigmoid(marginal).
  std::vector<std::vector<double>> marginals;
  std::vector<std::uint8_t> hard_decisions;  // from the last executed iteration, 0 on ties
  int iterations_used = 0;
  bool valid = false;  // hard_decisions satisfies every parity check
  std::vector<double> final_messages;  // last check-to-variable messages, post relaxation
};

// Iterative decoder over a fixed code and spec. One engine instance serves
// any number of decode calls; parameters are passed per call so trained and
// default weights can share the precomputed indexing.
//
// Update order per iteration: variable update (clipped at +-clip before the
// optional tanh), check update, relaxation blend, marginalization, then the
// early-termination syndrome check.
class DecoderEngine {
 public:
  DecoderEngine(const LinearCode& code, DecoderSpec spec);

  const LinearCode& code() const { return *code_; }
  const TannerGraph& graph() const { return code_->graph(); }
  const DecoderSpec& spec() const { return spec_; }

  Parameters default_parameters() const { return make_default_parameters(spec_, graph()); }

  DecodeOutput decode(std::span<const double> llr, const Parameters& params) const;

  // Parameter slot lookup shared with the taped twin. Layer is 1-based; a
  // negative return means the quantity is fixed at its default.
  int var_weight_slot(int layer, int edge) const;            // into edge_weights (sum-product)
  int pair_weight_slot(int layer, int edge, int j) const;    // j-th source of this target edge
  int check_weight_slot(int layer, int edge) const;          // into edge_weights (min-sum)
  int offset_slot(int layer, int edge) const;                // into offsets
  int output_weight_slot(int layer, int edge) const;         // into output_edge_weights
  int gamma_slot(int edge) const;                            // into gamma_raw

  // Kernels, exposed for tests. All layers 1-based. c2v holds the incoming
  // check-to-variable messages of the previous iteration (zero for layer 1).
  void variable_update(int layer, std::span<const double> llr, std::span<const double> c2v,
                       const Parameters& params, std::span<double> v2c) const;
  void check_update(int layer, std::span<const double> v2c, const Parameters& params,
                    std::span<double> c2v_raw) const;
  void marginalize(int layer, std::span<const double> llr, std::span<const double> c2v,
                   const Parameters& params, std::span<double> out) const;

  // Reference implementations that recompute every leave-one-out reduction
  // from scratch; the oracles for the totals-based kernels above.
  void variable_update_naive(int layer, std::span<const double> llr, std::span<const double> c2v,
                             const Parameters& params, std::span<double> v2c) const;
  void check_update_naive(int layer, std::span<const double> v2c, const Parameters& params,
                          std::span<double> c2v_raw) const;

 private:
  double var_weight(const Parameters& p, int layer, int edge) const;

  const LinearCode* code_;
  DecoderSpec spec_;
  std::vector<std::int32_t> pair_base_;  // per-pair weight indexing, when enabled
  std::size_t pair_count_ = 0;
};

std::vector<std::uint8_t> hard_decisions_from_marginals(std::span<const double> marginals);

}  // namespace nbp
