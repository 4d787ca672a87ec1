#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbp/decoder_spec.hpp"
#include "nbp/linear_code.hpp"
#include "nbp/tanner_graph.hpp"

namespace nbp {

// Learnable decoder parameters. Shapes depend on the spec and the graph:
//   input_weights        N      multiplies the channel LLR in variable updates
//   edge_weights         see param_shape; message weights (variable side for
//                        sum-product, check outputs for min-sum)
//   offsets              min-sum magnitude offsets
//   output_self_weights  N      multiplies the channel LLR in marginalization
//   output_edge_weights  marginalization weights, neural sum-product only
//   gamma_raw            relaxation coefficients before the sigmoid
// Feed-forward tying stores one block per iteration, iteration major.
struct Parameters {
  std::vector<double> input_weights;
  std::vector<double> edge_weights;
  std::vector<double> offsets;
  std::vector<double> output_self_weights;
  std::vector<double> output_edge_weights;
  std::vector<double> gamma_raw;

  std::size_t total_size() const;
};

struct ParamShape {
  std::size_t input_weights = 0;
  std::size_t edge_weights = 0;
  std::size_t offsets = 0;
  std::size_t output_self_weights = 0;
  std::size_t output_edge_weights = 0;
  std::size_t gamma_raw = 0;
};

// Number of ordered (target, source) pairs sharing a variable, target != source.
std::size_t pair_weight_count(const TannerGraph& graph);

ParamShape param_shape(const DecoderSpec& spec, const TannerGraph& graph);

// Weights 1, offsets 0, gamma_raw 0 (relaxation coefficient sigmoid(0) = 0.5).
Parameters make_default_parameters(const DecoderSpec& spec, const TannerGraph& graph);

void validate_shapes(const Parameters& params, const DecoderSpec& spec, const TannerGraph& graph);

// Groups in flattening order; used for trainability masks and gradients.
enum class ParamGroup : int {
  input_weights = 0,
  edge_weights,
  offsets,
  output_self_weights,
  output_edge_weights,
  gamma_raw,
  count
};

std::vector<double>& group_ref(Parameters& p, ParamGroup g);
const std::vector<double>& group_ref(const Parameters& p, ParamGroup g);

std::vector<double> flatten(const Parameters& p);
void unflatten(Parameters& p, const std::vector<double>& flat);

// Which flat slots the optimizer may move for this spec.
std::vector<std::uint8_t> trainable_mask(const Parameters& p, const DecoderSpec& spec);

// Versioned text bundle; records the code id, parity-check hash and spec
// descriptor so a bundle cannot be applied to the wrong decoder silently.
std::string emit_param_bundle(const Parameters& params, const DecoderSpec& spec, const LinearCode& code);
Parameters parse_param_bundle(const std::string& text, DecoderSpec* spec_out = nullptr,
                              std::string* code_id_out = nullptr, std::uint64_t* h_hash_out = nullptr);

void save_param_bundle(const std::string& path, const Parameters& params, const DecoderSpec& spec,
                       const LinearCode& code);
// Verifies code id and hash against the given code and shapes against the
// embedded spec; returns the spec through spec_out when non-null.
Parameters load_param_bundle(const std::string& path, const LinearCode& code,
                             DecoderSpec* spec_out = nullptr);

}  // namespace nbp
