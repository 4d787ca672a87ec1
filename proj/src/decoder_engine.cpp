#include "nbp/decoder_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbp {

double tanh_odd(double x) { return std::copysign(std::tanh(std::fabs(x)), x); }

double atanh_odd(double x) { return std::copysign(std::atanh(std::fabs(x)), x); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<std::uint8_t> hard_decisions_from_marginals(std::span<const double> marginals) {
  std::vector<std::uint8_t> bits(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i) bits[i] = marginals[i] > 0.0 ? 1 : 0;
  return bits;
}

DecoderEngine::DecoderEngine(const LinearCode& code, DecoderSpec spec)
    : code_(&code), spec_(spec) {
  spec_.validate();
  if (spec_.weight_indexing == WeightIndexing::per_pair) {
    const TannerGraph& g = graph();
    pair_base_.assign(g.n_edges, 0);
    std::int32_t pos = 0;
    for (int v = 0; v < g.n_vars; ++v) {
      for (auto e : g.edges_of_var(v)) {
        pair_base_[e] = pos;
        pos += g.var_degree(v) - 1;
      }
    }
    pair_count_ = static_cast<std::size_t>(pos);
  }
}

int DecoderEngine::var_weight_slot(int layer, int edge) const {
  if (spec_.check_rule != CheckRule::sum_product) return -1;
  switch (spec_.weight_mode) {
    case WeightMode::scalar_weight:
      return 0;
    case WeightMode::per_edge_weight: {
      if (spec_.weight_indexing == WeightIndexing::per_pair) return -1;
      const int block = spec_.tying == Tying::feed_forward ? layer - 1 : 0;
      return block * graph().n_edges + edge;
    }
    default:
      return -1;
  }
}

int DecoderEngine::pair_weight_slot(int layer, int edge, int j) const {
  if (spec_.weight_indexing != WeightIndexing::per_pair) return -1;
  const int block = spec_.tying == Tying::feed_forward ? layer - 1 : 0;
  return block * static_cast<int>(pair_count_) + pair_base_[edge] + j;
}

int DecoderEngine::check_weight_slot(int layer, int edge) const {
  if (spec_.check_rule != CheckRule::min_sum || !spec_.has_weights()) return -1;
  if (spec_.weight_mode == WeightMode::scalar_weight) return 0;
  const int block = spec_.tying == Tying::feed_forward ? layer - 1 : 0;
  return block * graph().n_edges + edge;
}

int DecoderEngine::offset_slot(int layer, int edge) const {
  if (!spec_.has_offsets()) return -1;
  if (spec_.weight_mode == WeightMode::scalar_offset) return 0;
  const int block = spec_.tying == Tying::feed_forward ? layer - 1 : 0;
  return block * graph().n_edges + edge;
}

int DecoderEngine::output_weight_slot(int layer, int edge) const {
  if (!spec_.neural_sum_product()) return -1;
  if (spec_.weight_mode == WeightMode::scalar_weight) return 0;
  const int block = spec_.tying == Tying::feed_forward ? layer - 1 : 0;
  return block * graph().n_edges + edge;
}

int DecoderEngine::gamma_slot(int edge) const {
  switch (spec_.relaxation) {
    case RelaxMode::off: return -1;
    case RelaxMode::scalar: return 0;
    case RelaxMode::per_edge: return edge;
  }
  return -1;
}

double DecoderEngine::var_weight(const Parameters& p, int layer, int edge) const {
  const int slot = var_weight_slot(layer, edge);
  return slot < 0 ? 1.0 : p.edge_weights[slot];
}

void DecoderEngine::variable_update(int layer, std::span<const double> llr,
                                    std::span<const double> c2v, const Parameters& params,
                                    std::span<double> v2c) const {
  const TannerGraph& g = graph();
  const double a = spec_.clip;
  const bool neural = spec_.neural_sum_product();

  if (spec_.weight_indexing == WeightIndexing::per_pair) {
    for (int v = 0; v < g.n_vars; ++v) {
      const auto ev = g.edges_of_var(v);
      const double base = params.input_weights[v] * llr[v];
      for (std::size_t i = 0; i < ev.size(); ++i) {
        double s = base;
        int j = 0;
        for (std::size_t jj = 0; jj < ev.size(); ++jj) {
          if (jj == i) continue;
          s += params.edge_weights[pair_weight_slot(layer, ev[i], j++)] * c2v[ev[jj]];
        }
        const double val = std::clamp(s, -a, a);
        v2c[ev[i]] = neural ? tanh_odd(0.5 * val) : val;
      }
    }
    return;
  }

  // Totals form: one weighted sum per variable, then subtract the target
  // edge's own contribution.
  for (int v = 0; v < g.n_vars; ++v) {
    const auto ev = g.edges_of_var(v);
    double s = params.input_weights[v] * llr[v];
    for (auto e : ev) s += var_weight(params, layer, e) * c2v[e];
    for (auto e : ev) {
      const double pre = s - var_weight(params, layer, e) * c2v[e];
      const double val = std::clamp(pre, -a, a);
      v2c[e] = neural ? tanh_odd(0.5 * val) : val;
    }
  }
}

void DecoderEngine::variable_update_naive(int layer, std::span<const double> llr,
                                          std::span<const double> c2v, const Parameters& params,
                                          std::span<double> v2c) const {
  const TannerGraph& g = graph();
  const double a = spec_.clip;
  const bool neural = spec_.neural_sum_product();
  const bool pairs = spec_.weight_indexing == WeightIndexing::per_pair;

  for (int v = 0; v < g.n_vars; ++v) {
    const auto ev = g.edges_of_var(v);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      double s = params.input_weights[v] * llr[v];
      int j = 0;
      for (std::size_t jj = 0; jj < ev.size(); ++jj) {
        if (jj == i) continue;
        const double w = pairs ? params.edge_weights[pair_weight_slot(layer, ev[i], j++)]
                               : var_weight(params, layer, ev[jj]);
        s += w * c2v[ev[jj]];
      }
      const double val = std::clamp(s, -a, a);
      v2c[ev[i]] = neural ? tanh_odd(0.5 * val) : val;
    }
  }
}

void DecoderEngine::check_update(int layer, std::span<const double> v2c, const Parameters& params,
                                 std::span<double> c2v_raw) const {
  const TannerGraph& g = graph();
  const double ps = spec_.fixed_post_scale.value_or(1.0);
  const bool scaled = spec_.fixed_post_scale.has_value();

  if (spec_.check_rule == CheckRule::sum_product) {
    const bool neural = spec_.neural_sum_product();
    std::vector<double> t, pf, sf;
    for (int c = 0; c < g.n_checks; ++c) {
      const int b = g.check_offset[c];
      const int d = g.check_degree(c);
      if (d == 1) {
        c2v_raw[b] = 0.0;
        continue;
      }
      t.resize(d);
      pf.resize(d);
      sf.resize(d);
      for (int i = 0; i < d; ++i) t[i] = neural ? v2c[b + i] : tanh_odd(0.5 * v2c[b + i]);
      pf[0] = t[0];
      for (int i = 1; i < d; ++i) pf[i] = pf[i - 1] * t[i];
      sf[d - 1] = t[d - 1];
      for (int i = d - 2; i >= 0; --i) sf[i] = sf[i + 1] * t[i];
      for (int i = 0; i < d; ++i) {
        double p = i == 0 ? sf[1] : (i == d - 1 ? pf[d - 2] : pf[i - 1] * sf[i + 1]);
        p = std::clamp(p, -kProductClamp, kProductClamp);
        double m = 2.0 * atanh_odd(p);
        if (scaled) m *= ps;
        c2v_raw[b + i] = m;
      }
    }
    return;
  }

  // Min-sum: two smallest magnitudes and the total sign per check.
  for (int c = 0; c < g.n_checks; ++c) {
    const int b = g.check_offset[c];
    const int d = g.check_degree(c);
    if (d == 1) {
      c2v_raw[b] = 0.0;
      continue;
    }
    double min1 = std::numeric_limits<double>::infinity();
    double min2 = min1;
    int argmin = 0;
    int sign_all = 1;
    for (int i = 0; i < d; ++i) {
      const double x = v2c[b + i];
      const double mag = std::fabs(x);
      if (x < 0.0) sign_all = -sign_all;
      if (mag < min1) {
        min2 = min1;
        min1 = mag;
        argmin = i;
      } else if (mag < min2) {
        min2 = mag;
      }
    }
    for (int i = 0; i < d; ++i) {
      const double mag = i == argmin ? min2 : min1;
      double m;
      if (spec_.has_weights()) {
        m = params.edge_weights[check_weight_slot(layer, b + i)] * mag;
      } else if (spec_.has_offsets()) {
        m = std::max(mag - params.offsets[offset_slot(layer, b + i)], 0.0);
      } else {
        m = mag;
      }
      const int s = v2c[b + i] < 0.0 ? -sign_all : sign_all;
      if (s < 0) m = -m;
      if (scaled) m *= ps;
      c2v_raw[b + i] = m;
    }
  }
}

void DecoderEngine::check_update_naive(int layer, std::span<const double> v2c,
                                       const Parameters& params, std::span<double> c2v_raw) const {
  const TannerGraph& g = graph();
  const double ps = spec_.fixed_post_scale.value_or(1.0);
  const bool scaled = spec_.fixed_post_scale.has_value();
  const bool sum_product = spec_.check_rule == CheckRule::sum_product;
  const bool neural = spec_.neural_sum_product();

  for (int c = 0; c < g.n_checks; ++c) {
    const int b = g.check_offset[c];
    const int d = g.check_degree(c);
    if (d == 1) {
      c2v_raw[b] = 0.0;
      continue;
    }
    for (int i = 0; i < d; ++i) {
      if (sum_product) {
        double p = 1.0;
        for (int j = 0; j < d; ++j) {
          if (j == i) continue;
          p *= neural ? v2c[b + j] : tanh_odd(0.5 * v2c[b + j]);
        }
        p = std::clamp(p, -kProductClamp, kProductClamp);
        double m = 2.0 * atanh_odd(p);
        if (scaled) m *= ps;
        c2v_raw[b + i] = m;
      } else {
        double mag = std::numeric_limits<double>::infinity();
        int s = 1;
        for (int j = 0; j < d; ++j) {
          if (j == i) continue;
          mag = std::min(mag, std::fabs(v2c[b + j]));
          if (v2c[b + j] < 0.0) s = -s;
        }
        double m;
        if (spec_.has_weights()) {
          m = params.edge_weights[check_weight_slot(layer, b + i)] * mag;
        } else if (spec_.has_offsets()) {
          m = std::max(mag - params.offsets[offset_slot(layer, b + i)], 0.0);
        } else {
          m = mag;
        }
        if (s < 0) m = -m;
        if (scaled) m *= ps;
        c2v_raw[b + i] = m;
      }
    }
  }
}

void DecoderEngine::marginalize(int layer, std::span<const double> llr, std::span<const double> c2v,
                                const Parameters& params, std::span<double> out) const {
  const TannerGraph& g = graph();
  const bool weighted = spec_.neural_sum_product();
  for (int v = 0; v < g.n_vars; ++v) {
    double z = params.output_self_weights[v] * llr[v];
    for (auto e : g.edges_of_var(v)) {
      const double w = weighted ? params.output_edge_weights[output_weight_slot(layer, e)] : 1.0;
      z += w * c2v[e];
    }
    out[v] = z;
  }
}

DecodeOutput DecoderEngine::decode(std::span<const double> llr, const Parameters& params) const {
  const TannerGraph& g = graph();
  if (static_cast<int>(llr.size()) != g.n_vars)
    throw std::invalid_argument("decode: LLR length does not match the code length");
  validate_shapes(params, spec_, g);

  const int e_count = g.n_edges;
  std::vector<double> c2v(e_count, 0.0), v2c(e_count), raw(e_count), state;

  std::vector<double> gammas;
  if (spec_.relaxation != RelaxMode::off) {
    gammas.resize(e_count);
    for (int e = 0; e < e_count; ++e) gammas[e] = sigmoid(params.gamma_raw[gamma_slot(e)]);
    state.assign(e_count, 0.0);
  }

  DecodeOutput out;
  out.marginals.reserve(spec_.iterations);
  std::vector<double> marginal(g.n_vars);

  for (int t = 1; t <= spec_.iterations; ++t) {
    variable_update(t, llr, c2v, params, v2c);
    check_update(t, v2c, params, raw);

    if (spec_.relaxation != RelaxMode::off) {
      // The filter starts from zero state, so early iterations see attenuated
      // messages that ramp up as 1 - gamma^t. That ramp is part of the scheme:
      // it doubles as the damping min-sum needs anyway.
      for (int e = 0; e < e_count; ++e) state[e] = relax_blend(state[e], raw[e], gammas[e]);
      c2v = state;
    } else {
      c2v = raw;
    }

    marginalize(t, llr, c2v, params, marginal);
    out.marginals.push_back(marginal);
    out.iterations_used = t;

    if (spec_.early_stop) {
      auto hard = hard_decisions_from_marginals(marginal);
      if (code_->is_codeword(hard)) {
        out.hard_decisions = std::move(hard);
        out.valid = true;
        out.final_messages = c2v;
        return out;
      }
    }
  }

  out.hard_decisions = hard_decisions_from_marginals(out.marginals.back());
  out.valid = code_->is_codeword(out.hard_decisions);
  out.final_messages = c2v;
  return out;
}

}  // namespace nbp
