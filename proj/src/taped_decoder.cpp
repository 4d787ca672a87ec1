#include "nbp/taped_decoder.hpp"

#include <limits>
#include <stdexcept>

namespace nbp {

std::vector<Tape::Id> ParamNodes::flat() const {
  std::vector<Tape::Id> out;
  out.reserve(input_weights.size() + edge_weights.size() + offsets.size() +
              output_self_weights.size() + output_edge_weights.size() + gamma_raw.size());
  for (const auto* g : {&input_weights, &edge_weights, &offsets, &output_self_weights,
                        &output_edge_weights, &gamma_raw})
    out.insert(out.end(), g->begin(), g->end());
  return out;
}

ParamNodes make_param_nodes(Tape& tape, const Parameters& params) {
  ParamNodes pn;
  const auto record = [&tape](const std::vector<double>& src, std::vector<Tape::Id>& dst) {
    dst.reserve(src.size());
    for (double v : src) dst.push_back(tape.leaf(v));
  };
  record(params.input_weights, pn.input_weights);
  record(params.edge_weights, pn.edge_weights);
  record(params.offsets, pn.offsets);
  record(params.output_self_weights, pn.output_self_weights);
  record(params.output_edge_weights, pn.output_edge_weights);
  record(params.gamma_raw, pn.gamma_raw);
  return pn;
}

TapedDecoder::TapedDecoder(const LinearCode& code, DecoderSpec spec)
    : engine_(code, std::move(spec)) {}

void TapedDecoder::variable_update(Tape& tape, int layer, std::span<const Tape::Id> llr_ids,
                                   std::span<const Tape::Id> c2v, const ParamNodes& pn,
                                   std::span<Tape::Id> v2c) const {
  const TannerGraph& g = engine_.graph();
  const DecoderSpec& spec = engine_.spec();
  const double a = spec.clip;
  const bool neural = spec.neural_sum_product();

  if (spec.weight_indexing == WeightIndexing::per_pair) {
    for (int v = 0; v < g.n_vars; ++v) {
      const auto ev = g.edges_of_var(v);
      const Tape::Id base = tape.mul(pn.input_weights[v], llr_ids[v]);
      for (std::size_t i = 0; i < ev.size(); ++i) {
        Tape::Id s = base;
        int j = 0;
        for (std::size_t jj = 0; jj < ev.size(); ++jj) {
          if (jj == i) continue;
          const int slot = engine_.pair_weight_slot(layer, ev[i], j++);
          s = tape.add(s, tape.mul(pn.edge_weights[slot], c2v[ev[jj]]));
        }
        const Tape::Id val = tape.clip(s, a);
        v2c[ev[i]] = neural ? tape.tanh_half(val) : val;
      }
    }
    return;
  }

  std::vector<Tape::Id> prod(g.n_edges);
  for (int v = 0; v < g.n_vars; ++v) {
    const auto ev = g.edges_of_var(v);
    Tape::Id s = tape.mul(pn.input_weights[v], llr_ids[v]);
    for (auto e : ev) {
      const int slot = engine_.var_weight_slot(layer, e);
      prod[e] = slot < 0 ? c2v[e] : tape.mul(pn.edge_weights[slot], c2v[e]);
      s = tape.add(s, prod[e]);
    }
    for (auto e : ev) {
      const Tape::Id val = tape.clip(tape.sub(s, prod[e]), a);
      v2c[e] = neural ? tape.tanh_half(val) : val;
    }
  }
}

void TapedDecoder::check_update(Tape& tape, int layer, std::span<const Tape::Id> v2c,
                                const ParamNodes& pn, std::span<Tape::Id> raw) const {
  const TannerGraph& g = engine_.graph();
  const DecoderSpec& spec = engine_.spec();
  const bool scaled = spec.fixed_post_scale.has_value();
  const double ps = spec.fixed_post_scale.value_or(1.0);

  if (spec.check_rule == CheckRule::sum_product) {
    const bool neural = spec.neural_sum_product();
    std::vector<Tape::Id> t, pf, sf;
    for (int c = 0; c < g.n_checks; ++c) {
      const int b = g.check_offset[c];
      const int d = g.check_degree(c);
      if (d == 1) {
        raw[b] = tape.leaf(0.0);
        continue;
      }
      t.resize(d);
      pf.resize(d);
      sf.resize(d);
      for (int i = 0; i < d; ++i) t[i] = neural ? v2c[b + i] : tape.tanh_half(v2c[b + i]);
      pf[0] = t[0];
      for (int i = 1; i < d; ++i) pf[i] = tape.mul(pf[i - 1], t[i]);
      sf[d - 1] = t[d - 1];
      for (int i = d - 2; i >= 0; --i) sf[i] = tape.mul(sf[i + 1], t[i]);
      for (int i = 0; i < d; ++i) {
        const Tape::Id p =
            i == 0 ? sf[1] : (i == d - 1 ? pf[d - 2] : tape.mul(pf[i - 1], sf[i + 1]));
        Tape::Id m = tape.atanh_two(tape.clip(p, kProductClamp));
        if (scaled) m = tape.scale(m, ps);
        raw[b + i] = m;
      }
    }
    return;
  }

  // Min-sum. The two smallest magnitudes and their indices route every
  // output to its source node; selections are comparisons on plain values
  // and are folded into the branch signature.
  std::vector<Tape::Id> mag;
  for (int c = 0; c < g.n_checks; ++c) {
    const int b = g.check_offset[c];
    const int d = g.check_degree(c);
    if (d == 1) {
      raw[b] = tape.leaf(0.0);
      continue;
    }
    mag.resize(d);
    double min1 = std::numeric_limits<double>::infinity();
    double min2 = min1;
    int idx1 = 0, idx2 = 0;
    int sign_all = 1;
    for (int i = 0; i < d; ++i) {
      mag[i] = tape.abs_of(v2c[b + i]);
      const double x = tape.value(v2c[b + i]);
      const double m = tape.value(mag[i]);
      if (x < 0.0) sign_all = -sign_all;
      if (m < min1) {
        min2 = min1;
        idx2 = idx1;
        min1 = m;
        idx1 = i;
      } else if (m < min2) {
        min2 = m;
        idx2 = i;
      }
    }
    tape.note_branch(0x6d730000ull | (static_cast<std::uint64_t>(c) << 32) |
                     (static_cast<std::uint64_t>(idx1) << 16) | static_cast<std::uint64_t>(idx2));
    for (int i = 0; i < d; ++i) {
      const Tape::Id mag_used = i == idx1 ? mag[idx2] : mag[idx1];
      Tape::Id m;
      if (spec.has_weights()) {
        m = tape.mul(pn.edge_weights[engine_.check_weight_slot(layer, b + i)], mag_used);
      } else if (spec.has_offsets()) {
        m = tape.relu(tape.sub(mag_used, pn.offsets[engine_.offset_slot(layer, b + i)]));
      } else {
        m = mag_used;
      }
      const int s = tape.value(v2c[b + i]) < 0.0 ? -sign_all : sign_all;
      if (s < 0) m = tape.neg(m);
      if (scaled) m = tape.scale(m, ps);
      raw[b + i] = m;
    }
  }
}

void TapedDecoder::marginalize(Tape& tape, int layer, std::span<const Tape::Id> llr_ids,
                               std::span<const Tape::Id> c2v, const ParamNodes& pn,
                               std::span<Tape::Id> out) const {
  const TannerGraph& g = engine_.graph();
  for (int v = 0; v < g.n_vars; ++v) {
    Tape::Id z = tape.mul(pn.output_self_weights[v], llr_ids[v]);
    for (auto e : g.edges_of_var(v)) {
      const int slot = engine_.output_weight_slot(layer, e);
      z = tape.add(z, slot < 0 ? c2v[e] : tape.mul(pn.output_edge_weights[slot], c2v[e]));
    }
    out[v] = z;
  }
}

TapedDecode TapedDecoder::unroll(Tape& tape, const ParamNodes& pn,
                                 std::span<const double> llr) const {
  const TannerGraph& g = engine_.graph();
  const DecoderSpec& spec = engine_.spec();
  if (static_cast<int>(llr.size()) != g.n_vars)
    throw std::invalid_argument("unroll: LLR length does not match the code length");

  std::vector<Tape::Id> llr_ids(g.n_vars);
  for (int v = 0; v < g.n_vars; ++v) llr_ids[v] = tape.leaf(llr[v]);

  const int e_count = g.n_edges;
  std::vector<Tape::Id> c2v(e_count), v2c(e_count), raw(e_count), state(e_count);
  const Tape::Id zero = tape.leaf(0.0);
  for (int e = 0; e < e_count; ++e) c2v[e] = zero;
  for (int e = 0; e < e_count; ++e) state[e] = zero;

  const bool relaxed = spec.relaxation != RelaxMode::off;
  std::vector<Tape::Id> gammas, one_minus_g;
  if (relaxed) {
    std::vector<Tape::Id> by_slot(pn.gamma_raw.size(), -1), om_by_slot(pn.gamma_raw.size(), -1);
    gammas.resize(e_count);
    one_minus_g.resize(e_count);
    for (int e = 0; e < e_count; ++e) {
      const int slot = engine_.gamma_slot(e);
      if (by_slot[slot] < 0) {
        by_slot[slot] = tape.sigmoid_of(pn.gamma_raw[slot]);
        om_by_slot[slot] = tape.one_minus(by_slot[slot]);
      }
      gammas[e] = by_slot[slot];
      one_minus_g[e] = om_by_slot[slot];
    }
  }

  TapedDecode out;
  out.marginals.reserve(spec.iterations);
  std::vector<Tape::Id> marginal(g.n_vars);

  for (int t = 1; t <= spec.iterations; ++t) {
    variable_update(tape, t, llr_ids, c2v, pn, v2c);
    check_update(tape, t, v2c, pn, raw);

    if (relaxed) {
      for (int e = 0; e < e_count; ++e)
        state[e] = tape.add(tape.mul(gammas[e], state[e]), tape.mul(one_minus_g[e], raw[e]));
      c2v = state;
    } else {
      c2v = raw;
    }

    marginalize(tape, t, llr_ids, c2v, pn, marginal);
    out.marginals.push_back(marginal);
  }
  return out;
}

}  // namespace nbp
