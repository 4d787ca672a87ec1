#include "nbp/parameters.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nbp/text_format.hpp"

namespace nbp {

namespace {

constexpr const char* kGroupNames[] = {"input_weights", "edge_weights",        "offsets",
                                       "output_self_weights", "output_edge_weights", "gamma_raw"};
constexpr int kGroupCount = static_cast<int>(ParamGroup::count);

double parse_double(const std::string& tok, int lineno) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::runtime_error("parameter bundle line " + std::to_string(lineno) + ": bad number '" + tok + "'");
  return v;
}

std::size_t layer_blocks(const DecoderSpec& spec) {
  return spec.tying == Tying::feed_forward ? static_cast<std::size_t>(spec.iterations) : 1;
}

}  // namespace

std::size_t Parameters::total_size() const {
  return input_weights.size() + edge_weights.size() + offsets.size() + output_self_weights.size() +
         output_edge_weights.size() + gamma_raw.size();
}

std::size_t pair_weight_count(const TannerGraph& graph) {
  std::size_t total = 0;
  for (int v = 0; v < graph.n_vars; ++v) {
    const std::size_t d = static_cast<std::size_t>(graph.var_degree(v));
    total += d * (d - 1);
  }
  return total;
}

ParamShape param_shape(const DecoderSpec& spec, const TannerGraph& graph) {
  spec.validate();
  const std::size_t n = static_cast<std::size_t>(graph.n_vars);
  const std::size_t e = static_cast<std::size_t>(graph.n_edges);
  const std::size_t layers = layer_blocks(spec);

  ParamShape s;
  s.input_weights = n;
  s.output_self_weights = n;

  switch (spec.weight_mode) {
    case WeightMode::none:
      break;
    case WeightMode::scalar_weight:
      s.edge_weights = 1;
      break;
    case WeightMode::per_edge_weight: {
      const std::size_t unit =
          (spec.check_rule == CheckRule::sum_product && spec.weight_indexing == WeightIndexing::per_pair)
              ? pair_weight_count(graph)
              : e;
      s.edge_weights = layers * unit;
      break;
    }
    case WeightMode::scalar_offset:
      s.offsets = 1;
      break;
    case WeightMode::per_edge_offset:
      s.offsets = layers * e;
      break;
  }

  if (spec.neural_sum_product()) {
    s.output_edge_weights = spec.weight_mode == WeightMode::scalar_weight ? 1 : layers * e;
  }

  if (spec.relaxation == RelaxMode::scalar) s.gamma_raw = 1;
  if (spec.relaxation == RelaxMode::per_edge) s.gamma_raw = e;
  return s;
}

Parameters make_default_parameters(const DecoderSpec& spec, const TannerGraph& graph) {
  const ParamShape s = param_shape(spec, graph);
  Parameters p;
  p.input_weights.assign(s.input_weights, 1.0);
  p.edge_weights.assign(s.edge_weights, 1.0);
  p.offsets.assign(s.offsets, 0.0);
  p.output_self_weights.assign(s.output_self_weights, 1.0);
  p.output_edge_weights.assign(s.output_edge_weights, 1.0);
  p.gamma_raw.assign(s.gamma_raw, 0.0);
  return p;
}

void validate_shapes(const Parameters& params, const DecoderSpec& spec, const TannerGraph& graph) {
  const ParamShape s = param_shape(spec, graph);
  const auto check = [](std::size_t got, std::size_t want, const char* name) {
    if (got != want)
      throw std::invalid_argument(std::string("parameters: ") + name + " has size " +
                                  std::to_string(got) + ", expected " + std::to_string(want));
  };
  check(params.input_weights.size(), s.input_weights, "input_weights");
  check(params.edge_weights.size(), s.edge_weights, "edge_weights");
  check(params.offsets.size(), s.offsets, "offsets");
  check(params.output_self_weights.size(), s.output_self_weights, "output_self_weights");
  check(params.output_edge_weights.size(), s.output_edge_weights, "output_edge_weights");
  check(params.gamma_raw.size(), s.gamma_raw, "gamma_raw");
}

std::vector<double>& group_ref(Parameters& p, ParamGroup g) {
  switch (g) {
    case ParamGroup::input_weights: return p.input_weights;
    case ParamGroup::edge_weights: return p.edge_weights;
    case ParamGroup::offsets: return p.offsets;
    case ParamGroup::output_self_weights: return p.output_self_weights;
    case ParamGroup::output_edge_weights: return p.output_edge_weights;
    case ParamGroup::gamma_raw: return p.gamma_raw;
    default: throw std::logic_error("group_ref: bad group");
  }
}

const std::vector<double>& group_ref(const Parameters& p, ParamGroup g) {
  return group_ref(const_cast<Parameters&>(p), g);
}

std::vector<double> flatten(const Parameters& p) {
  std::vector<double> flat;
  flat.reserve(p.total_size());
  for (int g = 0; g < kGroupCount; ++g) {
    const auto& v = group_ref(p, static_cast<ParamGroup>(g));
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return flat;
}

void unflatten(Parameters& p, const std::vector<double>& flat) {
  if (flat.size() != p.total_size()) throw std::invalid_argument("unflatten: size mismatch");
  std::size_t pos = 0;
  for (int g = 0; g < kGroupCount; ++g) {
    auto& v = group_ref(p, static_cast<ParamGroup>(g));
    for (auto& x : v) x = flat[pos++];
  }
}

std::vector<std::uint8_t> trainable_mask(const Parameters& p, const DecoderSpec& spec) {
  std::vector<std::uint8_t> mask;
  mask.reserve(p.total_size());
  for (int g = 0; g < kGroupCount; ++g) {
    const auto group = static_cast<ParamGroup>(g);
    const auto& v = group_ref(p, group);
    std::uint8_t trainable = 1;
    if (group == ParamGroup::input_weights || group == ParamGroup::output_self_weights)
      trainable = spec.train_input_weights ? 1 : 0;
    mask.insert(mask.end(), v.size(), trainable);
  }
  return mask;
}

std::string emit_param_bundle(const Parameters& params, const DecoderSpec& spec, const LinearCode& code) {
  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(code.h_hash()));
  out << "nbp-params v1\n"
      << "code " << code.id() << "\n"
      << "h_hash " << hash << "\n"
      << "spec " << spec.descriptor() << "\n";
  for (int g = 0; g < kGroupCount; ++g) {
    const auto& v = group_ref(params, static_cast<ParamGroup>(g));
    out << "group " << kGroupNames[g] << ' ' << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i)
      out << format_double(v[i]) << ((i + 1) % 8 == 0 || i + 1 == v.size() ? '\n' : ' ');
  }
  out << "end\n";
  return out.str();
}

Parameters parse_param_bundle(const std::string& text, DecoderSpec* spec_out, std::string* code_id_out,
                              std::uint64_t* h_hash_out) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw std::runtime_error("parameter bundle: unexpected end of file");
    ++lineno;
    return line;
  };

  if (next_line() != "nbp-params v1")
    throw std::runtime_error("parameter bundle: unknown header '" + line + "'");

  Parameters p;
  bool saw_end = false;
  int next_group = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "end") {
      saw_end = true;
      break;
    }
    if (key == "code") {
      std::string id;
      ss >> id;
      if (code_id_out) *code_id_out = id;
    } else if (key == "h_hash") {
      std::string hex;
      ss >> hex;
      if (h_hash_out) *h_hash_out = std::stoull(hex, nullptr, 16);
    } else if (key == "spec") {
      std::string rest;
      std::getline(ss, rest);
      const auto start = rest.find_first_not_of(" \t");
      if (start == std::string::npos)
        throw std::runtime_error("parameter bundle line " + std::to_string(lineno) + ": empty spec");
      const DecoderSpec spec = DecoderSpec::parse(rest.substr(start));
      if (spec_out) *spec_out = spec;
    } else if (key == "group") {
      std::string name;
      std::size_t len = 0;
      if (!(ss >> name >> len))
        throw std::runtime_error("parameter bundle line " + std::to_string(lineno) + ": bad group header");
      if (next_group >= kGroupCount || name != kGroupNames[next_group])
        throw std::runtime_error("parameter bundle line " + std::to_string(lineno) +
                                 ": unexpected group '" + name + "'");
      auto& v = group_ref(p, static_cast<ParamGroup>(next_group));
      ++next_group;
      v.reserve(len);
      while (v.size() < len) {
        std::string tok;
        if (!(ss >> tok)) {
          std::istringstream more(next_line());
          ss = std::move(more);
          continue;
        }
        v.push_back(parse_double(tok, lineno));
      }
    } else {
      throw std::runtime_error("parameter bundle line " + std::to_string(lineno) + ": unknown key '" +
                               key + "'");
    }
  }
  if (!saw_end) throw std::runtime_error("parameter bundle: missing end marker");
  if (next_group != kGroupCount) throw std::runtime_error("parameter bundle: missing parameter groups");
  return p;
}

void save_param_bundle(const std::string& path, const Parameters& params, const DecoderSpec& spec,
                       const LinearCode& code) {
  validate_shapes(params, spec, code.graph());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << emit_param_bundle(params, spec, code);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Parameters load_param_bundle(const std::string& path, const LinearCode& code, DecoderSpec* spec_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter bundle: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();

  DecoderSpec spec;
  std::string code_id;
  std::uint64_t h_hash = 0;
  Parameters p = parse_param_bundle(ss.str(), &spec, &code_id, &h_hash);
  if (code_id != code.id())
    throw std::runtime_error(path + ": bundle is for code '" + code_id + "', not '" + code.id() + "'");
  if (h_hash != code.h_hash())
    throw std::runtime_error(path + ": parity-check hash mismatch for code '" + code_id + "'");
  validate_shapes(p, spec, code.graph());
  if (spec_out) *spec_out = spec;
  return p;
}

}  // namespace nbp
