#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbp/bch.hpp"
#include "nbp/code_registry.hpp"
#include "nbp/gradcheck.hpp"
#include "nbp/harness.hpp"
#include "nbp/oracle.hpp"
#include "nbp/text_format.hpp"
#include "nbp/training.hpp"

namespace {

using namespace nbp;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

// Spec resolution when a parameter bundle is in play: the bundle's embedded
// spec wins, and an explicitly given --spec must agree with it.
Parameters resolve_params(const LinearCode& code, DecoderSpec& spec, bool spec_given,
                          const std::string& params_path) {
  if (params_path.empty()) return make_default_parameters(spec, code.graph());
  DecoderSpec embedded;
  Parameters params = load_param_bundle(params_path, code, &embedded);
  if (spec_given && embedded.descriptor() != spec.descriptor())
    throw std::runtime_error("--spec " + spec.descriptor() + " contradicts the bundle spec " +
                             embedded.descriptor());
  spec = embedded;
  return params;
}

void emit_report(const BerReport& report, const std::string& out_path) {
  const std::string csv = emit_csv(report);
  const std::string meta = report.provenance.to_text();
  if (out_path.empty()) {
    std::istringstream lines(meta);
    std::string line;
    while (std::getline(lines, line)) std::cout << "# " << line << "\n";
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
    write_text_file(out_path + ".meta", meta);
    std::cout << meta;
  }
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief propagation decoder laboratory"};
  app.require_subcommand(1);

  // Options shared by the sweep style subcommands.
  std::string code_name;
  std::string spec_str = "bp,T=5";
  std::string params_path;
  std::string out_path;
  std::vector<double> snr;
  std::uint64_t seed = 1;
  int workers = 1;
  StoppingRule rule;

  auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("--code", code_name, "builtin code name, .alist path, or manifest path")
        ->required();
    cmd->add_option("--params", params_path, "parameter bundle path");
    cmd->add_option("--snr", snr, "Eb/N0 grid in dB")->required()->delimiter(',');
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--workers", workers, "worker streams")->check(CLI::PositiveNumber);
    cmd->add_option("--min-frame-errors", rule.min_frame_errors, "stop a point after this many");
    cmd->add_option("--max-frames", rule.max_frames, "hard frame cap per point");
    cmd->add_option("--out", out_path, "CSV output path; provenance goes to <out>.meta");
  };

  CLI::App* ber = app.add_subcommand("ber", "Monte-Carlo bit error rate sweep");
  add_sweep_options(ber);
  ber->add_option("--spec", spec_str, "decoder spec descriptor");
  ber->callback([&] {
    const LinearCode code = load_code(code_name);
    DecoderSpec spec = DecoderSpec::parse(spec_str);
    const Parameters params =
        resolve_params(code, spec, ber->count("--spec") > 0, params_path);
    emit_report(run_ber_sweep(code, spec, params, snr, rule, seed, workers), out_path);
  });

  CLI::App* mrrd = app.add_subcommand("mrrd", "redundant decoding sweep with iteration stats");
  add_sweep_options(mrrd);
  MrrdConfig mrrd_cfg;
  std::string inner_spec_str = "bp";
  mrrd->add_option("--spec", inner_spec_str, "inner decoder spec descriptor");
  mrrd->add_option("-m,--branches", mrrd_cfg.branches, "parallel branches");
  mrrd->add_option("-c,--blocks", mrrd_cfg.blocks, "blocks per branch");
  mrrd->add_option("--inner-iterations", mrrd_cfg.inner_iterations, "iterations per block");
  mrrd->add_flag("--carry", mrrd_cfg.extrinsic_carry, "pass marginals between blocks");
  mrrd->callback([&] {
    const LinearCode code = load_code(code_name);
    mrrd_cfg.inner_spec = DecoderSpec::parse(inner_spec_str);
    const Parameters params =
        resolve_params(code, mrrd_cfg.inner_spec, mrrd->count("--spec") > 0, params_path);
    emit_report(run_mrrd_sweep(code, mrrd_cfg, params, snr, rule, seed, workers), out_path);
  });

  CLI::App* train_cmd = app.add_subcommand("train", "gradient training run");
  std::string train_code, train_spec_str, train_out;
  std::string optimizer_name = "rmsprop";
  std::string loss_name = "multi";
  TrainConfig tc;
  train_cmd->add_option("--code", train_code, "builtin code name or path")->required();
  train_cmd->add_option("--spec", train_spec_str, "decoder spec descriptor")->required();
  train_cmd->add_option("--out", train_out, "parameter bundle output path")->required();
  train_cmd->add_option("--optimizer", optimizer_name, "sgd, rmsprop, or adam");
  train_cmd->add_option("--lr", tc.optimizer.learning_rate, "learning rate");
  train_cmd->add_option("--minibatch", tc.optimizer.minibatch_size, "frames per step");
  train_cmd->add_option("--steps", tc.optimizer.steps, "minibatch count")
      ->required()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--loss", loss_name, "final or multi (sum over iterations)");
  train_cmd->add_option("--snr-lo", tc.snr_lo_db, "training SNR band low edge, dB");
  train_cmd->add_option("--snr-hi", tc.snr_hi_db, "training SNR band high edge, dB");
  train_cmd->add_option("--seed", tc.seed, "rng seed");
  train_cmd->callback([&] {
    const LinearCode code = load_code(train_code);
    const DecoderSpec spec = DecoderSpec::parse(train_spec_str);
    tc.optimizer.kind = optimizer_kind_from_name(optimizer_name);
    if (loss_name == "final")
      tc.loss.kind = LossConfig::Kind::final_iteration;
    else if (loss_name == "multi")
      tc.loss.kind = LossConfig::Kind::multiloss;
    else
      throw std::runtime_error("unknown loss '" + loss_name + "'");

    const TrainResult result = train(code, spec, tc);
    save_param_bundle(train_out, result.params, spec, code);
    write_text_file(train_out + ".trace.csv", emit_loss_trace_csv(result.trace));
    write_text_file(train_out + ".manifest", emit_train_manifest(code, spec, tc));
    const TracePoint& last = result.trace.back();
    std::cout << "steps " << last.step << "\n";
    std::cout << "final_loss " << format_double(last.loss) << "\n";
    if (last.has_gamma) std::cout << "gamma " << format_double(last.gamma) << "\n";
    std::cout << "bundle " << train_out << "\n";
  });

  CLI::App* gradcheck_cmd = app.add_subcommand("gradcheck", "finite difference gradient audit");
  std::string gc_code, gc_spec_str;
  std::string gc_loss_name = "multi";
  GradCheckConfig gc;
  double gc_tol = 1e-4;
  gradcheck_cmd->add_option("--code", gc_code, "builtin code name or path")->required();
  gradcheck_cmd->add_option("--spec", gc_spec_str, "decoder spec descriptor")->required();
  gradcheck_cmd->add_option("--points", gc.points, "accepted sample count")
      ->check(CLI::PositiveNumber);
  gradcheck_cmd->add_option("--seed", gc.seed, "rng seed");
  gradcheck_cmd->add_option("--loss", gc_loss_name, "final or multi");
  gradcheck_cmd->add_option("--tol", gc_tol, "max relative error to accept");
  gradcheck_cmd->callback([&] {
    const LinearCode code = load_code(gc_code);
    const DecoderSpec spec = DecoderSpec::parse(gc_spec_str);
    LossConfig loss;
    loss.kind = gc_loss_name == "final" ? LossConfig::Kind::final_iteration
                                        : LossConfig::Kind::multiloss;
    gc.max_attempts = 200 * gc.points;
    const GradCheckReport report = grad_check(code, spec, loss, gc);
    std::cout << "accepted " << report.accepted << "\n";
    std::cout << "skipped_kink " << report.skipped_kink << "\n";
    std::cout << "skipped_saturated " << report.skipped_saturated << "\n";
    std::cout << "max_rel_err " << format_double(report.max_rel_err) << "\n";
    if (report.max_rel_err > gc_tol)
      throw std::runtime_error("max relative error " + format_double(report.max_rel_err) +
                               " exceeds " + format_double(gc_tol));
  });

  CLI::App* decode_cmd = app.add_subcommand("decode", "decode one LLR frame, print marginals");
  std::string dec_code, dec_spec_str = "bp,T=5", dec_params_path;
  std::vector<double> dec_llr;
  decode_cmd->add_option("--code", dec_code, "builtin code name or path")->required();
  decode_cmd->add_option("--spec", dec_spec_str, "decoder spec descriptor");
  decode_cmd->add_option("--params", dec_params_path, "parameter bundle path");
  decode_cmd->add_option("--llr", dec_llr, "channel LLRs, one per bit")
      ->required()
      ->delimiter(',');
  decode_cmd->callback([&] {
    const LinearCode code = load_code(dec_code);
    DecoderSpec spec = DecoderSpec::parse(dec_spec_str);
    const Parameters params =
        resolve_params(code, spec, decode_cmd->count("--spec") > 0, dec_params_path);
    const DecoderEngine engine(code, spec);
    const DecodeOutput out = engine.decode(dec_llr, params);
    for (std::size_t t = 0; t < out.marginals.size(); ++t)
      std::cout << "marginals " << t + 1 << " " << join_doubles(out.marginals[t]) << "\n";
    std::cout << "hard";
    for (const auto b : out.hard_decisions) std::cout << ' ' << int(b);
    std::cout << "\nvalid " << (out.valid ? 1 : 0) << "\n";
    std::cout << "iterations " << out.iterations_used << "\n";
  });

  CLI::App* codegen_cmd = app.add_subcommand("codegen", "construct a BCH code bundle");
  int gen_m = 0, gen_t = 0;
  std::string gen_dir = ".";
  codegen_cmd->add_option("--m", gen_m, "field degree, n = 2^m - 1")->required();
  codegen_cmd->add_option("--t", gen_t, "designed error correction capability")->required();
  codegen_cmd->add_option("--out", gen_dir, "output directory");
  codegen_cmd->callback([&] {
    const BchCode bch = make_bch(gen_m, gen_t);
    const std::string id = "bch_" + std::to_string(bch.n) + "_" + std::to_string(bch.k);
    const LinearCode code(id, bch.h);
    const std::string manifest = write_code_bundle(code, gen_dir);
    std::cout << "code_id " << id << "\n";
    std::cout << "n " << code.n() << "\n";
    std::cout << "k " << code.k() << "\n";
    std::cout << "manifest " << manifest << "\n";
  });

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exhaustive MAP/ML on a tiny code");
  std::string or_code, or_mode = "map";
  std::vector<double> or_llr;
  oracle_cmd->add_option("--code", or_code, "builtin code name or path")->required();
  oracle_cmd->add_option("--llr", or_llr, "channel LLRs, one per bit")
      ->required()
      ->delimiter(',');
  oracle_cmd->add_option("--mode", or_mode, "map (posteriors) or ml (codeword)");
  oracle_cmd->callback([&] {
    const LinearCode code = load_code(or_code);
    const ExhaustiveOracle oracle(code);
    if (or_mode == "map") {
      std::cout << "posteriors " << join_doubles(oracle.map_posteriors(or_llr)) << "\n";
      std::cout << "map_llr " << join_doubles(oracle.map_marginals_llr(or_llr)) << "\n";
    } else if (or_mode == "ml") {
      std::cout << "ml_codeword";
      for (const auto b : oracle.ml_codeword(or_llr)) std::cout << ' ' << int(b);
      std::cout << "\n";
    } else {
      throw std::runtime_error("unknown oracle mode '" + or_mode + "'");
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
