// End-to-end acceptance checks. Every case prints one [pass]/[FAIL] line with
// the measured numbers so a run log reads as a scoreboard. Cases that compare
// against published operating points need reference parity-check matrices that
// are not shipped; when data/external lacks them the case falls back to the
// matrix-independent property form and says so on its line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "nbp/code_registry.hpp"
#include "nbp/decoder_engine.hpp"
#include "nbp/gradcheck.hpp"
#include "nbp/harness.hpp"
#include "nbp/loss.hpp"
#include "nbp/mrrd.hpp"
#include "nbp/oracle.hpp"
#include "nbp/parameters.hpp"
#include "nbp/text_format.hpp"
#include "nbp/training.hpp"

using namespace nbp;

namespace {

void verdict(bool ok, const std::string& line) {
  std::cout << (ok ? "[pass] " : "[FAIL] ") << line << std::endl;
  CHECK(ok);
}

// Relative gap with a unit floor, so near-zero values compare absolutely.
double rel_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string external_path(const char* name) {
  return std::string(NBP_DATA_DIR) + "/external/" + name;
}

bool have(const std::string& path) { return std::filesystem::exists(path); }

Parameters jittered_parameters(const DecoderEngine& engine, RngStream& rng) {
  Parameters p = engine.default_parameters();
  for (auto& w : p.edge_weights) w = 1.0 + 0.3 * rng.next_gaussian();
  for (auto& w : p.output_edge_weights) w = 1.0 + 0.3 * rng.next_gaussian();
  for (auto& b : p.offsets) b = 0.1 * std::fabs(rng.next_gaussian());
  for (auto& g : p.gamma_raw) g = 0.4 * rng.next_gaussian();
  return p;
}

}  // namespace

TEST_CASE("unit parameters collapse the learned decoders onto their classical cores") {
  const LinearCode code = make_builtin_code("bch_15_11");
  struct VariantPair {
    const char* derived;
    const char* base;
  };
  const VariantPair pairs[] = {
      {"bp-rnn,T=5,early=0", "bp,T=5,early=0"},
      {"bp-ff,T=5,early=0", "bp,T=5,early=0"},
      {"bp-scalar,T=5,early=0", "bp,T=5,early=0"},
      {"bp-rnn,widx=pair,T=5,early=0", "bp,T=5,early=0"},
      {"nms,T=5,early=0", "minsum,T=5,early=0"},
      {"nnms-rnn,T=5,early=0", "minsum,T=5,early=0"},
      {"nnms-ff,T=5,early=0", "minsum,T=5,early=0"},
      {"noms-rnn,T=5,early=0", "minsum,T=5,early=0"},
      {"oms,T=5,early=0", "minsum,T=5,early=0"},
      {"minsum,relax=scalar,T=5,early=0", "minsum,T=5,early=0"},
  };

  bool hard_ok = true;
  double worst = 0.0;
  for (const VariantPair& pr : pairs) {
    const DecoderEngine derived(code, DecoderSpec::parse(pr.derived));
    const DecoderEngine base(code, DecoderSpec::parse(pr.base));
    Parameters dp = derived.default_parameters();
    // A hugely negative raw value underflows the squashed filter factor to
    // exactly zero, turning the relaxed variant off.
    for (auto& g : dp.gamma_raw) g = -1000.0;
    const Parameters bp = base.default_parameters();

    RngStream rng(2024, 0);
    for (int frame = 0; frame < 200; ++frame) {
      std::vector<double> llr(15);
      for (auto& x : llr) x = 2.2 * rng.next_gaussian();
      const DecodeOutput a = derived.decode(llr, dp);
      const DecodeOutput b = base.decode(llr, bp);
      hard_ok = hard_ok && a.hard_decisions == b.hard_decisions;
      for (std::size_t t = 0; t < a.marginals.size(); ++t)
        for (std::size_t v = 0; v < a.marginals[t].size(); ++v)
          worst = std::max(worst, rel_gap(a.marginals[t][v], b.marginals[t][v]));
      for (std::size_t e = 0; e < a.final_messages.size(); ++e)
        worst = std::max(worst, rel_gap(a.final_messages[e], b.final_messages[e]));
    }
  }
  verdict(hard_ok && worst <= 1e-9,
          "unit-parameter collapse on bch_15_11: hard decisions " +
              std::string(hard_ok ? "identical" : "diverged") +
              ", worst message gap " + format_double(worst) + " (limit 1e-9)");
}

TEST_CASE("one iteration on cycle-free codes reproduces the exact posteriors") {
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"rep3", "spc4"}) {
    const LinearCode code = make_builtin_code(name);
    const ExhaustiveOracle oracle(code);
    const DecoderEngine engine(code, DecoderSpec::parse("bp,T=1,early=0"));
    const Parameters params = engine.default_parameters();

    RngStream rng(515, 0);
    for (int frame = 0; frame < 1000; ++frame) {
      std::vector<double> llr(static_cast<std::size_t>(code.n()));
      for (auto& x : llr) x = 2.5 * rng.next_gaussian();
      const std::vector<double> got = engine.decode(llr, params).marginals[0];
      const std::vector<double> want = oracle.map_marginals_llr(llr);
      for (std::size_t v = 0; v < got.size(); ++v) {
        worst = std::max(worst, std::fabs(got[v] - want[v]));
        worst = std::max(worst, std::fabs(sigmoid(got[v]) - sigmoid(want[v])));
      }
    }
  }
  ok = worst <= 1e-9;
  verdict(ok, "tree-code marginals vs exhaustive enumeration on rep3 and spc4: worst gap " +
                  format_double(worst) + " (limit 1e-9)");
}

TEST_CASE("conjugating the channel values by a codeword conjugates the decisions") {
  bool ok = true;
  long long checked = 0;
  for (const char* name : {"hamming74", "bch_15_11"}) {
    const LinearCode code = make_builtin_code(name);
    for (const char* spec_str :
         {"bp,T=5", "bp-rnn,T=5", "noms-rnn,T=5", "minsum,relax=scalar,T=5"}) {
      const DecoderEngine engine(code, DecoderSpec::parse(spec_str));
      RngStream rng(808, 0);
      const Parameters params = jittered_parameters(engine, rng);

      std::vector<std::uint8_t> info(static_cast<std::size_t>(code.k()));
      for (int pair = 0; pair < 500; ++pair) {
        for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_below(2));
        const std::vector<std::uint8_t> word = code.encode(info);
        std::vector<double> llr(static_cast<std::size_t>(code.n()));
        for (auto& x : llr) x = 2.0 * rng.next_gaussian();
        std::vector<double> conjugated = llr;
        for (std::size_t i = 0; i < llr.size(); ++i)
          if (word[i]) conjugated[i] = -conjugated[i];

        const auto base = engine.decode(llr, params).hard_decisions;
        const auto flipped = engine.decode(conjugated, params).hard_decisions;
        for (std::size_t i = 0; i < base.size(); ++i)
          ok = ok && flipped[i] == (base[i] ^ word[i]);
        ++checked;
      }
    }
  }
  verdict(ok, "codeword conjugation symmetry, exact, over " + std::to_string(checked) +
                  " decode pairs on hamming74 and bch_15_11");
}

TEST_CASE("analytic gradients match finite differences on the small code") {
  bool ok = true;
  std::string detail;
  for (const char* spec_str :
       {"bp-ff,T=3", "bp-rnn,T=3", "nnms-rnn,T=3", "noms-rnn,T=3",
        "minsum,relax=scalar,T=3", "noms-rnn,relax=scalar,T=3"}) {
    GradCheckConfig gc;
    gc.points = 100;
    gc.seed = 23;
    const GradCheckReport report =
        grad_check(make_builtin_code("hamming74"), DecoderSpec::parse(spec_str), LossConfig{}, gc);
    ok = ok && report.accepted == 100 && report.max_rel_err <= 1e-4;
    if (!detail.empty()) detail += ", ";
    detail += std::string(spec_str) + " " + format_double(report.max_rel_err);
  }
  verdict(ok, "gradient audit on hamming74, 100 points each (limit 1e-4): " + detail);
}

TEST_CASE("plain sum-product baseline curve") {
  const DecoderSpec spec = DecoderSpec::parse("bp,T=5");
  StoppingRule rule;
  rule.max_frames = 2'000'000;
  const std::string ext = external_path("bch_63_45_rr.alist");

  if (have(ext)) {
    const LinearCode code = load_code(ext);
    const BerReport report = run_ber_sweep(code, spec, make_default_parameters(spec, code.graph()),
                                           {4.0, 6.0}, rule, 404, 4);
    const BerPoint& p4 = report.points[0];
    const BerPoint& p6 = report.points[1];
    const bool ok = p4.frame_errors >= 100 && p6.frame_errors >= 100 &&
                    std::fabs(p4.ber - 1.69e-2) <= 3.0 * ber_standard_error(p4) &&
                    std::fabs(p6.ber - 2.33e-3) <= 3.0 * ber_standard_error(p6);
    verdict(ok, "sum-product on the referenced right-regular bch_63_45 matrix: ber(4dB)=" +
                    format_double(p4.ber) + " vs 0.0169, ber(6dB)=" + format_double(p6.ber) +
                    " vs 0.00233, within 3 standard errors");
  } else {
    const LinearCode code = make_builtin_code("bch_63_45");
    const BerReport report = run_ber_sweep(code, spec, make_default_parameters(spec, code.graph()),
                                           {3.0, 4.0, 5.0, 6.0}, rule, 404, 4);
    bool ok = true;
    std::string curve;
    for (std::size_t i = 0; i < report.points.size(); ++i) {
      const BerPoint& p = report.points[i];
      ok = ok && p.frame_errors >= 100;
      if (i) ok = ok && p.ber < report.points[i - 1].ber;
      if (!curve.empty()) curve += " ";
      curve += format_double(p.ber);
    }
    verdict(ok, "sum-product on shipped cyclic bch_63_45 (reference matrix absent, downgraded to "
                "monotone curve), h_hash " +
                    report.provenance.h_hash + ", ber 3-6dB: " + curve);
  }
}

TEST_CASE("min-sum baseline curve") {
  const DecoderSpec spec = DecoderSpec::parse("minsum,T=5");
  StoppingRule rule;
  rule.max_frames = 2'000'000;
  const std::string ext = external_path("bch_63_45_rr.alist");

  if (have(ext)) {
    const LinearCode code = load_code(ext);
    const BerReport report = run_ber_sweep(code, spec, make_default_parameters(spec, code.graph()),
                                           {6.0}, rule, 606, 4);
    const BerPoint& p6 = report.points[0];
    const bool ok =
        p6.frame_errors >= 100 && std::fabs(p6.ber - 3.25e-3) <= 3.0 * ber_standard_error(p6);
    verdict(ok, "min-sum on the referenced right-regular bch_63_45 matrix: ber(6dB)=" +
                    format_double(p6.ber) + " vs 0.00325, within 3 standard errors");
  } else {
    const LinearCode code = make_builtin_code("bch_63_45");
    const BerReport report = run_ber_sweep(code, spec, make_default_parameters(spec, code.graph()),
                                           {3.0, 4.0, 5.0, 6.0}, rule, 606, 4);
    bool ok = true;
    std::string curve;
    for (std::size_t i = 0; i < report.points.size(); ++i) {
      const BerPoint& p = report.points[i];
      ok = ok && p.frame_errors >= 100;
      if (i) ok = ok && p.ber < report.points[i - 1].ber;
      if (!curve.empty()) curve += " ";
      curve += format_double(p.ber);
    }
    verdict(ok, "min-sum on shipped cyclic bch_63_45 (reference matrix absent, downgraded to "
                "monotone curve), h_hash " +
                    report.provenance.h_hash + ", ber 3-6dB: " + curve);
  }
}

TEST_CASE("trained recurrent weights beat plain decoding by the required factor") {
  const LinearCode code = make_builtin_code("bch_63_36");
  const DecoderSpec learned_spec = DecoderSpec::parse("bp-rnn,T=5");
  const DecoderSpec plain_spec = DecoderSpec::parse("bp,T=5");

  TrainConfig tc;
  tc.loss.kind = LossConfig::Kind::multiloss;
  tc.optimizer.kind = OptimizerConfig::Kind::rmsprop;
  tc.optimizer.learning_rate = 0.001;
  tc.optimizer.minibatch_size = 120;
  tc.optimizer.steps = 2000;
  tc.seed = 7;
  const TrainResult tr = train(code, learned_spec, tc);

  StoppingRule rule;
  rule.max_frames = 2'000'000;
  const BerPoint plain =
      run_ber_sweep(code, plain_spec, make_default_parameters(plain_spec, code.graph()), {6.0},
                    rule, 55, 4)
          .points[0];
  const BerPoint learned =
      run_ber_sweep(code, learned_spec, tr.params, {6.0}, rule, 55, 4).points[0];

  const double ratio = learned.ber > 0.0 ? plain.ber / learned.ber
                                         : std::numeric_limits<double>::infinity();
  const bool ok = plain.frame_errors >= 100 && learned.frame_errors >= 100 &&
                  learned.ber < plain.ber && ratio >= 1.3;
  verdict(ok, "trained bp-rnn vs plain bp on bch_63_36 at 6dB after 2000 minibatches: ber " +
                  format_double(learned.ber) + " vs " + format_double(plain.ber) + ", factor " +
                  format_double(ratio) + " (need >= 1.3)");
}

TEST_CASE("the learned relaxation coefficient settles inside the expected band") {
  const LinearCode code = make_builtin_code("bch_63_45");
  const DecoderSpec spec = DecoderSpec::parse("minsum,relax=scalar,T=5");

  TrainConfig tc;
  tc.loss.kind = LossConfig::Kind::multiloss;
  tc.optimizer.kind = OptimizerConfig::Kind::adam;
  tc.optimizer.learning_rate = 0.01;
  tc.optimizer.minibatch_size = 120;
  tc.optimizer.steps = 1000;
  tc.seed = 3;
  const TrainResult tr = train(code, spec, tc);

  double lo = 1.0, hi = 0.0;
  for (std::size_t s = tr.trace.size() - 100; s < tr.trace.size(); ++s) {
    lo = std::min(lo, tr.trace[s].gamma);
    hi = std::max(hi, tr.trace[s].gamma);
  }
  const double gamma = tr.trace.back().gamma;
  const bool stable = hi - lo < 0.01;
  const bool in_band = gamma >= 0.75 && gamma <= 0.95;

  // Pinning the coefficient at the reference value 0.875 must not move the
  // error rate by more than noise.
  Parameters pinned = tr.params;
  pinned.gamma_raw.assign(pinned.gamma_raw.size(), std::log(7.0));
  StoppingRule rule;
  rule.max_frames = 2'000'000;
  const BerPoint learned = run_ber_sweep(code, spec, tr.params, {6.0}, rule, 88, 4).points[0];
  const BerPoint fixed = run_ber_sweep(code, spec, pinned, {6.0}, rule, 88, 4).points[0];
  const double se = std::sqrt(ber_standard_error(learned) * ber_standard_error(learned) +
                              ber_standard_error(fixed) * ber_standard_error(fixed));
  const bool near = std::fabs(learned.ber - fixed.ber) < 2.0 * se &&
                    learned.frame_errors >= 100 && fixed.frame_errors >= 100;

  verdict(stable && in_band && near,
          "relaxed min-sum on bch_63_45: gamma " + format_double(gamma) + " (band 0.75..0.95), " +
              "last-100-step wobble " + format_double(hi - lo) + " (limit 0.01), ber learned " +
              format_double(learned.ber) + " vs pinned 0.875 " + format_double(fixed.ber) +
              " within 2 standard errors " + format_double(2.0 * se));
}

TEST_CASE("more permutation branches never hurt and a trained inner helps") {
  const std::string ext = external_path("bch_63_36_cr.alist");
  const bool referenced = have(ext);
  const LinearCode code = referenced ? load_code(ext) : make_builtin_code("bch_63_36");
  // Branch counts are compared pairwise, so every sweep must measure the same
  // frame window: a fixed frame budget, no error-triggered stopping. Budgets
  // are sized to leave well over 100 frame errors at every point.
  StoppingRule rule;
  rule.min_frame_errors = 100'000'000;
  rule.max_frames = referenced ? 400'000 : 4096;

  MrrdConfig cfg;
  cfg.blocks = 30;
  cfg.inner_spec = DecoderSpec::parse("bp");
  const Parameters plain_params = make_default_parameters(cfg.inner_spec, code.graph());

  BerReport by_m[3];
  const int branch_counts[3] = {1, 3, 5};
  for (int i = 0; i < 3; ++i) {
    cfg.branches = branch_counts[i];
    by_m[i] = run_mrrd_sweep(code, cfg, plain_params, {4.0, 5.0}, rule, 909, 4);
  }
  bool mono = true;
  for (int s = 0; s < 2; ++s) {
    mono = mono && by_m[0].points[s].frame_errors >= 100 &&
           by_m[1].points[s].frame_errors >= 100 && by_m[2].points[s].frame_errors >= 100;
    mono = mono && by_m[1].points[s].ber <= by_m[0].points[s].ber &&
           by_m[2].points[s].ber <= by_m[1].points[s].ber;
  }

  bool numeric = true;
  std::string numeric_note;
  if (referenced) {
    const BerPoint& p5 = by_m[0].points[1];
    numeric = std::fabs(p5.ber - 4.19e-4) <= 3.0 * ber_standard_error(p5) &&
              std::fabs(p5.mean_iterations / 3.21 - 1.0) <= 0.15;
    numeric_note = ", referenced matrix: ber(5dB)=" + format_double(p5.ber) +
                   " vs 0.000419, mean iterations " + format_double(p5.mean_iterations) +
                   " vs 3.21 +-15%";
  } else {
    numeric_note = ", reference matrix absent so the published operating point is not checked";
  }

  // Trained recurrent inner at matched branch and block counts. The weights
  // come from the usual five-iteration fit; tying makes them valid for the
  // two-iteration blocks. Extrinsic is carried between blocks on both sides
  // of the comparison, and the trained inner must also beat the LLRs-only
  // plain wrapper above, so the conclusion is carry-mode independent.
  const DecoderSpec inner_spec = DecoderSpec::parse("bp-rnn,T=5");
  TrainConfig tc;
  tc.loss.kind = LossConfig::Kind::multiloss;
  tc.optimizer.kind = OptimizerConfig::Kind::rmsprop;
  tc.optimizer.learning_rate = 0.001;
  tc.optimizer.minibatch_size = 120;
  tc.optimizer.steps = 2000;
  tc.seed = 7;
  const TrainResult tr = train(code, inner_spec, tc);

  MrrdConfig carry_cfg = cfg;
  carry_cfg.branches = 1;
  carry_cfg.extrinsic_carry = true;
  const BerReport plain_carry = run_mrrd_sweep(code, carry_cfg, plain_params, {4.0, 5.0}, rule,
                                               909, 4);
  carry_cfg.inner_spec = inner_spec;
  const BerReport trained = run_mrrd_sweep(code, carry_cfg, tr.params, {4.0, 5.0}, rule, 909, 4);
  bool gain = true;
  for (int s = 0; s < 2; ++s)
    gain = gain && trained.points[s].frame_errors >= 100 &&
           trained.points[s].ber <= plain_carry.points[s].ber &&
           trained.points[s].ber <= by_m[0].points[s].ber;

  verdict(mono && numeric && gain,
          "permutation decoding on " + std::string(referenced ? "referenced" : "shipped cyclic") +
              " bch_63_36: ber(5dB) m=1/3/5 " + format_double(by_m[0].points[1].ber) + "/" +
              format_double(by_m[1].points[1].ber) + "/" + format_double(by_m[2].points[1].ber) +
              " monotone, trained recurrent inner " + format_double(trained.points[1].ber) +
              " <= plain with carry " + format_double(plain_carry.points[1].ber) +
              " and <= plain without " + format_double(by_m[0].points[1].ber) + numeric_note);
}

TEST_CASE("fused leave-one-out kernels agree with direct recomputation") {
  const std::vector<std::string> names = builtin_code_names();
  double worst = 0.0;
  int instances = 0;

  for (const char* spec_str : {"bp-rnn,T=3,early=0", "nnms-rnn,T=3,early=0"}) {
    for (const std::string& name : names) {
      const LinearCode code = make_builtin_code(name);
      const DecoderEngine engine(code, DecoderSpec::parse(spec_str));
      const int edges = code.graph().n_edges;
      RngStream rng(1234, 0);
      const int per_code = 1000 / static_cast<int>(names.size()) + 1;

      std::vector<double> llr(static_cast<std::size_t>(code.n()));
      std::vector<double> c2v(static_cast<std::size_t>(edges));
      std::vector<double> v2c(static_cast<std::size_t>(edges));
      std::vector<double> v2c_naive(static_cast<std::size_t>(edges));
      std::vector<double> raw(static_cast<std::size_t>(edges));
      std::vector<double> raw_naive(static_cast<std::size_t>(edges));

      for (int i = 0; i < per_code; ++i) {
        const Parameters params = jittered_parameters(engine, rng);
        for (auto& x : llr) x = 2.5 * rng.next_gaussian();
        for (auto& x : c2v) x = 1.5 * rng.next_gaussian();
        const int layer = 1 + i % 3;

        engine.variable_update(layer, llr, c2v, params, v2c);
        engine.variable_update_naive(layer, llr, c2v, params, v2c_naive);
        engine.check_update(layer, v2c, params, raw);
        engine.check_update_naive(layer, v2c, params, raw_naive);
        for (int e = 0; e < edges; ++e) {
          worst = std::max(worst, rel_gap(v2c[static_cast<std::size_t>(e)],
                                          v2c_naive[static_cast<std::size_t>(e)]));
          worst = std::max(worst, rel_gap(raw[static_cast<std::size_t>(e)],
                                          raw_naive[static_cast<std::size_t>(e)]));
        }
        ++instances;
      }
    }
  }
  verdict(worst <= 1e-12 && instances >= 2000,
          "running-total kernels vs leave-one-out recomputation, " + std::to_string(instances) +
              " instances across all shipped codes: worst gap " + format_double(worst) +
              " (limit 1e-12)");
}

TEST_CASE("identical seeds reproduce a sweep byte for byte") {
  const std::string cli = NBP_CLI_PATH;
  const std::filesystem::path tmp = std::filesystem::temp_directory_path();
  const std::string out_a = (tmp / "nbp_acceptance_a.csv").string();
  const std::string out_b = (tmp / "nbp_acceptance_b.csv").string();

  const auto run = [&](const std::string& out) {
    const std::string cmd = "\"" + cli +
                            "\" ber --code bch_15_11 --spec nms,T=5 --snr 2,4 --seed 9 "
                            "--workers 2 --min-frame-errors 50 --max-frames 3000 --out " +
                            out + " > /dev/null";
    return std::system(cmd.c_str());
  };
  const int rc_a = run(out_a);
  const int rc_b = run(out_b);

  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string a = slurp(out_a);
  const std::string b = slurp(out_b);

  const bool ok = rc_a == 0 && rc_b == 0 && !a.empty() && a == b &&
                  a.rfind("ebno_db,frames,frame_errors,bits,bit_errors,ber,fer,mean_iterations\n",
                          0) == 0;
  verdict(ok, "two identically seeded sweeps through the command line: " +
                  std::to_string(a.size()) + " bytes, byte-identical " +
                  std::string(a == b ? "yes" : "no"));
}
