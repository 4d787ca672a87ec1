#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nbp/channel.hpp"
#include "nbp/decoder_engine.hpp"
#include "nbp/linear_code.hpp"
#include "nbp/mrrd.hpp"
#include "nbp/parameters.hpp"

namespace nbp {

inline constexpr const char* kVersionString = "v0.1.0";

// Error-targeted stopping with a hard cap: a point ends once it has seen
// min_frame_errors frame errors or max_frames frames.
struct StoppingRule {
  long long min_frame_errors = 100;
  long long max_frames = 10'000'000;

  void validate() const;
};

struct BerPoint {
  double ebno_db = 0.0;
  long long frames = 0;
  long long frame_errors = 0;
  long long bits = 0;
  long long bit_errors = 0;
  long long bit_errors_sq = 0;  // sum of squared per-frame error counts, not in the CSV
  double ber = 0.0;
  double fer = 0.0;
  double mean_iterations = 0.0;
};

// Monte-Carlo standard error of the BER estimate, from the frame-level
// variance of the per-frame bit error counts (bits of one frame are
// correlated, so the binomial formula would be too tight).
double ber_standard_error(const BerPoint& point);

// Everything needed to tell two sweeps apart after the fact; in particular
// the parity-check matrix hash, so curves from different H never get mixed up.
struct Provenance {
  std::string code_id;
  std::string h_hash;
  std::string spec;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string version = kVersionString;

  std::string to_text() const;  // flat key-value lines
};

struct BerReport {
  Provenance provenance;
  std::vector<BerPoint> points;  // one per requested SNR, in request order
};

// Decoding result of one frame plus the iteration count charged to it. The
// stream argument continues the worker's stream for decoders that draw
// randomness of their own.
struct FrameDecode {
  std::vector<std::uint8_t> word;
  long long iterations = 0;
};
using FrameDecoder =
    std::function<FrameDecode(std::span<const double> llr, RngStream& rng)>;

// Measures one SNR point. Frame f belongs to worker f mod workers; worker w
// draws everything for its frames from the stream (seed, stream_base + w), so
// results depend on the worker count but not on how workers are scheduled.
// Random codewords are transmitted over the BPSK AWGN channel.
BerPoint simulate_point(const LinearCode& code, double ebno_db, const StoppingRule& rule,
                        std::uint64_t seed, int workers, std::uint64_t stream_base,
                        const FrameDecoder& decode_frame);

BerReport run_ber_sweep(const LinearCode& code, const DecoderSpec& spec, const Parameters& params,
                        const std::vector<double>& snr_db, const StoppingRule& rule,
                        std::uint64_t seed, int workers);

BerReport run_mrrd_sweep(const LinearCode& code, const MrrdConfig& config, const Parameters& params,
                         const std::vector<double>& snr_db, const StoppingRule& rule,
                         std::uint64_t seed, int workers);

// Header ebno_db,frames,frame_errors,bits,bit_errors,ber,fer,mean_iterations
// then one row per point, shortest round-trip float formatting, no locale.
std::string emit_csv(const BerReport& report);

}  // namespace nbp
