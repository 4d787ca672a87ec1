#include "nbp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <stdexcept>
#include <thread>

#include "nbp/text_format.hpp"

namespace nbp {

namespace {

// Frames per worker between stopping-rule checks; rounds overshoot the error
// target by at most workers * kChunk frames but never exceed the frame cap.
constexpr long long kChunk = 64;

struct WorkerTotals {
  long long frames = 0;
  long long frame_errors = 0;
  long long bit_errors = 0;
  long long bit_errors_sq = 0;
  long long iterations = 0;
};

std::string hex_u64(std::uint64_t v) {
  char buf[16];
  std::string out = "0x";
  const auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  out.append(16 - static_cast<std::size_t>(res.ptr - buf), '0');
  out.append(buf, res.ptr);
  return out;
}

Provenance make_provenance(const LinearCode& code, std::string spec, std::uint64_t seed,
                           int workers) {
  Provenance p;
  p.code_id = code.id();
  p.h_hash = hex_u64(code.h_hash());
  p.spec = std::move(spec);
  p.seed = seed;
  p.workers = workers;
  return p;
}

}  // namespace

void StoppingRule::validate() const {
  if (min_frame_errors < 1)
    throw std::invalid_argument("StoppingRule: min_frame_errors must be at least 1");
  if (max_frames < 1) throw std::invalid_argument("StoppingRule: max_frames must be at least 1");
}

double ber_standard_error(const BerPoint& point) {
  if (point.frames < 2 || point.bits <= 0) return 0.0;
  const double f = static_cast<double>(point.frames);
  const double mean = static_cast<double>(point.bit_errors) / f;
  const double var =
      std::max(0.0, (static_cast<double>(point.bit_errors_sq) - f * mean * mean) / (f - 1.0));
  const double n = static_cast<double>(point.bits) / f;
  return std::sqrt(var / f) / n;
}

std::string Provenance::to_text() const {
  std::string out;
  out += "code_id " + code_id + "\n";
  out += "h_hash " + h_hash + "\n";
  out += "spec " + spec + "\n";
  out += "seed " + std::to_string(seed) + "\n";
  out += "workers " + std::to_string(workers) + "\n";
  out += "version " + std::string(version) + "\n";
  return out;
}

BerPoint simulate_point(const LinearCode& code, double ebno_db, const StoppingRule& rule,
                        std::uint64_t seed, int workers, std::uint64_t stream_base,
                        const FrameDecoder& decode_frame) {
  rule.validate();
  if (workers < 1) throw std::invalid_argument("simulate_point: workers must be at least 1");

  const double sigma = sigma_from_ebno(ebno_db, code.rate());
  const int n = code.n();
  const int k = code.k();

  std::vector<RngStream> streams;
  streams.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    streams.emplace_back(seed, stream_base + static_cast<std::uint64_t>(w));

  long long frames = 0, frame_errors = 0, bit_errors = 0, bit_errors_sq = 0, iterations = 0;
  std::vector<std::uint8_t> info(static_cast<std::size_t>(k));

  const auto simulate_one = [&](RngStream& rng, WorkerTotals& t,
                               std::vector<std::uint8_t>& scratch_info) {
    for (auto& b : scratch_info) b = static_cast<std::uint8_t>(rng.next_below(2));
    const std::vector<std::uint8_t> word = code.encode(scratch_info);
    const std::vector<double> received = transmit(modulate(word), sigma, rng);
    const std::vector<double> llr = llr_from_received(received, sigma);
    const FrameDecode out = decode_frame(llr, rng);
    int errs = 0;
    for (int i = 0; i < n; ++i)
      errs += out.word[static_cast<std::size_t>(i)] != word[static_cast<std::size_t>(i)];
    t.frames += 1;
    t.bit_errors += errs;
    t.bit_errors_sq += static_cast<long long>(errs) * errs;
    t.frame_errors += errs > 0;
    t.iterations += out.iterations;
  };

  while (frame_errors < rule.min_frame_errors && frames < rule.max_frames) {
    const long long batch =
        std::min(static_cast<long long>(workers) * kChunk, rule.max_frames - frames);
    std::vector<WorkerTotals> part(static_cast<std::size_t>(workers));

    const auto run_worker = [&](int w) {
      std::vector<std::uint8_t> scratch = info;
      for (long long f = frames; f < frames + batch; ++f)
        if (f % workers == w)
          simulate_one(streams[static_cast<std::size_t>(w)], part[static_cast<std::size_t>(w)],
                       scratch);
    };

    if (workers == 1) {
      run_worker(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(static_cast<std::size_t>(workers - 1));
      for (int w = 1; w < workers; ++w) pool.emplace_back(run_worker, w);
      run_worker(0);
    }

    for (const WorkerTotals& t : part) {
      frames += t.frames;
      frame_errors += t.frame_errors;
      bit_errors += t.bit_errors;
      bit_errors_sq += t.bit_errors_sq;
      iterations += t.iterations;
    }
  }

  BerPoint p;
  p.ebno_db = ebno_db;
  p.frames = frames;
  p.frame_errors = frame_errors;
  p.bits = frames * n;
  p.bit_errors = bit_errors;
  p.bit_errors_sq = bit_errors_sq;
  p.ber = p.bits > 0 ? static_cast<double>(bit_errors) / static_cast<double>(p.bits) : 0.0;
  p.fer = frames > 0 ? static_cast<double>(frame_errors) / static_cast<double>(frames) : 0.0;
  p.mean_iterations =
      frames > 0 ? static_cast<double>(iterations) / static_cast<double>(frames) : 0.0;
  return p;
}

BerReport run_ber_sweep(const LinearCode& code, const DecoderSpec& spec, const Parameters& params,
                        const std::vector<double>& snr_db, const StoppingRule& rule,
                        std::uint64_t seed, int workers) {
  if (snr_db.empty()) throw std::invalid_argument("run_ber_sweep: SNR grid is empty");
  const DecoderEngine engine(code, spec);

  BerReport report;
  report.provenance = make_provenance(code, spec.descriptor(), seed, workers);
  const FrameDecoder decode_frame = [&](std::span<const double> llr, RngStream&) {
    DecodeOutput out = engine.decode(llr, params);
    return FrameDecode{std::move(out.hard_decisions), out.iterations_used};
  };
  for (std::size_t i = 0; i < snr_db.size(); ++i)
    report.points.push_back(simulate_point(code, snr_db[i], rule, seed, workers,
                                           i * static_cast<std::uint64_t>(workers), decode_frame));
  return report;
}

BerReport run_mrrd_sweep(const LinearCode& code, const MrrdConfig& config, const Parameters& params,
                         const std::vector<double>& snr_db, const StoppingRule& rule,
                         std::uint64_t seed, int workers) {
  if (snr_db.empty()) throw std::invalid_argument("run_mrrd_sweep: SNR grid is empty");
  const MrrdDecoder decoder(code, config);

  std::string spec = "mrrd,m=" + std::to_string(config.branches) +
                     ",c=" + std::to_string(config.blocks) +
                     ",carry=" + std::to_string(config.extrinsic_carry ? 1 : 0) +
                     ",inner=" + decoder.engine().spec().descriptor();

  BerReport report;
  report.provenance = make_provenance(code, std::move(spec), seed, workers);
  const FrameDecoder decode_frame = [&](std::span<const double> llr, RngStream& rng) {
    MrrdStats stats;
    FrameDecode out;
    out.word = decoder.decode(rng, llr, params, stats);
    out.iterations = stats.iterations;
    return out;
  };
  for (std::size_t i = 0; i < snr_db.size(); ++i)
    report.points.push_back(simulate_point(code, snr_db[i], rule, seed, workers,
                                           i * static_cast<std::uint64_t>(workers), decode_frame));
  return report;
}

std::string emit_csv(const BerReport& report) {
  std::string out = "ebno_db,frames,frame_errors,bits,bit_errors,ber,fer,mean_iterations\n";
  for (const BerPoint& p : report.points) {
    out += format_double(p.ebno_db);
    out += ',';
    out += std::to_string(p.frames);
    out += ',';
    out += std::to_string(p.frame_errors);
    out += ',';
    out += std::to_string(p.bits);
    out += ',';
    out += std::to_string(p.bit_errors);
    out += ',';
    out += format_double(p.ber);
    out += ',';
    out += format_double(p.fer);
    out += ',';
    out += format_double(p.mean_iterations);
    out += '\n';
  }
  return out;
}

}  // namespace nbp
