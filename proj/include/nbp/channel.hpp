#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nbp {

// Deterministic random stream: a fixed generator seeded from (seed, stream_id)
// through a splitmix64 mix. Equal inputs give equal sequences on every
// platform; distinct stream ids give independent streams for workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();

  // Standard normal via the polar method; pairs are cached.
  double next_gaussian();

  // Uniform integer in [0, bound), rejection sampled.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Binary-input AWGN with BPSK mapping 0 -> +1, 1 -> -1, Eb/N0 convention.
struct ChannelConfig {
  double ebno_db = 0.0;
  double rate = 0.5;
  double sigma = 0.0;
};

double sigma_from_ebno(double ebno_db, double rate);
ChannelConfig make_channel(double ebno_db, double rate);

std::vector<double> modulate(std::span<const std::uint8_t> bits);

// Adds sigma-scaled Gaussian noise to each symbol.
std::vector<double> transmit(std::span<const double> symbols, double sigma, RngStream& rng);

// Channel log-likelihood ratio log Pr(bit=1|y) / Pr(bit=0|y) = -2 y / sigma^2.
// Positive values favor bit 1.
double llr_from_symbol(double y, double sigma);
std::vector<double> llr_from_received(std::span<const double> received, double sigma);

}  // namespace nbp
