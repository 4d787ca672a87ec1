#include "nbp/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace nbp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state ^= stream_id * 0xda942042e4dd58b5ull + 0x2545f4914f6cdd1dull;
  std::uint64_t b = splitmix64(state);
  gen_.seed(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * f;
  has_cached_ = true;
  return u * f;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x > limit);
  return x % bound;
}

double sigma_from_ebno(double ebno_db, double rate) {
  if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("sigma_from_ebno: rate must be in (0, 1]");
  return 1.0 / std::sqrt(2.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

ChannelConfig make_channel(double ebno_db, double rate) {
  return {ebno_db, rate, sigma_from_ebno(ebno_db, rate)};
}

std::vector<double> modulate(std::span<const std::uint8_t> bits) {
  std::vector<double> x(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) x[i] = bits[i] ? -1.0 : 1.0;
  return x;
}

std::vector<double> transmit(std::span<const double> symbols, double sigma, RngStream& rng) {
  if (sigma <= 0.0) throw std::invalid_argument("transmit: sigma must be positive");
  std::vector<double> y(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) y[i] = symbols[i] + sigma * rng.next_gaussian();
  return y;
}

double llr_from_symbol(double y, double sigma) { return -2.0 * y / (sigma * sigma); }

std::vector<double> llr_from_received(std::span<const double> received, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("llr_from_received: sigma must be positive");
  std::vector<double> l(received.size());
  for (std::size_t i = 0; i < received.size(); ++i) l[i] = llr_from_symbol(received[i], sigma);
  return l;
}

}  // namespace nbp
