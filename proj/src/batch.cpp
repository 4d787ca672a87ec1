#include "nbp/batch.hpp"

#include <stdexcept>

namespace nbp {

Batch sample_batch(RngStream& rng, const LinearCode& code, int snr_lo_db, int snr_hi_db,
                   int size) {
  if (snr_lo_db > snr_hi_db) throw std::invalid_argument("sample_batch: empty SNR range");
  if (size < 1) throw std::invalid_argument("sample_batch: batch size must be positive");

  Batch batch;
  batch.n = code.n();
  batch.targets.assign(static_cast<std::size_t>(code.n()), 0);
  batch.llr.reserve(static_cast<std::size_t>(size));
  batch.ebno_db.reserve(static_cast<std::size_t>(size));

  const std::vector<double> symbols = modulate(batch.targets);
  const int grid = snr_hi_db - snr_lo_db + 1;
  const int base = size / grid;
  const int rem = size % grid;

  for (int g = 0; g < grid; ++g) {
    const int snr = snr_lo_db + g;
    const double sigma = sigma_from_ebno(static_cast<double>(snr), code.rate());
    const int frames = base + (g < rem ? 1 : 0);
    for (int f = 0; f < frames; ++f) {
      const std::vector<double> received = transmit(symbols, sigma, rng);
      batch.llr.push_back(llr_from_received(received, sigma));
      batch.ebno_db.push_back(static_cast<double>(snr));
    }
  }
  return batch;
}

}  // namespace nbp
