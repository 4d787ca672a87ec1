#pragma once

#include <cstdint>
#include <vector>

#include "nbp/channel.hpp"
#include "nbp/linear_code.hpp"

namespace nbp {

// Training minibatch. Frames carry the all-zero codeword, so the targets are
// one shared zero word; what varies per frame is the noise and its SNR label.
struct Batch {
  int n = 0;
  std::vector<std::vector<double>> llr;  // frame-major, each of length n
  std::vector<std::uint8_t> targets;     // all zero, length n
  std::vector<double> ebno_db;           // per frame

  int size() const { return static_cast<int>(llr.size()); }
};

// Frames are split evenly across the integer-dB grid lo..hi, ascending, with
// any remainder going to the lowest SNRs. Zero codeword, BPSK, AWGN.
Batch sample_batch(RngStream& rng, const LinearCode& code, int snr_lo_db, int snr_hi_db,
                   int size);

}  // namespace nbp
