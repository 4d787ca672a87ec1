#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nbp/binary_matrix.hpp"
#include "nbp/tanner_graph.hpp"

namespace nbp {

// Binary linear code defined by a parity-check matrix. Redundant rows are
// allowed; the dimension is n - rank(h). A generator matrix is derived by
// Gaussian elimination with column pivoting.
class LinearCode {
 public:
  LinearCode(std::string id, BinaryMatrix h);

  const std::string& id() const { return id_; }
  const BinaryMatrix& h() const { return h_; }
  const BinaryMatrix& generator() const { return g_; }
  const TannerGraph& graph() const { return graph_; }

  int n() const { return h_.cols(); }
  int k() const { return k_; }
  int num_checks() const { return h_.rows(); }
  double rate() const { return static_cast<double>(k_) / n(); }

  std::vector<std::uint8_t> syndrome(std::span<const std::uint8_t> word) const;
  bool is_codeword(std::span<const std::uint8_t> word) const;

  // info has k bits; returns the n-bit codeword info * G.
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;

  std::uint64_t h_hash() const { return h_hash_; }

 private:
  std::string id_;
  BinaryMatrix h_;
  BinaryMatrix g_;
  TannerGraph graph_;
  int k_ = 0;
  std::uint64_t h_hash_ = 0;
};

}  // namespace nbp
