#include "nbp/linear_code.hpp"

#include <stdexcept>

namespace nbp {

namespace {

// Reduced row echelon form over GF(2); returns the pivot column of each
// pivot row in order.
std::vector<int> rref(BinaryMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
    int p = -1;
    for (int r = row; r < m.rows(); ++r) {
      if (m.at(r, c)) {
        p = r;
        break;
      }
    }
    if (p < 0) continue;
    if (p != row) {
      for (int j = 0; j < m.cols(); ++j) {
        const auto t = m.at(row, j);
        m.set(row, j, m.at(p, j));
        m.set(p, j, t);
      }
    }
    for (int r = 0; r < m.rows(); ++r) {
      if (r != row && m.at(r, c)) {
        for (int j = c; j < m.cols(); ++j) m.set(r, j, m.at(r, j) ^ m.at(row, j));
      }
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

LinearCode::LinearCode(std::string id, BinaryMatrix h)
    : id_(std::move(id)), h_(std::move(h)), graph_(build_tanner(h_)), h_hash_(h_.content_hash()) {
  BinaryMatrix red = h_;
  const std::vector<int> pivots = rref(red);
  const int rank = static_cast<int>(pivots.size());
  k_ = n() - rank;
  if (k_ <= 0) throw std::invalid_argument("LinearCode: parity-check matrix leaves no message bits");

  std::vector<std::uint8_t> is_pivot(n(), 0);
  for (int c : pivots) is_pivot[c] = 1;

  // One generator row per free column: set that column to 1 and read the
  // pivot-column values off the reduced matrix.
  g_ = BinaryMatrix(k_, n());
  int gi = 0;
  for (int f = 0; f < n(); ++f) {
    if (is_pivot[f]) continue;
    g_.set(gi, f, 1);
    for (int r = 0; r < rank; ++r) g_.set(gi, pivots[r], red.at(r, f));
    ++gi;
  }

  for (int r = 0; r < k_; ++r) {
    if (!is_codeword(g_.row(r))) throw std::logic_error("LinearCode: generator row fails the parity check");
  }
}

std::vector<std::uint8_t> LinearCode::syndrome(std::span<const std::uint8_t> word) const {
  return h_.multiply(word);
}

bool LinearCode::is_codeword(std::span<const std::uint8_t> word) const {
  const auto s = syndrome(word);
  for (auto b : s) {
    if (b) return false;
  }
  return true;
}

std::vector<std::uint8_t> LinearCode::encode(std::span<const std::uint8_t> info) const {
  if (static_cast<int>(info.size()) != k_) throw std::invalid_argument("encode: info length must be k");
  std::vector<std::uint8_t> c(n(), 0);
  for (int j = 0; j < k_; ++j) {
    if (!info[j]) continue;
    for (int i = 0; i < n(); ++i) c[i] ^= g_.at(j, i);
  }
  return c;
}

}  // namespace nbp
