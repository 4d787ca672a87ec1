#include "nbp/binary_matrix.hpp"

#include <stdexcept>

namespace nbp {

BinaryMatrix::BinaryMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("BinaryMatrix: dimensions must be positive");
  bits_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

BinaryMatrix BinaryMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  if (rows.size() == 0) throw std::invalid_argument("BinaryMatrix: no rows");
  const int n_cols = static_cast<int>(rows.begin()->size());
  BinaryMatrix m(static_cast<int>(rows.size()), n_cols);
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_cols)
      throw std::invalid_argument("BinaryMatrix: ragged rows");
    int c = 0;
    for (int v : row) m.set(r, c++, v);
    ++r;
  }
  return m;
}

std::span<const std::uint8_t> BinaryMatrix::row(int r) const {
  return {bits_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
}

int BinaryMatrix::count_ones() const {
  int n = 0;
  for (auto b : bits_) n += b;
  return n;
}

int BinaryMatrix::row_weight(int r) const {
  int n = 0;
  for (int c = 0; c < cols_; ++c) n += at(r, c);
  return n;
}

int BinaryMatrix::col_weight(int c) const {
  int n = 0;
  for (int r = 0; r < rows_; ++r) n += at(r, c);
  return n;
}

int BinaryMatrix::rank() const {
  std::vector<std::uint8_t> work = bits_;
  auto entry = [&](int r, int c) -> std::uint8_t& {
    return work[static_cast<std::size_t>(r) * cols_ + c];
  };
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r) {
      if (entry(r, c)) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    for (int j = 0; j < cols_; ++j) std::swap(entry(rank, j), entry(pivot, j));
    for (int r = 0; r < rows_; ++r) {
      if (r != rank && entry(r, c)) {
        for (int j = c; j < cols_; ++j) entry(r, j) ^= entry(rank, j);
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<std::uint8_t> BinaryMatrix::multiply(std::span<const std::uint8_t> x) const {
  if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("BinaryMatrix: size mismatch");
  std::vector<std::uint8_t> y(rows_, 0);
  for (int r = 0; r < rows_; ++r) {
    std::uint8_t acc = 0;
    const std::uint8_t* row_ptr = bits_.data() + static_cast<std::size_t>(r) * cols_;
    for (int c = 0; c < cols_; ++c) acc ^= static_cast<std::uint8_t>(row_ptr[c] & x[c]);
    y[r] = acc;
  }
  return y;
}

bool BinaryMatrix::operator==(const BinaryMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
}

std::uint64_t BinaryMatrix::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(rows_));
  mix(static_cast<std::uint64_t>(cols_));
  for (auto b : bits_) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nbp
