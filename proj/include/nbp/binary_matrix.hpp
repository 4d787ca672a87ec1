#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace nbp {

// Dense matrix over GF(2), row major, one byte per entry.
// Sized for parity-check matrices of short block codes, not for sparse storage.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols);

  // Builds from explicit row data; every row must have the same length.
  static BinaryMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::uint8_t at(int r, int c) const { return bits_[static_cast<std::size_t>(r) * cols_ + c]; }
  void set(int r, int c, int v) { bits_[static_cast<std::size_t>(r) * cols_ + c] = v ? 1 : 0; }

  std::span<const std::uint8_t> row(int r) const;

  int count_ones() const;
  int row_weight(int r) const;
  int col_weight(int c) const;

  // Rank over GF(2), computed on a scratch copy.
  int rank() const;

  // y = M x over GF(2); x has cols() entries, result has rows() entries.
  std::vector<std::uint8_t> multiply(std::span<const std::uint8_t> x) const;

  bool operator==(const BinaryMatrix& other) const;

  // FNV-1a over the dimensions and entries; stable across platforms.
  std::uint64_t content_hash() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace nbp
