#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nbp/channel.hpp"
#include "nbp/linear_code.hpp"

namespace nbp {

// Bijection on {0..n-1}. Applying it moves position i to position map[i].
class Permutation {
 public:
  explicit Permutation(std::vector<std::int32_t> map);
  static Permutation identity(int n);

  int n() const { return static_cast<int>(map_.size()); }
  std::int32_t operator[](int i) const { return map_[i]; }

  Permutation inverse() const;

  // Composition: apply this first, then next.
  Permutation then(const Permutation& next) const;

  template <typename T>
  std::vector<T> apply(std::span<const T> v) const {
    if (static_cast<int>(v.size()) != n()) throw std::invalid_argument("Permutation: size mismatch");
    std::vector<T> out(v.size());
    for (int i = 0; i < n(); ++i) out[map_[i]] = v[i];
    return out;
  }

  template <typename T>
  std::vector<T> apply(const std::vector<T>& v) const {
    return apply(std::span<const T>(v));
  }

 private:
  std::vector<std::int32_t> map_;
};

// Permutation group of a cyclic code of length n = 2^m - 1: the maps
// i -> (2^a * i + b) mod n. Construction verifies on sample codewords that
// the group generators (shift and doubling) preserve code membership.
class AutomorphismSampler {
 public:
  explicit AutomorphismSampler(const LinearCode& code);

  // i -> (2^a * i + b) mod n.
  Permutation make(int a, int b) const;

  // Uniform a in [0, m), b in [0, n).
  Permutation sample(RngStream& rng) const;

  int m() const { return m_; }

 private:
  const LinearCode& code_;
  int m_ = 0;
};

}  // namespace nbp
