#include "nbp/permutation.hpp"

namespace nbp {

Permutation::Permutation(std::vector<std::int32_t> map) : map_(std::move(map)) {
  std::vector<std::uint8_t> seen(map_.size(), 0);
  for (auto t : map_) {
    if (t < 0 || t >= static_cast<std::int32_t>(map_.size()) || seen[t])
      throw std::invalid_argument("Permutation: map is not a bijection");
    seen[t] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<std::int32_t> map(n);
  for (int i = 0; i < n; ++i) map[i] = i;
  return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
  std::vector<std::int32_t> inv(map_.size());
  for (int i = 0; i < n(); ++i) inv[map_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.n() != n()) throw std::invalid_argument("Permutation: size mismatch");
  std::vector<std::int32_t> map(map_.size());
  for (int i = 0; i < n(); ++i) map[i] = next.map_[map_[i]];
  return Permutation(std::move(map));
}

AutomorphismSampler::AutomorphismSampler(const LinearCode& code) : code_(code) {
  const int n = code.n();
  int m = 0;
  while ((1 << m) - 1 < n) ++m;
  if ((1 << m) - 1 != n)
    throw std::invalid_argument("AutomorphismSampler: length is not 2^m - 1 for code " + code.id());
  m_ = m;

  // The affine maps form a group generated by the cyclic shift (a=0, b=1)
  // and the doubling map (a=1, b=0); membership preservation is checked on
  // those generators over sample codewords.
  const Permutation shift = make(0, 1);
  const Permutation doubling = make(1, 0);
  RngStream rng(0x5eedc0de, 7);
  const int trials = 64;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::uint8_t> info(code.k());
    for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    const auto cw = code.encode(info);
    for (const Permutation* p : {&shift, &doubling}) {
      const auto moved = p->apply(std::span<const std::uint8_t>(cw));
      if (!code.is_codeword(moved))
        throw std::invalid_argument("AutomorphismSampler: code " + code.id() +
                                    " is not closed under the cyclic automorphism group");
    }
  }
}

Permutation AutomorphismSampler::make(int a, int b) const {
  const int n = code_.n();
  std::vector<std::int32_t> map(n);
  for (int i = 0; i < n; ++i) {
    long long x = i;
    for (int j = 0; j < a; ++j) x = (2 * x) % n;
    map[i] = static_cast<std::int32_t>((x + b) % n);
  }
  return Permutation(std::move(map));
}

Permutation AutomorphismSampler::sample(RngStream& rng) const {
  const int a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m_)));
  const int b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(code_.n())));
  return make(a, b);
}

}  // namespace nbp
