#include "nbp/gf2m.hpp"

#include <stdexcept>

namespace nbp {

namespace {

// Index i holds a primitive modulus for GF(2^i).
constexpr std::uint32_t kDefaultPoly[9] = {
    0, 0,
    0x7,    // x^2 + x + 1
    0xb,    // x^3 + x + 1
    0x13,   // x^4 + x + 1
    0x25,   // x^5 + x^2 + 1
    0x43,   // x^6 + x + 1
    0x89,   // x^7 + x^3 + 1
    0x11d,  // x^8 + x^4 + x^3 + x^2 + 1
};

}  // namespace

Gf2mField::Gf2mField(int m) {
  if (m < 2 || m > 8) throw std::invalid_argument("Gf2mField: no built-in modulus for this m");
  m_ = m;
  poly_ = kDefaultPoly[m];
  build_tables();
}

Gf2mField::Gf2mField(int m, std::uint32_t poly) : m_(m), poly_(poly) {
  if (m < 2 || m > 24) throw std::invalid_argument("Gf2mField: unsupported m");
  if ((poly >> m) != 1u) throw std::invalid_argument("Gf2mField: modulus degree must equal m");
  build_tables();
}

void Gf2mField::build_tables() {
  const int q = 1 << m_;
  log_.assign(q, -1);
  antilog_.assign(q - 1, 0);
  std::uint32_t x = 1;
  for (int e = 0; e < q - 1; ++e) {
    if (log_[x] != -1) throw std::invalid_argument("Gf2mField: modulus is not primitive");
    log_[x] = e;
    antilog_[e] = static_cast<int>(x);
    x <<= 1;
    if (x & (1u << m_)) x ^= poly_;
  }
  if (x != 1) throw std::invalid_argument("Gf2mField: modulus is not primitive");
}

int Gf2mField::mul(int a, int b) const {
  if (a == 0 || b == 0) return 0;
  return antilog_[(log_[a] + log_[b]) % order()];
}

int Gf2mField::inv(int a) const {
  if (a == 0) throw std::invalid_argument("Gf2mField: zero has no inverse");
  return antilog_[(order() - log_[a]) % order()];
}

int Gf2mField::alpha_pow(long long e) const {
  const int n = order();
  long long r = e % n;
  if (r < 0) r += n;
  return antilog_[r];
}

int Gf2mField::log(int a) const {
  if (a <= 0 || a >= size()) throw std::invalid_argument("Gf2mField: log of zero or out-of-range element");
  return log_[a];
}

}  // namespace nbp
