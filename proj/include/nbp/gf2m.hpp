#pragma once

#include <cstdint>
#include <vector>

namespace nbp {

// GF(2^m) arithmetic via log/antilog tables over a primitive polynomial.
// Elements are polynomial-basis bit patterns in [0, 2^m); alpha is the class of x.
class Gf2mField {
 public:
  // Uses a built-in primitive polynomial for m in [2, 8].
  explicit Gf2mField(int m);

  // poly is the full modulus bit pattern including the x^m term, e.g. 0x13 for x^4+x+1.
  // Throws if the polynomial is not primitive over GF(2^m).
  Gf2mField(int m, std::uint32_t poly);

  int m() const { return m_; }
  std::uint32_t modulus() const { return poly_; }
  int size() const { return 1 << m_; }
  int order() const { return (1 << m_) - 1; }

  int add(int a, int b) const { return a ^ b; }
  int mul(int a, int b) const;
  int inv(int a) const;

  // alpha^e for any integer exponent.
  int alpha_pow(long long e) const;

  // Discrete log base alpha; a must be nonzero.
  int log(int a) const;

 private:
  void build_tables();

  int m_ = 0;
  std::uint32_t poly_ = 0;
  std::vector<int> log_;
  std::vector<int> antilog_;
};

}  // namespace nbp
