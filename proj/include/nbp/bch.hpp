#pragma once

#include <cstdint>
#include <vector>

#include "nbp/binary_matrix.hpp"
#include "nbp/gf2m.hpp"

namespace nbp {

// Polynomial over GF(2), little endian: index i is the coefficient of x^i.
// Kept normalized, the top coefficient of a nonzero polynomial is 1.
using Gf2Poly = std::vector<std::uint8_t>;

int poly_degree(const Gf2Poly& p);
Gf2Poly poly_mul(const Gf2Poly& a, const Gf2Poly& b);
Gf2Poly poly_mod(const Gf2Poly& a, const Gf2Poly& b);
// Exact division; throws if the remainder is nonzero.
Gf2Poly poly_div_exact(const Gf2Poly& a, const Gf2Poly& b);

// Cyclotomic coset of e modulo 2^m - 1, smallest element first.
std::vector<int> cyclotomic_coset(int e, int m);

// Minimal polynomial of alpha^e over GF(2): product of (x - alpha^j) over the coset of e.
Gf2Poly minimal_polynomial(const Gf2mField& field, int e);

// Generator polynomial of the t-error-correcting BCH code of length 2^m - 1:
// lcm of the minimal polynomials of alpha^1 .. alpha^(2t).
Gf2Poly bch_generator_poly(const Gf2mField& field, int t);

// Parity-check matrix of the cyclic code generated by g, length n.
// With h(x) = (x^n - 1) / g(x) of degree k, row i carries the reversed h
// shifted right by i, for i = 0 .. n-k-1.
BinaryMatrix cyclic_parity_matrix(const Gf2Poly& g, int n);

struct BchCode {
  int n = 0;
  int k = 0;
  int t = 0;
  Gf2Poly generator;
  BinaryMatrix h;
};

BchCode make_bch(int m, int t);

}  // namespace nbp
