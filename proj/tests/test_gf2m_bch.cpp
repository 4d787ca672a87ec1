#include "doctest.h"

#include <stdexcept>
#include "nbp/bch.hpp"
#include "nbp/channel.hpp"

#include <algorithm>

using namespace nbp;

namespace {

// Horner evaluation of a GF(2)-coefficient polynomial at a field element.
int eval_at(const Gf2mField& f, const Gf2Poly& p, int x) {
  int acc = 0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    acc = f.mul(acc, x);
    if (p[i]) acc ^= 1;
  }
  return acc;
}

// Trial division by every binary polynomial of degree 1..deg/2.
bool is_irreducible(const Gf2Poly& p) {
  const int d = poly_degree(p);
  for (int dd = 1; dd <= d / 2; ++dd) {
    for (unsigned bits = 0; bits < (1u << dd); ++bits) {
      Gf2Poly q(dd + 1, 0);
      q[dd] = 1;
      for (int i = 0; i < dd; ++i) q[i] = (bits >> i) & 1;
      if (poly_degree(poly_mod(p, q)) < 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("field arithmetic and primitivity") {
  const Gf2mField f(4);
  CHECK(f.order() == 15);
  CHECK(f.alpha_pow(0) == 1);
  CHECK(f.alpha_pow(15) == 1);
  CHECK(f.alpha_pow(-1) == f.inv(2));  // alpha = the element x = 2
  RngStream rng(7);
  for (int i = 0; i < 200; ++i) {
    const int a = 1 + static_cast<int>(rng.next_below(15));
    const int b = 1 + static_cast<int>(rng.next_below(15));
    const int c = 1 + static_cast<int>(rng.next_below(15));
    CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
    CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK(f.alpha_pow(f.log(a)) == a);
  }
  // x^4 + x^3 + x^2 + x + 1 is irreducible but its root has order 5.
  CHECK_THROWS_AS(Gf2mField(4, 0x1f), std::invalid_argument);
  // Reducible modulus never even completes a full cycle.
  CHECK_THROWS_AS(Gf2mField(4, 0x11), std::invalid_argument);
}

TEST_CASE("cyclotomic cosets modulo 15") {
  CHECK(cyclotomic_coset(1, 4) == std::vector<int>{1, 2, 4, 8});
  CHECK(cyclotomic_coset(3, 4) == std::vector<int>{3, 6, 9, 12});
  CHECK(cyclotomic_coset(5, 4) == std::vector<int>{5, 10});
  CHECK(cyclotomic_coset(6, 4) == std::vector<int>{3, 6, 9, 12});
}

TEST_CASE("minimal polynomials: roots, degree, irreducibility, known tables") {
  const Gf2mField f(4);
  for (int e = 1; e < 15; ++e) {
    const Gf2Poly mp = minimal_polynomial(f, e);
    CHECK(poly_degree(mp) == static_cast<int>(cyclotomic_coset(e, 4).size()));
    CHECK(is_irreducible(mp));
    for (int j : cyclotomic_coset(e, 4)) CHECK(eval_at(f, mp, f.alpha_pow(j)) == 0);
  }
  CHECK(minimal_polynomial(f, 1) == Gf2Poly{1, 1, 0, 0, 1});   // x^4+x+1
  CHECK(minimal_polynomial(f, 3) == Gf2Poly{1, 1, 1, 1, 1});   // x^4+x^3+x^2+x+1
  CHECK(minimal_polynomial(f, 5) == Gf2Poly{1, 1, 1});         // x^2+x+1
  CHECK(minimal_polynomial(f, 7) == Gf2Poly{1, 0, 0, 1, 1});   // x^4+x^3+1
}

TEST_CASE("generator polynomials match the standard tables for length 15") {
  const Gf2mField f(4);
  CHECK(bch_generator_poly(f, 1) == Gf2Poly{1, 1, 0, 0, 1});
  CHECK(bch_generator_poly(f, 2) == Gf2Poly{1, 0, 0, 0, 1, 0, 1, 1, 1});
  CHECK(bch_generator_poly(f, 3) == Gf2Poly{1, 1, 1, 0, 1, 1, 0, 0, 1, 0, 1});
}

TEST_CASE("generator divides x^n - 1 and vanishes on the designed roots") {
  for (const auto& [m, t] : std::vector<std::pair<int, int>>{{3, 1}, {4, 1}, {6, 3}, {6, 5}, {7, 4}, {7, 10}}) {
    const Gf2mField f(m);
    const Gf2Poly g = bch_generator_poly(f, t);
    Gf2Poly xn1(f.order() + 1, 0);
    xn1[0] = 1;
    xn1[f.order()] = 1;
    CHECK(poly_degree(poly_mod(xn1, g)) < 0);
    for (int e = 1; e <= 2 * t; ++e) CHECK(eval_at(f, g, f.alpha_pow(e)) == 0);
  }
}

TEST_CASE("code dimensions for the shipped lengths") {
  CHECK(make_bch(3, 1).k == 4);
  CHECK(make_bch(4, 1).k == 11);
  CHECK(make_bch(6, 3).k == 45);
  CHECK(make_bch(6, 5).k == 36);
  CHECK(make_bch(7, 10).k == 64);
  CHECK(make_bch(7, 4).k == 99);
}

TEST_CASE("cyclic parity matrix annihilates multiples of the generator") {
  const BchCode code = make_bch(4, 3);  // (15, 5)
  CHECK(code.h.rows() == 10);
  CHECK(code.h.cols() == 15);
  RngStream rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Gf2Poly u(code.k, 0);
    for (auto& b : u) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    const Gf2Poly c = poly_mul(u, code.generator);
    std::vector<std::uint8_t> word(code.n, 0);
    for (std::size_t i = 0; i < c.size(); ++i) word[i] = c[i];
    const auto syn = code.h.multiply(word);
    CHECK(std::all_of(syn.begin(), syn.end(), [](std::uint8_t b) { return b == 0; }));
    // Any single flipped bit must be caught.
    const int pos = static_cast<int>(rng.next_below(code.n));
    word[pos] ^= 1;
    const auto syn2 = code.h.multiply(word);
    CHECK(std::any_of(syn2.begin(), syn2.end(), [](std::uint8_t b) { return b != 0; }));
  }
}
