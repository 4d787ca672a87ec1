#include "nbp/bch.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nbp {

namespace {

void poly_trim(Gf2Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

}  // namespace

int poly_degree(const Gf2Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[i]) return i;
  }
  return -1;
}

Gf2Poly poly_mul(const Gf2Poly& a, const Gf2Poly& b) {
  if (a.empty() || b.empty()) return {};
  Gf2Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= a[i] & b[j];
  }
  poly_trim(r);
  return r;
}

Gf2Poly poly_mod(const Gf2Poly& a, const Gf2Poly& b) {
  const int db = poly_degree(b);
  if (db < 0) throw std::invalid_argument("poly_mod: division by zero polynomial");
  Gf2Poly r = a;
  poly_trim(r);
  while (poly_degree(r) >= db) {
    const int shift = poly_degree(r) - db;
    for (int i = 0; i <= db; ++i) r[i + shift] ^= b[i];
    poly_trim(r);
  }
  return r;
}

Gf2Poly poly_div_exact(const Gf2Poly& a, const Gf2Poly& b) {
  const int db = poly_degree(b);
  if (db < 0) throw std::invalid_argument("poly_div_exact: division by zero polynomial");
  Gf2Poly r = a;
  poly_trim(r);
  const int da = poly_degree(r);
  if (da < db) {
    if (da >= 0) throw std::invalid_argument("poly_div_exact: remainder is nonzero");
    return {};
  }
  Gf2Poly q(da - db + 1, 0);
  while (poly_degree(r) >= db) {
    const int shift = poly_degree(r) - db;
    q[shift] = 1;
    for (int i = 0; i <= db; ++i) r[i + shift] ^= b[i];
    poly_trim(r);
  }
  if (!r.empty()) throw std::invalid_argument("poly_div_exact: remainder is nonzero");
  return q;
}

std::vector<int> cyclotomic_coset(int e, int m) {
  const int n = (1 << m) - 1;
  std::vector<int> coset;
  int x = e % n;
  do {
    coset.push_back(x);
    x = (2 * x) % n;
  } while (x != e % n);
  std::sort(coset.begin(), coset.end());
  return coset;
}

Gf2Poly minimal_polynomial(const Gf2mField& field, int e) {
  const auto coset = cyclotomic_coset(e, field.m());
  // Product of (x + alpha^j) computed over the extension field.
  std::vector<int> poly{1};  // field-valued coefficients, little endian
  for (int j : coset) {
    const int root = field.alpha_pow(j);
    std::vector<int> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] ^= poly[i];
      next[i] ^= field.mul(poly[i], root);
    }
    poly = std::move(next);
  }
  Gf2Poly out(poly.size(), 0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] != 0 && poly[i] != 1)
      throw std::logic_error("minimal_polynomial: coefficient outside GF(2)");
    out[i] = static_cast<std::uint8_t>(poly[i]);
  }
  return out;
}

Gf2Poly bch_generator_poly(const Gf2mField& field, int t) {
  if (t < 1) throw std::invalid_argument("bch_generator_poly: t must be positive");
  std::set<int> seen;
  Gf2Poly g{1};
  for (int e = 1; e <= 2 * t; ++e) {
    const auto coset = cyclotomic_coset(e, field.m());
    if (!seen.insert(coset.front()).second) continue;
    g = poly_mul(g, minimal_polynomial(field, e));
  }
  return g;
}

BinaryMatrix cyclic_parity_matrix(const Gf2Poly& g, int n) {
  const int dg = poly_degree(g);
  if (dg < 1 || dg >= n) throw std::invalid_argument("cyclic_parity_matrix: bad generator degree");
  Gf2Poly xn1(n + 1, 0);
  xn1[0] = 1;
  xn1[n] = 1;
  const Gf2Poly h = poly_div_exact(xn1, g);  // throws unless g | x^n - 1
  const int k = poly_degree(h);
  BinaryMatrix mat(n - k, n);
  for (int i = 0; i < n - k; ++i) {
    for (int j = 0; j <= k; ++j) mat.set(i, i + j, h[k - j]);
  }
  return mat;
}

BchCode make_bch(int m, int t) {
  const Gf2mField field(m);
  BchCode code;
  code.n = field.order();
  code.t = t;
  code.generator = bch_generator_poly(field, t);
  code.k = code.n - poly_degree(code.generator);
  if (code.k <= 0) throw std::invalid_argument("make_bch: generator degree leaves no message bits");
  code.h = cyclic_parity_matrix(code.generator, code.n);
  return code;
}

}  // namespace nbp
