#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <vector>

#include "nbp/channel.hpp"
#include "nbp/decoder_engine.hpp"
#include "nbp/tape.hpp"

using namespace nbp;

namespace {

// Central finite difference of a scalar chain rebuilt per evaluation.
template <typename F>
double fd(F&& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename Build>
double tape_derivative(Build&& build, double x) {
  Tape t;
  const Tape::Id in = t.leaf(x);
  const Tape::Id out = build(t, in);
  t.backward(out);
  return t.adjoint(in);
}

template <typename Build>
void check_unary(Build&& build, std::vector<double> points, double tol = 1e-8) {
  for (double x : points) {
    const double ad = tape_derivative(build, x);
    const double num = fd([&](double v) {
      Tape t;
      return t.value(build(t, t.leaf(v)));
    }, x);
    CHECK(ad == doctest::Approx(num).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("unary op values and derivatives") {
  check_unary([](Tape& t, Tape::Id x) { return t.neg(x); }, {-2.0, 0.5});
  check_unary([](Tape& t, Tape::Id x) { return t.one_minus(x); }, {-2.0, 0.5});
  check_unary([](Tape& t, Tape::Id x) { return t.scale(x, -3.25); }, {-2.0, 0.5});
  check_unary([](Tape& t, Tape::Id x) { return t.tanh_half(x); }, {-3.0, -0.2, 0.0, 1.7}, 1e-7);
  check_unary([](Tape& t, Tape::Id x) { return t.atanh_two(x); }, {-0.9, -0.1, 0.4}, 1e-6);
  check_unary([](Tape& t, Tape::Id x) { return t.sigmoid_of(x); }, {-4.0, 0.0, 2.5}, 1e-7);
  check_unary([](Tape& t, Tape::Id x) { return t.abs_of(x); }, {-1.5, 2.0});
  check_unary([](Tape& t, Tape::Id x) { return t.relu(x); }, {-1.5, 2.0});
  check_unary([](Tape& t, Tape::Id x) { return t.clip(x, 3.0); }, {-4.0, -1.0, 2.0, 5.0});
  check_unary([](Tape& t, Tape::Id x) { return t.log_floor(x, 1e-12); }, {0.2, 1.0, 7.0}, 1e-6);

  Tape t;
  CHECK(t.value(t.tanh_half(t.leaf(2.0))) == tanh_odd(0.5 * 2.0));
  CHECK(t.value(t.atanh_two(t.leaf(0.5))) == 2.0 * atanh_odd(0.5));
  CHECK(t.value(t.clip(t.leaf(12.0), 10.0)) == 10.0);
  CHECK(t.value(t.log_floor(t.leaf(0.0), 1e-12)) == doctest::Approx(std::log(1e-12)));
}

TEST_CASE("binary ops and fan-out accumulate adjoints") {
  // f = (a*b + a) * (a - b): a appears three times, so the backward pass
  // must sum every contribution.
  const auto f = [](double a, double b) { return (a * b + a) * (a - b); };
  const double a0 = 1.3, b0 = -0.7;

  Tape t;
  const Tape::Id a = t.leaf(a0), b = t.leaf(b0);
  const Tape::Id out = t.mul(t.add(t.mul(a, b), a), t.sub(a, b));
  CHECK(t.value(out) == f(a0, b0));
  t.backward(out);
  CHECK(t.adjoint(a) == doctest::Approx(fd([&](double v) { return f(v, b0); }, a0)).epsilon(1e-8));
  CHECK(t.adjoint(b) == doctest::Approx(fd([&](double v) { return f(a0, v); }, b0)).epsilon(1e-8));
}

TEST_CASE("subgradient conventions at the kinks") {
  // |x| at 0, max(x,0) at 0 and the clamp boundary all pass zero gradient.
  {
    Tape t;
    const Tape::Id x = t.leaf(0.0);
    const Tape::Id out = t.abs_of(x);
    t.backward(out);
    CHECK(t.adjoint(x) == 0.0);
  }
  {
    Tape t;
    const Tape::Id x = t.leaf(0.0);
    const Tape::Id out = t.relu(x);
    t.backward(out);
    CHECK(t.adjoint(x) == 0.0);
  }
  {
    Tape t;
    const Tape::Id x = t.leaf(3.0);
    const Tape::Id out = t.clip(x, 3.0);
    t.backward(out);
    CHECK(t.adjoint(x) == 0.0);
  }
  {
    // Below the log floor the value is pinned, so no gradient flows.
    Tape t;
    const Tape::Id x = t.leaf(1e-13);
    const Tape::Id out = t.log_floor(x, 1e-12);
    t.backward(out);
    CHECK(t.adjoint(x) == 0.0);
  }
}

TEST_CASE("branch signature separates subgradient regions") {
  const auto sig_of = [](double x) {
    Tape t;
    (void)t.relu(t.leaf(x));
    return t.branch_signature();
  };
  CHECK(sig_of(0.5) == sig_of(2.0));
  CHECK(sig_of(0.5) != sig_of(-0.5));
  CHECK(sig_of(-1.0) == sig_of(-2.0));

  const auto clip_sig = [](double x) {
    Tape t;
    (void)t.clip(t.leaf(x), 1.0);
    return t.branch_signature();
  };
  CHECK(clip_sig(0.3) != clip_sig(1.5));
  CHECK(clip_sig(-1.5) != clip_sig(1.5));  // low and high clamp differ

  // note_branch is order sensitive.
  Tape t1, t2;
  t1.note_branch(1);
  t1.note_branch(2);
  t2.note_branch(2);
  t2.note_branch(1);
  CHECK(t1.branch_signature() != t2.branch_signature());
}

TEST_CASE("replay reproduces recorded values bit for bit") {
  RngStream rng(424242);
  Tape t;
  std::vector<Tape::Id> nodes;
  for (int i = 0; i < 20; ++i) nodes.push_back(t.leaf(rng.next_gaussian()));
  for (int i = 0; i < 400; ++i) {
    const Tape::Id a = nodes[rng.next_below(nodes.size())];
    const Tape::Id b = nodes[rng.next_below(nodes.size())];
    switch (rng.next_below(8)) {
      case 0: nodes.push_back(t.add(a, b)); break;
      case 1: nodes.push_back(t.sub(a, b)); break;
      case 2: nodes.push_back(t.mul(a, b)); break;
      case 3: nodes.push_back(t.tanh_half(a)); break;
      case 4: nodes.push_back(t.clip(a, 2.5)); break;
      case 5: nodes.push_back(t.sigmoid_of(a)); break;
      case 6: nodes.push_back(t.abs_of(a)); break;
      default: nodes.push_back(t.scale(a, 0.75)); break;
    }
  }
  std::vector<double> before;
  for (Tape::Id id : nodes) before.push_back(t.value(id));
  t.replay();
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(t.value(nodes[i]) == before[i]);
}

TEST_CASE("gamma chain carries the sigmoid derivative factor") {
  // One relaxation blend gamma*prev + (1-gamma)*raw with gamma = sigmoid(r):
  // d/dr = (prev - raw) * gamma * (1 - gamma).
  const double r0 = 0.4, prev = 2.0, raw = -1.5;
  Tape t;
  const Tape::Id r = t.leaf(r0);
  const Tape::Id g = t.sigmoid_of(r);
  const Tape::Id out = t.add(t.mul(g, t.leaf(prev)), t.mul(t.one_minus(g), t.leaf(raw)));
  t.backward(out);
  const double gamma = sigmoid(r0);
  CHECK(t.adjoint(r) == doctest::Approx((prev - raw) * gamma * (1.0 - gamma)).epsilon(1e-14));
}

TEST_CASE("backward rejects an out-of-range root") {
  Tape t;
  (void)t.leaf(1.0);
  CHECK_THROWS_AS(t.backward(5), std::invalid_argument);
  CHECK_THROWS_AS(t.backward(-1), std::invalid_argument);
}
