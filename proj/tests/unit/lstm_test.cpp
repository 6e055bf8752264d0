#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fever/error.hpp"
#include "fever/numerics/grad_check.hpp"
#include "fever/numerics/lstm.hpp"
#include "fever/numerics/param_set.hpp"
#include "test_support.hpp"

namespace num = fever::num;
using num::Tensor;

namespace {

using Vec = std::vector<double>;

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Textbook LSTM cell, one direction, written out scalar by scalar.
std::vector<Vec> unrolled(const Tensor& x, const Tensor& W, const Tensor& U, const Tensor& b,
                          bool reverse) {
  const std::size_t n = x.cols(), d = x.rows(), h = U.cols();
  std::vector<Vec> states(n, Vec(h, 0.0));
  Vec hprev(h, 0.0), cprev(h, 0.0);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t t = reverse ? n - 1 - step : step;
    auto pre = [&](std::size_t gate, std::size_t k) {
      const std::size_t row = gate * h + k;
      double z = b(row, 0);
      for (std::size_t j = 0; j < d; ++j) z += W(row, j) * x(j, t);
      for (std::size_t j = 0; j < h; ++j) z += U(row, j) * hprev[j];
      return z;
    };
    Vec hnew(h), cnew(h);
    for (std::size_t k = 0; k < h; ++k) {
      const double i = sig(pre(0, k)), f = sig(pre(1, k)), g = std::tanh(pre(2, k)),
                   o = sig(pre(3, k));
      cnew[k] = f * cprev[k] + i * g;
      hnew[k] = o * std::tanh(cnew[k]);
    }
    states[t] = hnew;
    hprev = hnew;
    cprev = cnew;
  }
  return states;
}

struct Fixture {
  num::ParamSet ps;
  Tensor x;
  explicit Fixture(std::size_t d, std::size_t h, std::size_t n, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    num::add_bilstm_params(ps, "l", {d, h}, 0.5, rng);
    x = fever::testing::random_tensor(d, n, rng);
  }
};

}  // namespace

TEST(BiLstm, MatchesUnrolledOracle) {
  for (std::size_t n : {1u, 2u, 5u}) {
    Fixture f(3, 4, n, n);
    num::Tape tape;
    const auto w = num::bind_bilstm(tape, std::as_const(f.ps), "l");
    const Tensor out = num::ops::bilstm(tape.constant(f.x), w).value();
    ASSERT_EQ(out.rows(), 8u);
    ASSERT_EQ(out.cols(), n);
    const auto fw = unrolled(f.x, f.ps.at("l.fw.W").value, f.ps.at("l.fw.U").value,
                             f.ps.at("l.fw.b").value, false);
    const auto bw = unrolled(f.x, f.ps.at("l.bw.W").value, f.ps.at("l.bw.U").value,
                             f.ps.at("l.bw.b").value, true);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(out(k, t), fw[t][k], 1e-12);
        EXPECT_NEAR(out(4 + k, t), bw[t][k], 1e-12);
      }
  }
}

TEST(BiLstm, LastBackwardStateSeesOnlyLastColumn) {
  // the right-to-left pass starts at the last column with zero state
  Fixture f(2, 3, 4);
  num::Tape tape;
  const auto w = num::bind_bilstm(tape, std::as_const(f.ps), "l");
  const Tensor full = num::ops::bilstm(tape.constant(f.x), w).value();
  Tensor last(2, 1);
  last(0, 0) = f.x(0, 3);
  last(1, 0) = f.x(1, 3);
  const Tensor single = num::ops::bilstm(tape.constant(last), w).value();
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(full(3 + k, 3), single(3 + k, 0), 1e-14);
}

TEST(BiLstm, GradientCheck) {
  Fixture f(3, 3, 5);
  f.ps.add("x", f.x);
  std::mt19937_64 rng(77);
  const Tensor weights = fever::testing::random_tensor(6, 5, rng);
  const auto r = num::grad_check(
      [&](num::Tape& t) {
        const auto w = num::bind_bilstm(t, f.ps, "l");
        const num::Var y = num::ops::bilstm(t.param(f.ps.at("x")), w);
        return num::ops::sum(num::ops::mul(y, t.constant(weights)));
      },
      f.ps);
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst_param << "[" << r.worst_index << "]";
}

TEST(BiLstm, EmptySequenceThrows) {
  Fixture f(2, 2, 1);
  num::Tape tape;
  const auto w = num::bind_bilstm(tape, std::as_const(f.ps), "l");
  EXPECT_THROW(num::ops::bilstm(tape.constant(Tensor(2, 0)), w), fever::EmptySequenceError);
  EXPECT_THROW(num::ops::bilstm(tape.constant(Tensor(3, 2)), w), fever::DimensionError);
}
