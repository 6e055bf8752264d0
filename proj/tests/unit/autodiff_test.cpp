#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fever/error.hpp"
#include "fever/numerics/autodiff.hpp"
#include "fever/numerics/grad_check.hpp"
#include "fever/numerics/param_set.hpp"
#include "test_support.hpp"

namespace num = fever::num;
using num::Tensor;
using num::Var;

namespace {

double log_sum_exp(const std::vector<double>& z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

// weighted sum keeps gradients non-uniform, so a wrong backward shows up
Var weighted_sum(num::Tape& tape, const Var& x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return num::ops::sum(num::ops::mul(x, tape.constant(fever::testing::random_tensor(x.rows(), x.cols(), rng))));
}

}  // namespace

TEST(Autodiff, AffineForwardMatchesManual) {
  num::Tape tape;
  const Tensor W = Tensor::from_rows({{1, -2}, {0.5, 3}});
  const Tensor x = Tensor::from_rows({{1, 2}, {-1, 0}});
  const Tensor b = Tensor::column({0.25, -10});
  const Var y = num::ops::affine(tape.constant(x), tape.constant(W), tape.constant(b),
                                 num::Activation::none);
  // column 0: [1*1 + -2*-1 + .25, .5*1 + 3*-1 - 10]
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 3.25);
  EXPECT_DOUBLE_EQ(y.value()(1, 0), -12.5);
  const Var r = num::ops::affine(tape.constant(x), tape.constant(W), tape.constant(b),
                                 num::Activation::rectifier);
  EXPECT_DOUBLE_EQ(r.value()(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(r.value()(0, 1), 2.25);
}

TEST(Autodiff, SoftmaxColMatchesLogSumExp) {
  std::mt19937_64 rng(2);
  num::Tape tape;
  Tensor a = fever::testing::random_tensor(4, 3, rng, 5.0);
  a(0, 0) = 800.0;  // overflow without max subtraction
  const Tensor s = num::ops::softmax_col(tape.constant(a)).value();
  for (std::size_t c = 0; c < 3; ++c) {
    const auto col = a.column_values(c);
    const double lse = log_sum_exp(col);
    double total = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
      EXPECT_NEAR(s(r, c), std::exp(col[r] - lse), 1e-12);
      total += s(r, c);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Autodiff, SoftmaxShiftInvariant) {
  std::mt19937_64 rng(9);
  num::Tape tape;
  const Tensor a = fever::testing::random_tensor(5, 2, rng);
  Tensor shifted = a;
  for (std::size_t r = 0; r < 5; ++r) shifted(r, 1) += 37.0;
  const Tensor s1 = num::ops::softmax_col(tape.constant(a)).value();
  const Tensor s2 = num::ops::softmax_col(tape.constant(shifted)).value();
  EXPECT_LT(fever::testing::max_abs_diff(s1, s2), 1e-12);
}

TEST(Autodiff, CrossEntropyMatchesLogSumExp) {
  num::Tape tape;
  const std::vector<double> z{2.0, -1.0, 0.5};
  const Var loss = num::ops::cross_entropy(tape.constant(Tensor::column(z)), 1);
  EXPECT_NEAR(loss.value()[0], log_sum_exp(z) - z[1], 1e-12);
  EXPECT_THROW(num::ops::cross_entropy(tape.constant(Tensor::column(z)), 3), fever::LabelError);
}

TEST(Autodiff, MaxpoolRoutesTiesToFirstColumn) {
  num::ParamSet ps;
  auto& p = ps.add("x", Tensor::from_rows({{1, 3, 3}, {2, 2, 0}}));
  num::Tape tape;
  const Var m = num::ops::maxpool_row(tape.param(p));
  EXPECT_EQ(m.value()[0], 3.0);
  EXPECT_EQ(m.value()[1], 2.0);
  ps.zero_grad();
  tape.backward(num::ops::sum(m));
  EXPECT_EQ(p.grad, Tensor::from_rows({{0, 1, 0}, {1, 0, 0}}));
  num::Tape t2;
  EXPECT_THROW(num::ops::maxpool_row(t2.constant(Tensor(2, 0))), fever::EmptySequenceError);
}

TEST(Autodiff, BackwardTwiceIsStale) {
  num::ParamSet ps;
  auto& p = ps.add("x", Tensor::scalar(2.0));
  ps.zero_grad();
  num::Tape tape;
  const Var loss = num::ops::mul(tape.param(p), tape.param(p));
  tape.backward(loss);
  EXPECT_DOUBLE_EQ(p.grad[0], 4.0);
  EXPECT_THROW(tape.backward(loss), fever::StaleTapeError);
}

TEST(Autodiff, BackwardNeedsScalar) {
  num::Tape tape;
  const Var v = tape.constant(Tensor(2, 1, 1.0));
  EXPECT_THROW(tape.backward(v), fever::DimensionError);
}

TEST(Autodiff, GradientsAccumulateAcrossBackwards) {
  num::ParamSet ps;
  auto& p = ps.add("x", Tensor::scalar(3.0));
  ps.zero_grad();
  for (int i = 0; i < 2; ++i) {
    num::Tape tape;
    tape.backward(num::ops::scale(tape.param(p), 2.0));
  }
  EXPECT_DOUBLE_EQ(p.grad[0], 4.0);
}

TEST(Autodiff, GatherColumnsNegativeIdIsZero) {
  num::ParamSet ps;
  auto& table = ps.add("t", Tensor::from_rows({{1, 2}, {3, 4}, {5, 6}}));
  ps.zero_grad();
  num::Tape tape;
  const std::vector<int> ids{2, -1, 0, 2};
  const Var g = num::ops::gather_columns(tape.param(table), ids);
  EXPECT_EQ(g.value(), Tensor::from_rows({{5, 0, 1, 5}, {6, 0, 2, 6}}));
  tape.backward(num::ops::sum(g));
  EXPECT_EQ(table.grad, Tensor::from_rows({{1, 1}, {0, 0}, {2, 2}}));
}

TEST(Autodiff, OpsShapeErrors) {
  num::Tape tape;
  const Var a = tape.constant(Tensor(2, 3));
  const Var b = tape.constant(Tensor(3, 2));
  EXPECT_THROW(num::ops::add(a, b), fever::DimensionError);
  EXPECT_THROW(num::ops::matmul(a, a), fever::DimensionError);
  const std::vector<Var> parts{a, b};
  EXPECT_THROW(num::ops::concat_rows(parts), fever::DimensionError);
}

// Finite-difference checks per primitive. Tolerance for affine is the
// strict one; every other primitive is held to the same bound.
class PrimitiveGradients : public ::testing::Test {
 protected:
  std::mt19937_64 rng{42};
  num::ParamSet ps;
  num::Parameter& add(const std::string& name, std::size_t r, std::size_t c) {
    return ps.add(name, fever::testing::random_tensor(r, c, rng));
  }
  double check(const num::LossFn& fn) { return num::grad_check(fn, ps).max_rel_error; }
};

TEST_F(PrimitiveGradients, Affine) {
  add("x", 4, 3);
  add("W", 5, 4);
  add("b", 5, 1);
  for (auto act : {num::Activation::none, num::Activation::rectifier}) {
    EXPECT_LT(check([&](num::Tape& t) {
                return weighted_sum(t, num::ops::affine(t.param(ps.at("x")), t.param(ps.at("W")),
                                                        t.param(ps.at("b")), act),
                                    1);
              }),
              1e-6);
  }
}

TEST_F(PrimitiveGradients, MatmulTransposeAddSubMul) {
  add("a", 3, 4);
  add("b", 4, 2);
  add("c", 3, 2);
  EXPECT_LT(check([&](num::Tape& t) {
              const Var ab = num::ops::matmul(t.param(ps.at("a")), t.param(ps.at("b")));
              const Var c = t.param(ps.at("c"));
              const Var e = num::ops::mul(num::ops::sub(ab, c), num::ops::add(ab, c));
              return weighted_sum(t, num::ops::transpose(e), 2);
            }),
            1e-6);
}

TEST_F(PrimitiveGradients, AbsScaleConcat) {
  add("a", 2, 3);
  add("b", 3, 3);
  EXPECT_LT(check([&](num::Tape& t) {
              const std::vector<Var> parts{num::ops::abs(t.param(ps.at("a"))),
                                           num::ops::scale(t.param(ps.at("b")), -1.5)};
              return weighted_sum(t, num::ops::concat_rows(parts), 3);
            }),
            1e-6);
}

TEST_F(PrimitiveGradients, SoftmaxMaxpoolCrossEntropy) {
  add("a", 4, 3);
  EXPECT_LT(check([&](num::Tape& t) {
              const Var s = num::ops::softmax_col(t.param(ps.at("a")));
              return weighted_sum(t, s, 4);
            }),
            1e-6);
  EXPECT_LT(check([&](num::Tape& t) {
              return weighted_sum(t, num::ops::maxpool_row(t.param(ps.at("a"))), 5);
            }),
            1e-6);
  add("z", 3, 1);
  EXPECT_LT(check([&](num::Tape& t) { return num::ops::cross_entropy(t.param(ps.at("z")), 2); }),
            1e-6);
}

TEST_F(PrimitiveGradients, GatherColumns) {
  add("table", 6, 3);
  const std::vector<int> ids{1, 4, -1, 1};
  EXPECT_LT(check([&](num::Tape& t) {
              return weighted_sum(t, num::ops::gather_columns(t.param(ps.at("table")), ids), 6);
            }),
            1e-6);
}

TEST(Softmax, FreeFunctionSumsToOne) {
  const auto p = num::softmax(std::vector<double>{1000.0, 1000.0, 0.0});
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
}

TEST(GradCheck, DetectsWrongGradient) {
  // a deliberately broken op: forward x^2, backward claims 3x
  num::ParamSet ps;
  ps.add("x", Tensor::scalar(1.3));
  const auto r = num::grad_check(
      [&](num::Tape& t) {
        const Var x = t.param(ps.at("x"));
        const double v = x.value()[0];
        return t.record(Tensor::scalar(v * v), [x, v](num::Tape& tape, std::uint32_t self) {
          tape.grad(x.id)[0] += 3.0 * v * tape.grad(self)[0];
        });
      },
      ps);
  EXPECT_GT(r.max_rel_error, 0.1);
}

TEST(Adam, SingleStepMatchesScalarOracle) {
  num::ParamSet ps;
  auto& p = ps.add("w", Tensor::column({0.5, -1.0}));
  ps.zero_grad();
  p.grad = Tensor::column({0.2, -3.0});
  num::AdamConfig cfg;
  ps.adam_step(cfg);
  for (int i = 0; i < 2; ++i) {
    const double g = i == 0 ? 0.2 : -3.0;
    const double w0 = i == 0 ? 0.5 : -1.0;
    const double m = (1 - cfg.beta1) * g, v = (1 - cfg.beta2) * g * g;
    const double mh = m / (1 - cfg.beta1), vh = v / (1 - cfg.beta2);
    EXPECT_NEAR(p.value[i], w0 - cfg.lr * mh / (std::sqrt(vh) + cfg.eps), 1e-15);
  }
  EXPECT_EQ(ps.step(), 1u);
  EXPECT_EQ(p.grad[0], 0.0);  // gradients are cleared
}

TEST(Adam, TwoStepsMatchOracle) {
  num::ParamSet ps;
  auto& p = ps.add("w", Tensor::scalar(1.0));
  num::AdamConfig cfg;
  double w = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 2; ++t) {
    const double g = 2.0 * w;  // d/dw w^2
    ps.zero_grad();
    p.grad[0] = g;
    ps.adam_step(cfg);
    m = cfg.beta1 * m + (1 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
    w -= cfg.lr * (m / (1 - std::pow(cfg.beta1, t))) /
         (std::sqrt(v / (1 - std::pow(cfg.beta2, t))) + cfg.eps);
  }
  EXPECT_NEAR(p.value[0], w, 1e-15);
}

TEST(Adam, UninitializedGradientThrows) {
  num::ParamSet ps;
  ps.add("w", Tensor::scalar(1.0));
  EXPECT_THROW(ps.adam_step({}), fever::UninitializedGradientError);
}

TEST(ParamSet, DuplicateNameConflicts) {
  num::ParamSet ps;
  ps.add("w", Tensor::scalar(1.0));
  EXPECT_THROW(ps.add("w", Tensor::scalar(2.0)), fever::ConflictError);
}

TEST(ParamSet, UniformInitStaysInRange) {
  std::mt19937_64 rng(1);
  num::ParamSet ps;
  const auto& p = ps.add_uniform("w", 30, 30, 0.08, rng);
  for (double v : p.value.values()) {
    EXPECT_GE(v, -0.08);
    EXPECT_LE(v, 0.08);
  }
  EXPECT_EQ(ps.scalar_count(), 900u);
}
