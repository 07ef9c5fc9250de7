#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "lhgat/diff/ops.hpp"
#include "lhgat/errors.hpp"
#include "lhgat/random.hpp"
#include "oracles.hpp"

using namespace lhgat;
using diff::Tape;
using diff::Tensor;
using diff::Var;

namespace {

Tensor random_tensor(diff::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.data) v = rng.uniform(lo, hi);
  t.requires_grad = true;
  return t;
}

// loss = sum(f(inputs) * w) for a fixed random w, so every output element
// carries a distinct weight.
double primitive_check(std::vector<Tensor>& inputs, const std::function<Var(Tape&, std::vector<Var>&)>& f,
                       std::uint64_t seed = 3) {
  Rng rng(seed);
  Tensor weights;
  auto forward = [&](Tape& tape) {
    std::vector<Var> vars;
    for (Tensor& t : inputs) vars.push_back(tape.param(t));
    Var out = f(tape, vars);
    if (weights.data.empty() || weights.shape != out.shape()) weights = random_tensor(out.shape(), rng);
    return diff::sum(diff::mul(out, tape.constant(weights)));
  };
  std::vector<encoder::NamedTensor> params;
  for (std::size_t i = 0; i < inputs.size(); ++i) params.emplace_back("in" + std::to_string(i), &inputs[i]);
  {
    Tape warm;
    forward(warm);
  }
  const auto result = lhgat::testing::check_gradients(
      params,
      [&] {
        Tape tape(false);
        return forward(tape).item();
      },
      [&] {
        for (Tensor& t : inputs) t.zero_grad();
        Tape tape;
        tape.backward(forward(tape));
      },
      1e-5);
  return result.worst_relative_error;
}

}  // namespace

TEST(Matmul, IdentityTimesColumn) {
  Tape tape;
  const Var out = diff::matmul(tape.constant(Tensor::matrix({{1, 0}, {0, 1}})), tape.constant(Tensor::matrix({{3}, {4}})));
  EXPECT_EQ(out.shape(), (diff::Shape{2, 1}));
  EXPECT_EQ(out.value().data, (std::vector<double>{3, 4}));
}

TEST(Matmul, RowTimesColumn) {
  Tape tape;
  const Var out = diff::matmul(tape.constant(Tensor::matrix({{1, 2}})), tape.constant(Tensor::matrix({{3}, {4}})));
  EXPECT_EQ(out.value().data, (std::vector<double>{11}));
}

TEST(Matmul, ShapeMismatchNamesBothShapes) {
  Tape tape;
  const Var a = tape.constant(Tensor::zeros({2, 3}));
  const Var b = tape.constant(Tensor::zeros({2, 3}));
  try {
    diff::matmul(a, b);
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[2,3]"), std::string::npos) << msg;
  }
}

TEST(Matmul, GradientOfSumIsOnesTimesBTransposed) {
  Rng rng(5);
  Tensor a = random_tensor({2, 3}, rng);
  Tensor b = random_tensor({3, 4}, rng);
  Tape tape;
  tape.backward(diff::sum(diff::matmul(tape.param(a), tape.param(b))));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      double expected = 0.0;
      for (std::size_t j = 0; j < 4; ++j) expected += b.at(k, j);
      EXPECT_NEAR((*a.grad)[i * 3 + k], expected, 1e-12);
    }
  }
  std::vector<Tensor> inputs = {a, b};
  EXPECT_LT(primitive_check(inputs, [](Tape&, std::vector<Var>& v) { return diff::matmul(v[0], v[1]); }), 1e-6);
}

TEST(Elementwise, SoftmaxOfZerosIsUniform) {
  Tape tape;
  const Var s = diff::softmax(tape.constant(Tensor(diff::Shape{3}, {0, 0, 0})), 0);
  for (double v : s.value().data) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Elementwise, LeakyReluSlope) {
  Tape tape;
  EXPECT_DOUBLE_EQ(diff::leaky_relu(tape.constant(Tensor::scalar(-1.0)), 0.2).item(), -0.2);
  EXPECT_DOUBLE_EQ(diff::leaky_relu(tape.constant(Tensor::scalar(3.0)), 0.2).item(), 3.0);
}

TEST(Elementwise, TanhDerivativeAtZero) {
  Tensor x = Tensor::scalar(0.0);
  x.requires_grad = true;
  Tape tape;
  tape.backward(diff::tanh(tape.param(x)));
  EXPECT_DOUBLE_EQ((*x.grad)[0], 1.0);
  const double h = 1e-5;
  EXPECT_NEAR((std::tanh(h) - std::tanh(-h)) / (2 * h), (*x.grad)[0], 1e-9);
}

TEST(Elementwise, EluAndSigmoidValues) {
  Tape tape;
  EXPECT_NEAR(diff::elu(tape.constant(Tensor::scalar(-1.0))).item(), std::exp(-1.0) - 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(diff::elu(tape.constant(Tensor::scalar(2.0))).item(), 2.0);
  EXPECT_DOUBLE_EQ(diff::sigmoid(tape.constant(Tensor::scalar(0.0))).item(), 0.5);
}

TEST(Elementwise, LogOfNonPositiveIsRejected) {
  Tape tape;
  EXPECT_THROW(diff::log(tape.constant(Tensor::scalar(0.0))), ContractError);
}

TEST(Elementwise, BroadcastMismatchIsDimensionError) {
  Tape tape;
  EXPECT_THROW(diff::add(tape.constant(Tensor::zeros({2, 3})), tape.constant(Tensor::zeros({3, 2}))), DimensionError);
  EXPECT_THROW(diff::add(tape.constant(Tensor::zeros({2, 3})), tape.constant(Tensor::zeros({3}))), DimensionError);
}

TEST(Elementwise, SoftmaxRowsSumToOne) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Tape tape;
    const Tensor x = random_tensor({4, 7}, rng, -30, 30);
    for (std::size_t axis : {0u, 1u}) {
      const Tensor s = diff::softmax(tape.constant(x), axis).value();
      const Tensor sums = diff::sum(tape.constant(s), axis).value();
      for (double v : s.data) EXPECT_GE(v, 0.0);
      for (double v : sums.data) EXPECT_NEAR(v, 1.0, 1e-9);
    }
  }
}

TEST(Elementwise, LogSumExpIsStableForLargeInputs) {
  Tape tape;
  const Var v = diff::log_sum_exp(tape.constant(Tensor(diff::Shape{1, 2}, {1000.0, 1000.0})), 1);
  EXPECT_NEAR(v.item(), 1000.0 + std::log(2.0), 1e-9);
}

struct PrimitiveCase {
  const char* name;
  std::vector<diff::Shape> shapes;
  std::function<Var(Tape&, std::vector<Var>&)> op;
  double lo = -1.0;
  double hi = 1.0;
};

void PrintTo(const PrimitiveCase& c, std::ostream* os) { *os << c.name; }

class PrimitiveGradient : public ::testing::TestWithParam<PrimitiveCase> {};

TEST_P(PrimitiveGradient, MatchesCentralDifferences) {
  const PrimitiveCase& c = GetParam();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed * 101);
    std::vector<Tensor> inputs;
    for (const auto& s : c.shapes) inputs.push_back(random_tensor(s, rng, c.lo, c.hi));
    EXPECT_LT(primitive_check(inputs, c.op, seed), 1e-4) << c.name << " seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllPrimitives, PrimitiveGradient,
    ::testing::Values(
        PrimitiveCase{"matmul", {{3, 4}, {4, 2}}, [](Tape&, auto& v) { return diff::matmul(v[0], v[1]); }},
        PrimitiveCase{"transpose", {{3, 4}}, [](Tape&, auto& v) { return diff::transpose(v[0]); }},
        PrimitiveCase{"add_broadcast", {{3, 4}, {1, 4}}, [](Tape&, auto& v) { return diff::add(v[0], v[1]); }},
        PrimitiveCase{"sub_broadcast", {{3, 1}, {3, 4}}, [](Tape&, auto& v) { return diff::sub(v[0], v[1]); }},
        PrimitiveCase{"mul", {{3, 4}, {3, 4}}, [](Tape&, auto& v) { return diff::mul(v[0], v[1]); }},
        PrimitiveCase{"mul_self", {{2, 3}}, [](Tape&, auto& v) { return diff::mul(v[0], v[0]); }},
        PrimitiveCase{"maximum", {{3, 4}, {3, 4}}, [](Tape&, auto& v) { return diff::maximum(v[0], v[1]); }},
        PrimitiveCase{"scale", {{3, 4}}, [](Tape&, auto& v) { return diff::scale(v[0], -2.5); }},
        PrimitiveCase{"add_scalar", {{3, 4}}, [](Tape&, auto& v) { return diff::add_scalar(v[0], 0.7); }},
        PrimitiveCase{"tanh", {{3, 4}}, [](Tape&, auto& v) { return diff::tanh(v[0]); }},
        PrimitiveCase{"sigmoid", {{3, 4}}, [](Tape&, auto& v) { return diff::sigmoid(v[0]); }},
        PrimitiveCase{"elu", {{3, 4}}, [](Tape&, auto& v) { return diff::elu(v[0]); }},
        PrimitiveCase{"leaky_relu", {{3, 4}}, [](Tape&, auto& v) { return diff::leaky_relu(v[0], 0.2); }},
        PrimitiveCase{"relu", {{3, 4}}, [](Tape&, auto& v) { return diff::relu(v[0]); }},
        PrimitiveCase{"exp", {{3, 4}}, [](Tape&, auto& v) { return diff::exp(v[0]); }},
        PrimitiveCase{"log", {{3, 4}}, [](Tape&, auto& v) { return diff::log(v[0]); }, 0.5, 2.0},
        PrimitiveCase{"concat0", {{2, 3}, {1, 3}}, [](Tape&, auto& v) { return diff::concat({v[0], v[1]}, 0); }},
        PrimitiveCase{"concat1", {{2, 3}, {2, 2}}, [](Tape&, auto& v) { return diff::concat({v[0], v[1]}, 1); }},
        PrimitiveCase{"slice", {{4, 5}}, [](Tape&, auto& v) { return diff::slice(v[0], 1, 1, 3); }},
        PrimitiveCase{"gather_rows", {{4, 3}}, [](Tape&, auto& v) { return diff::gather_rows(v[0], {2, 0, 2}); }},
        PrimitiveCase{"pick", {{3, 3}}, [](Tape&, auto& v) { return diff::pick(v[0], {{0, 1}, {2, 2}, {0, 1}}); }},
        PrimitiveCase{"reshape", {{2, 6}}, [](Tape&, auto& v) { return diff::reshape(v[0], {3, 4}); }},
        PrimitiveCase{"softmax0", {{4, 3}}, [](Tape&, auto& v) { return diff::softmax(v[0], 0); }},
        PrimitiveCase{"softmax1", {{4, 3}}, [](Tape&, auto& v) { return diff::softmax(v[0], 1); }},
        PrimitiveCase{"log_sum_exp0", {{4, 3}}, [](Tape&, auto& v) { return diff::log_sum_exp(v[0], 0); }},
        PrimitiveCase{"log_sum_exp1", {{4, 3}}, [](Tape&, auto& v) { return diff::log_sum_exp(v[0], 1); }},
        PrimitiveCase{"sum", {{4, 3}}, [](Tape&, auto& v) { return diff::sum(v[0]); }},
        PrimitiveCase{"mean", {{4, 3}}, [](Tape&, auto& v) { return diff::mean(v[0]); }},
        PrimitiveCase{"sum_axis", {{4, 3}}, [](Tape&, auto& v) { return diff::sum(v[0], 1); }}),
    [](const ::testing::TestParamInfo<PrimitiveCase>& info) { return std::string(info.param.name); });

TEST(Backward, SumGivesOnes) {
  Tensor x(diff::Shape{3}, {1, 2, 3});
  x.requires_grad = true;
  Tape tape;
  tape.backward(diff::sum(tape.param(x)));
  EXPECT_EQ(*x.grad, (std::vector<double>{1, 1, 1}));
}

TEST(Backward, SquareAtTwo) {
  Tensor x(diff::Shape{1}, {2});
  x.requires_grad = true;
  Tape tape;
  const Var v = tape.param(x);
  tape.backward(diff::sum(diff::mul(v, v)));
  EXPECT_EQ(*x.grad, (std::vector<double>{4}));
}

TEST(Backward, NonScalarLossIsContractError) {
  Tensor x(diff::Shape{2}, {1, 2});
  x.requires_grad = true;
  Tape tape;
  EXPECT_THROW(tape.backward(diff::exp(tape.param(x))), ContractError);
}

TEST(Backward, FanOutAccumulatesBranchGradients) {
  Tensor x(diff::Shape{1, 2}, {0.3, -0.4});
  x.requires_grad = true;
  Tape tape;
  const Var v = tape.param(x);
  // d/dx [sum(tanh x) + sum(3x) + sum(x*x)] = (1 - tanh^2) + 3 + 2x
  const Var loss = diff::add(diff::add(diff::sum(diff::tanh(v)), diff::sum(diff::scale(v, 3.0))), diff::sum(diff::mul(v, v)));
  tape.backward(loss);
  for (std::size_t i = 0; i < 2; ++i) {
    const double xi = x.data[i];
    EXPECT_NEAR((*x.grad)[i], (1 - std::tanh(xi) * std::tanh(xi)) + 3.0 + 2.0 * xi, 1e-14);
  }
}

TEST(Backward, GradientsAccumulateAcrossTapesUntilZeroed) {
  Tensor x(diff::Shape{1}, {1.5});
  x.requires_grad = true;
  for (int i = 0; i < 2; ++i) {
    Tape tape;
    tape.backward(diff::sum(diff::scale(tape.param(x), 2.0)));
  }
  EXPECT_EQ(*x.grad, (std::vector<double>{4.0}));
  x.zero_grad();
  EXPECT_TRUE(!x.grad || (*x.grad)[0] == 0.0);
}

TEST(Backward, RepeatedParamBindingReturnsSameNode) {
  Tensor x(diff::Shape{1}, {1.0});
  x.requires_grad = true;
  Tape tape;
  EXPECT_EQ(tape.param(x).id(), tape.param(x).id());
}

TEST(Backward, ReverseTopologicalOrder) {
  Tensor x(diff::Shape{1}, {0.5});
  x.requires_grad = true;
  Tape tape;
  const Var a = diff::tanh(tape.param(x));
  const Var b = diff::exp(a);
  tape.backward(diff::sum(b));
  const auto& order = tape.backward_order();
  ASSERT_GE(order.size(), 3u);
  for (std::size_t i = 1; i < order.size(); ++i) EXPECT_GT(order[i - 1], order[i]);
}

TEST(Backward, ConstantsAndUntrackedTapesGetNoGradient) {
  Tensor x(diff::Shape{1}, {0.5});
  x.requires_grad = true;
  Tape tape(false);
  const Var v = diff::sum(diff::mul(tape.param(x), tape.param(x)));
  EXPECT_FALSE(v.needs_grad());
  EXPECT_DOUBLE_EQ(v.item(), 0.25);
}
