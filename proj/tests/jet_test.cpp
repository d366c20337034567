#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "sasaki/jet.hpp"
#include "sasaki/random.hpp"

namespace {

using sasaki::Jet3;
using Big = boost::multiprecision::cpp_bin_float_50;

// Random expression trees over three variables. Unary nodes wrap their
// argument so every node stays inside the domain of the function.
struct Node {
  enum Kind { Var, Const, Add, Sub, Mul, Div, Exp, Sin, Cos, Log, Sqrt, Pow, Recip } kind = Const;
  int var = 0;
  double value = 0.0;
  std::unique_ptr<Node> lhs, rhs;
};

std::unique_ptr<Node> random_tree(sasaki::Rng& rng, int depth) {
  auto n = std::make_unique<Node>();
  const double u = rng.uniform();
  if (depth == 0 || u < 0.15) {
    if (rng.uniform() < 0.75) {
      n->kind = Node::Var;
      n->var = static_cast<int>(rng.uniform() * 3.0);
    } else {
      n->kind = Node::Const;
      n->value = rng.uniform(-2.0, 2.0);
    }
    return n;
  }
  const int k = 2 + static_cast<int>(rng.uniform() * 11.0);
  n->kind = static_cast<Node::Kind>(k);
  n->lhs = random_tree(rng, depth - 1);
  if (n->kind <= Node::Div) n->rhs = random_tree(rng, depth - 1);
  return n;
}

template <class T>
T eval(const Node& n, const std::vector<T>& x) {
  using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
  switch (n.kind) {
    case Node::Var: return x[static_cast<std::size_t>(n.var)];
    case Node::Const: return x[0] * 0.0 + n.value;
    default: break;
  }
  const T a = eval(*n.lhs, x);
  switch (n.kind) {
    case Node::Add: return a + eval(*n.rhs, x);
    case Node::Sub: return a - eval(*n.rhs, x);
    case Node::Mul: return a * eval(*n.rhs, x);
    case Node::Div: {
      const T b = eval(*n.rhs, x);
      return a / (b * b + 1.5);
    }
    case Node::Exp: return exp(a * 0.3);
    case Node::Sin: return sin(a);
    case Node::Cos: return cos(a);
    case Node::Log: return log(a * a + 1.0);
    case Node::Sqrt: return sqrt(a * a + 1.0);
    case Node::Pow: return pow(a * a + 1.0, 0.7);
    case Node::Recip: return 1.0 / (a * a + 2.0);
    default: return a;
  }
}

// Nested central differences of the value channel, evaluated in 50-digit
// arithmetic so the step 1e-5 is limited by truncation only.
Big fd(const Node& n, std::vector<Big> x, const std::vector<int>& dirs, const Big& h) {
  if (dirs.empty()) return eval(n, x);
  const int d = dirs.back();
  const std::vector<int> rest(dirs.begin(), dirs.end() - 1);
  auto xp = x;
  auto xm = x;
  xp[static_cast<std::size_t>(d)] += h;
  xm[static_cast<std::size_t>(d)] -= h;
  return (fd(n, xp, rest, h) - fd(n, xm, rest, h)) / (2 * h);
}

void expect_close(double jet, const Big& oracle, const char* what) {
  const double o = static_cast<double>(oracle);
  EXPECT_LE(std::abs(jet - o), 1e-6 * std::max(1.0, std::abs(o))) << what << ": jet " << jet << " vs fd " << o;
}

}  // namespace

TEST(Jet3, RandomExpressionsMatchFiniteDifferences) {
  sasaki::Rng rng(sasaki::kDefaultSeed);
  const Big h("1e-5");
  for (int e = 0; e < 20; ++e) {
    const auto tree = random_tree(rng, 4);
    std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::vector<Jet3> jx;
    std::vector<Big> bx;
    for (std::size_t i = 0; i < 3; ++i) {
      jx.push_back(Jet3::variable(3, i, x[i]));
      bx.emplace_back(x[i]);
    }
    const Jet3 j = eval(*tree, jx);
    expect_close(j.value(), eval(*tree, bx), "value");
    for (int a = 0; a < 3; ++a) {
      expect_close(j.grad(a), fd(*tree, bx, {a}, h), "grad");
      for (int b = 0; b < 3; ++b) {
        expect_close(j.hess(a, b), fd(*tree, bx, {a, b}, h), "hess");
        for (int c = 0; c < 3; ++c) expect_close(j.third(a, b, c), fd(*tree, bx, {a, b, c}, h), "third");
      }
    }
  }
}

TEST(Jet3, ProductRuleExactOnPolynomials) {
  // f = x²y, all derivatives are exact polynomials.
  const Jet3 x = Jet3::variable(2, 0, 1.5);
  const Jet3 y = Jet3::variable(2, 1, -0.5);
  const Jet3 f = x * x * y;
  EXPECT_DOUBLE_EQ(f.value(), 1.5 * 1.5 * -0.5);
  EXPECT_DOUBLE_EQ(f.grad(0), 2 * 1.5 * -0.5);
  EXPECT_DOUBLE_EQ(f.grad(1), 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(f.hess(0, 0), 2 * -0.5);
  EXPECT_DOUBLE_EQ(f.hess(0, 1), 2 * 1.5);
  EXPECT_DOUBLE_EQ(f.third(0, 0, 1), 2.0);
  EXPECT_DOUBLE_EQ(f.third(0, 1, 0), 2.0);
  EXPECT_DOUBLE_EQ(f.third(1, 1, 1), 0.0);
}

TEST(Jet3, DerivativeTensorsAreSymmetric) {
  const Jet3 x = Jet3::variable(3, 0, 0.3);
  const Jet3 y = Jet3::variable(3, 1, -0.7);
  const Jet3 z = Jet3::variable(3, 2, 0.2);
  const Jet3 f = sin(x * y) / (z * z + 1.0) + exp(y * z) * sqrt(x * x + 2.0);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_DOUBLE_EQ(f.hess(a, b), f.hess(b, a));
      for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_DOUBLE_EQ(f.third(a, b, c), f.third(b, a, c));
        EXPECT_DOUBLE_EQ(f.third(a, b, c), f.third(a, c, b));
      }
    }
}

TEST(Jet3, ConstantHasNoDerivatives) {
  const Jet3 c = Jet3::constant(4, 2.5);
  const Jet3 f = exp(c) * c;
  EXPECT_DOUBLE_EQ(f.value(), std::exp(2.5) * 2.5);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(f.grad(a), 0.0);
}
