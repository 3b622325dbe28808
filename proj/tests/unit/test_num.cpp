#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ddmpc/num/finite_diff.hpp"
#include "ddmpc/num/lbfgs.hpp"
#include "ddmpc/num/rng.hpp"

using namespace ddmpc::num;

TEST_SUITE_BEGIN("num");

TEST_CASE("rng: degenerate interval returns the endpoint") {
  Rng rng(1);
  CHECK(rng.uniform(0.0, 0.0) == 0.0);
  CHECK(rng.uniform(3.5, 3.5) == 3.5);
}

TEST_CASE("rng: identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform(0.0, 1.0) == b.uniform(0.0, 1.0));
}

TEST_CASE("rng: split streams are independent and reproducible") {
  Rng root(7);
  Rng s1 = root.split(1);
  Rng s2 = root.split(2);
  Rng s1_again = Rng(7).split(1);
  bool any_diff = false;
  for (int i = 0; i < 50; ++i) {
    const double a = s1.uniform01();
    const double b = s2.uniform01();
    CHECK(a == s1_again.uniform01());
    any_diff = any_diff || (a != b);
  }
  CHECK(any_diff);
}

TEST_CASE("rng: mean of 1e6 draws on [0,1)") {
  Rng rng(123);
  double sum = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) sum += rng.uniform01();
  CHECK(std::abs(sum / n - 0.5) < 0.002);
}

TEST_CASE("rng: draws stay in [lo, hi)") {
  Rng rng(9);
  for (int i = 0; i < 10'000; ++i) {
    const double v = rng.uniform(-3.0, 3.0);
    CHECK(v >= -3.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("finite_diff_grad: x^2 at 3") {
  const Vec x = Vec::Constant(1, 3.0);
  const Vec g = finite_diff_grad([](const Vec& v) { return v[0] * v[0]; }, x);
  CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("finite_diff_grad: constant function has zero gradient") {
  const Vec x = Vec::Random(5);
  const Vec g = finite_diff_grad([](const Vec&) { return 4.2; }, x);
  CHECK(g.norm() == 0.0);
}

TEST_CASE("finite_diff_grad: matches the analytic gradient of sin(x1)+x1*x2") {
  Vec x(2);
  x << 0.3, -0.7;
  const Vec g =
      finite_diff_grad([](const Vec& v) { return std::sin(v[0]) + v[0] * v[1]; }, x);
  CHECK(g[0] == doctest::Approx(std::cos(0.3) - 0.7).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("finite_diff_grad: non-finite evaluation names the coordinate") {
  Vec x(2);
  x << 1.0, 1.0;
  CHECK_THROWS_WITH_AS(
      finite_diff_grad([](const Vec& v) { return std::log(v[1] - 1.0); }, x),
      doctest::Contains("coordinate"), std::runtime_error);
}

namespace {

Objective quadratic_objective(const Mat& q, const Vec& b) {
  return [q, b](const Vec& x, Vec& g) {
    g = q * x - b;
    return 0.5 * x.dot(q * x) - b.dot(x);
  };
}

}  // namespace

TEST_CASE("lbfgs: shifted quadratic reaches its unique minimum") {
  Vec a(3);
  a << 1.0, 2.0, 3.0;
  const auto res = lbfgs_minimize(
      [&a](const Vec& x, Vec& g) {
        g = 2.0 * (x - a);
        return (x - a).squaredNorm();
      },
      Vec::Zero(3), {.max_iterations = 100, .gradient_tolerance = 1e-10});
  CHECK((res.x - a).norm() < 1e-8);
  CHECK(res.reason == StopReason::gradient_tolerance);
}

TEST_CASE("lbfgs: rosenbrock from (-1.2, 1)") {
  Vec x0(2);
  x0 << -1.2, 1.0;
  const auto res = lbfgs_minimize(
      [](const Vec& x, Vec& g) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
      },
      x0, {.max_iterations = 500, .gradient_tolerance = 1e-10});
  CHECK(std::abs(res.x[0] - 1.0) < 1e-6);
  CHECK(std::abs(res.x[1] - 1.0) < 1e-6);
}

TEST_CASE("lbfgs: random SPD quadratic matches a direct linear solve") {
  Rng rng(77);
  const Index dim = 10;
  Mat a(dim, dim);
  for (Index i = 0; i < dim; ++i) a.col(i) = rng.uniform_vec(dim, -1.0, 1.0);
  const Mat q = a * a.transpose() + 0.5 * Mat::Identity(dim, dim);
  const Vec b = rng.uniform_vec(dim, -1.0, 1.0);

  const auto res = lbfgs_minimize(quadratic_objective(q, b), Vec::Zero(dim),
                                  {.max_iterations = 200, .gradient_tolerance = 1e-12});
  const Vec oracle = Eigen::LDLT<Mat>(q).solve(b);
  CHECK((res.x - oracle).norm() < 1e-7);
  CHECK(res.f <= 0.0);  // f(x0) = 0
}

TEST_CASE("lbfgs: near-exact line search solves quadratics within dim+5 iterations") {
  // a tight curvature constant makes the strong-Wolfe search effectively exact
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Index dim = 2 + static_cast<Index>(rng.uniform(0.0, 13.0));
    Mat a(dim, dim);
    for (Index i = 0; i < dim; ++i) a.col(i) = rng.uniform_vec(dim, -1.0, 1.0);
    const Mat q = a * a.transpose() + 0.1 * Mat::Identity(dim, dim);
    const Vec b = rng.uniform_vec(dim, -2.0, 2.0);

    OptimizerOptions opts;
    opts.max_iterations = static_cast<int>(dim) + 5;
    opts.gradient_tolerance = 1e-8;
    opts.memory_pairs = 20;
    opts.sufficient_decrease = 1e-6;
    opts.curvature = 1e-4;
    const auto res =
        lbfgs_minimize(quadratic_objective(q, b), rng.uniform_vec(dim, -1.0, 1.0), opts);
    CAPTURE(dim);
    CHECK(res.grad_norm <= 1e-8);
  }
}

TEST_CASE("lbfgs: deterministic across runs") {
  const auto run = [] {
    Rng rng(5);
    Mat a(6, 6);
    for (Index i = 0; i < 6; ++i) a.col(i) = rng.uniform_vec(6, -1.0, 1.0);
    const Mat q = a * a.transpose() + Mat::Identity(6, 6);
    const Vec b = rng.uniform_vec(6, -1.0, 1.0);
    return lbfgs_minimize(quadratic_objective(q, b), Vec::Zero(6)).x;
  };
  const Vec x1 = run();
  const Vec x2 = run();
  CHECK(x1 == x2);
}

TEST_CASE("lbfgs: non-finite objective aborts with the offending iterate") {
  CHECK_THROWS_AS(lbfgs_minimize(
                      [](const Vec& x, Vec& g) {
                        g = Vec::Constant(1, -1.0);
                        return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN()
                                          : -x[0];
                      },
                      Vec::Zero(1), {.max_iterations = 20}),
                  NonFiniteError);
}

TEST_CASE("lbfgs: option validation") {
  OptimizerOptions bad;
  bad.curvature = bad.sufficient_decrease;  // violates c1 < c2
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.gradient_tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.memory_pairs = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_SUITE_END();
