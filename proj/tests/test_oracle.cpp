#include "doctest.h"

#include <cmath>

#include "tenet/errors.hpp"
#include "tenet/oracle.hpp"
#include "tenet/rng.hpp"
#include "tenet/solver.hpp"

using namespace tenet;

TEST_CASE("refine_bracket pins a smooth minimum") {
  const auto f = [](double x) { return (x - 2.0) * (x - 2.0); };
  const Bracket b = refine_bracket(f, -10.0, 10.0, 1e-9);
  CHECK(b.hi - b.lo <= 1e-9);
  CHECK(b.lo <= 2.0);
  CHECK(b.hi >= 2.0);
  CHECK(b.best == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("refine_bracket stops once the interval hits roundoff resolution") {
  const auto f = [](double x) { return std::abs(x - 1e8); };
  // requested width is unreachable at this magnitude; must terminate anyway
  const Bracket b = refine_bracket(f, 0.0, 2e8, 1e-12);
  CHECK(b.lo <= 1e8);
  CHECK(b.hi >= 1e8);
  CHECK(b.hi - b.lo < 1.0);
}

TEST_CASE("prox_oracle agrees with a literal dense grid on one instance") {
  const double q = 0.8, z = 1.7, a = 0.6, c = 0.9, t = 1.2;
  const auto f = [&](double b) {
    return 0.5 * q * b * b - z * b + a * std::abs(b) + c * std::abs(b - t);
  };
  double best = -5.0;
  for (int i = 0; i <= 10000000; ++i) {
    const double x = -5.0 + i * 1e-6;
    if (f(x) < f(best)) best = x;
  }
  CHECK(std::abs(prox_oracle(q, z, a, c, t) - best) < 1e-6);
}

TEST_CASE("prox_oracle and two_kink_prox agree on random draws") {
  Rng rng(606);
  for (int i = 0; i < 500; ++i) {
    const double q = rng.uniform(0.5, 2.0);
    const double z = rng.uniform(-6.0, 6.0);
    const double a = rng.uniform(0.0, 3.0);
    const double c = rng.uniform(0.0, 3.0);
    const double t = (i % 4 == 0) ? 0.0 : rng.uniform(-3.0, 3.0);
    CHECK(std::abs(prox_oracle(q, z, a, c, t) - two_kink_prox(q, z, a, c, t)) < 1e-9);
  }
}

TEST_CASE("prox_oracle validation") {
  CHECK_THROWS_AS(prox_oracle(0.0, 1.0, 1.0, 1.0, 0.0), NonpositiveCurvature);
  CHECK_THROWS_AS(prox_oracle(1.0, 1.0, -1.0, 1.0, 0.0), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(prox_oracle(1.0, nan, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("full_oracle matches the soft-threshold solution on an orthonormal design") {
  // columns orthonormal after scaling by sqrt(n): X'X/n = I, so the lasso
  // solution is coordinatewise soft thresholding of X'y/n
  const int n = 30, p = 3;
  Rng rng(707);
  Matrix G(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) G(i, j) = rng.normal();
  for (int j = 0; j < p; ++j) G.col(j).array() -= G.col(j).mean();
  const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ() *
                   Matrix::Identity(n, p) * std::sqrt(static_cast<double>(n));
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal();
  y.array() -= y.mean();

  Dataset data;
  data.X = Q;
  data.y = y;
  const double lam = 0.25;
  const PenaltySpec pen = PenaltySpec::coupled_form(lam, 1.0, 1.0, Vector::Zero(p));
  const OracleResult res = full_oracle(data, pen, 31);

  const Vector corr = data.X.transpose() * data.y / static_cast<double>(n);
  for (int j = 0; j < p; ++j) {
    const double soft = std::copysign(std::max(std::abs(corr[j]) - lam, 0.0), corr[j]);
    CHECK(std::abs(res.beta[j] - soft) < 1e-6);
  }
  CHECK(res.objective <= objective(res.beta, data, pen) + 1e-12);
}

TEST_CASE("full_oracle refuses wide problems") {
  Dataset data;
  data.X = Matrix::Identity(8, 4);
  data.y = Vector::Ones(8);
  const PenaltySpec pen = PenaltySpec::coupled_form(0.1, 1.0, 0.5, Vector::Zero(4));
  CHECK_THROWS_AS(full_oracle(data, pen), DimensionTooLarge);
}
