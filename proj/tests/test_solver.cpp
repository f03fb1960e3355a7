#include "doctest.h"

#include <cmath>

#include "tenet/errors.hpp"
#include "tenet/model.hpp"
#include "tenet/rng.hpp"
#include "tenet/solver.hpp"

using namespace tenet;

namespace {

// standardized data with a planted two-coordinate signal
Dataset toy_data(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.normal();
  Vector beta = Vector::Zero(p);
  beta[0] = 1.0;
  beta[1] = -0.7;
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = X.row(i).dot(beta) + 0.3 * rng.normal();
  return standardize(y, X).data;
}

}  // namespace

TEST_CASE("two_kink_prox closed-form cases") {
  // interior of the segment between the kinks
  CHECK(two_kink_prox(1.0, 0.9, 0.3, 0.3, 1.0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(two_kink_prox(1.0, 0.5, 0.2, 0.4, 1.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(two_kink_prox(1.0, -0.4, 0.3, 0.2, -2.0) == doctest::Approx(-0.3).epsilon(1e-15));
  // outside both kinks
  CHECK(two_kink_prox(2.0, -3.0, 0.5, 0.25, -1.0) == doctest::Approx(-1.125).epsilon(1e-15));
  CHECK(two_kink_prox(1.0, 5.0, 1.0, 1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  // landing exactly on a kink
  CHECK(two_kink_prox(1.0, 0.5, 1.0, 0.0, 0.0) == 0.0);
  CHECK(two_kink_prox(1.0, 2.0, 0.0, 3.0, 1.0) == 1.0);
  CHECK(two_kink_prox(1.0, 1.3, 0.2, 0.4, 1.0) == 1.0);
  // no kinks at all: plain quadratic
  CHECK(two_kink_prox(3.0, 1.5, 0.0, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("two_kink_prox satisfies the subgradient optimality condition") {
  Rng rng(404);
  for (int i = 0; i < 2000; ++i) {
    const double q = std::pow(10.0, rng.uniform(-2.0, 1.0));
    const double z = rng.uniform(-8.0, 8.0);
    const double a = rng.uniform(0.0, 4.0);
    const double c = rng.uniform(0.0, 4.0);
    const double t = (i % 5 == 0) ? 0.0 : rng.uniform(-4.0, 4.0);
    const double b = two_kink_prox(q, z, a, c, t);

    const auto sgn_left = [](double x) { return x > 0.0 ? 1.0 : -1.0; };
    const auto sgn_right = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
    const double dl = q * b - z + a * sgn_left(b) + c * sgn_left(b - t);
    const double dr = q * b - z + a * sgn_right(b) + c * sgn_right(b - t);
    const double tol = 1e-9 * std::max(1.0, std::abs(z) + a + c);
    CHECK(dl <= tol);
    CHECK(dr >= -tol);
  }
}

TEST_CASE("two_kink_prox input validation") {
  CHECK_THROWS_AS(two_kink_prox(0.0, 1.0, 1.0, 1.0, 0.0), NonpositiveCurvature);
  CHECK_THROWS_AS(two_kink_prox(-1.0, 1.0, 1.0, 1.0, 0.0), NonpositiveCurvature);
  CHECK_THROWS_AS(two_kink_prox(1.0, 1.0, -0.1, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(two_kink_prox(1.0, 1.0, 1.0, -0.1, 0.0), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(two_kink_prox(1.0, inf, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(two_kink_prox(1.0, 1.0, 1.0, 1.0, inf), std::invalid_argument);
}

TEST_CASE("penalty value at a hand-computed point") {
  Vector bt(2);
  bt << 1.0, -1.0;
  const PenaltySpec pen = PenaltySpec::coupled_form(0.5, 0.5, 0.4, bt);
  Vector beta(2);
  beta << 2.0, 0.0;
  // own: 0.4*2 + 0.6*4 = 3.2; transfer: 0.4*2 + 0.6*2 = 2.0; mixed and scaled: 1.3
  CHECK(pen.value(beta) == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("hand-built penalty with an inconsistent coupled shape is rejected") {
  PenaltySpec pen;
  pen.lambda = 0.1;
  pen.rho1 = 0.3;
  pen.rho2 = 0.3;
  pen.coupled = true;
  pen.beta_tilde = Vector::Zero(2);
  const Dataset data = toy_data(20, 2, 1);
  CHECK_THROWS_AS(objective(Vector::Zero(2), data, pen), WrongPenaltyShape);
}

TEST_CASE("fit_enet and fit_tlasso are exact aliases of fit") {
  const Dataset data = toy_data(60, 8, 2);
  SolverOptions opts;
  opts.tol = 1e-10;

  const FitResult a = fit_enet(data, 0.3, 0.6, opts);
  const FitResult b = fit(data, PenaltySpec::coupled_form(0.3, 1.0, 0.6, Vector::Zero(8)), opts);
  CHECK(a.beta == b.beta);
  CHECK(a.objective == b.objective);
  CHECK(a.sweeps == b.sweeps);

  Vector bt = Vector::Zero(8);
  bt[0] = 0.9;
  bt[1] = -0.6;
  const FitResult c = fit_tlasso(data, bt, 0.2, 0.5, opts);
  const FitResult d = fit(data, PenaltySpec::decoupled_form(0.2, 0.5, 1.0, 0.0, bt), opts);
  CHECK(c.beta == d.beta);
  CHECK(c.objective == d.objective);
}

TEST_CASE("objective trace never increases") {
  const Dataset data = toy_data(40, 12, 3);
  Vector bt = Vector::Zero(12);
  bt[2] = 1.1;
  const PenaltySpec pen = PenaltySpec::coupled_form(0.15, 0.5, 0.5, bt);
  const FitResult f = fit(data, pen);
  REQUIRE(f.converged);
  for (std::size_t i = 1; i < f.objective_trace.size(); ++i)
    CHECK(f.objective_trace[i] <= f.objective_trace[i - 1] + 1e-12 * f.objective_trace[i - 1]);
  CHECK(f.objective == f.objective_trace.back());
  CHECK(f.kkt <= 1e-8);
}

TEST_CASE("lambda = 0 recovers least squares") {
  const Dataset data = toy_data(50, 5, 4);
  SolverOptions opts;
  opts.tol = 1e-10;
  opts.max_sweeps = 100000;
  const FitResult f = fit(data, PenaltySpec::coupled_form(0.0, 1.0, 0.5, Vector::Zero(5)), opts);
  REQUIRE(f.converged);
  const Vector ols =
      (data.X.transpose() * data.X).ldlt().solve(data.X.transpose() * data.y);
  CHECK((f.beta - ols).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("lambda = 0 with an all-zero column falls back to gradient descent") {
  Dataset data = toy_data(30, 4, 5);
  data.X.col(2).setZero();  // assembled by hand; standardize would reject this
  const PenaltySpec pen = PenaltySpec::coupled_form(0.0, 1.0, 0.5, Vector::Zero(4));
  SolverOptions opts;
  opts.tol = 1e-8;
  opts.max_sweeps = 200000;
  const FitResult f = fit(data, pen, opts);
  CHECK(f.converged);
  CHECK(f.kkt <= 1e-8);
  CHECK(f.beta[2] == 0.0);  // nothing ever moves a dead coordinate
}

TEST_CASE("zero-curvature coordinate with a nonzero penalty is an error") {
  Dataset data = toy_data(30, 4, 6);
  data.X.col(1).setZero();
  const PenaltySpec pen = PenaltySpec::coupled_form(0.1, 1.0, 1.0, Vector::Zero(4));  // quad() = 0
  CHECK_THROWS_AS(fit(data, pen), DegenerateQ);
}

TEST_CASE("pure transfer penalty with a dominating lambda returns the source exactly") {
  const Dataset data = toy_data(40, 6, 7);
  Vector bt(6);
  bt << 0.4, -0.2, 0.0, 0.1, 0.0, -0.5;
  const double lam =
      2.0 * (data.X.transpose() * (data.y - data.X * bt) / 40.0).lpNorm<Eigen::Infinity>();
  const PenaltySpec pen = PenaltySpec::decoupled_form(lam, 0.0, 1.0, 0.0, bt);
  const FitResult f = fit(data, pen);
  REQUIRE(f.converged);
  CHECK(f.beta == bt);  // tie-break starts there and no coordinate can leave
  CHECK(f.sweeps == 1);
}

TEST_CASE("warm start at the solution converges in one sweep") {
  const Dataset data = toy_data(60, 10, 8);
  const PenaltySpec pen = PenaltySpec::coupled_form(0.2, 0.7, 0.5, Vector::Zero(10));
  SolverOptions opts;
  opts.tol = 1e-10;
  const FitResult first = fit(data, pen, opts);
  REQUIRE(first.converged);

  SolverOptions warm = opts;
  warm.warm_start = first.beta;
  const FitResult second = fit(data, pen, warm);
  REQUIRE(second.converged);
  CHECK(second.sweeps == 1);
  CHECK((second.beta - first.beta).lpNorm<Eigen::Infinity>() < 10 * opts.tol);
}

TEST_CASE("randomized sweep order reaches the same strictly convex optimum") {
  const Dataset data = toy_data(50, 9, 9);
  const PenaltySpec pen = PenaltySpec::coupled_form(0.1, 0.5, 0.5, Vector::Zero(9));
  SolverOptions cyc;
  cyc.tol = 1e-11;
  SolverOptions rnd = cyc;
  rnd.order = SweepOrder::Randomized;
  rnd.seed = 123;
  const FitResult a = fit(data, pen, cyc);
  const FitResult b = fit(data, pen, rnd);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.beta - b.beta).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("kkt_residual is zero inside the subdifferential and positive outside") {
  const Dataset data = toy_data(30, 3, 10);
  // huge l1 weight: zero is optimal and the residual reports zero
  const PenaltySpec big = PenaltySpec::coupled_form(100.0, 1.0, 1.0, Vector::Zero(3));
  CHECK(kkt_residual(Vector::Zero(3), data, big) == 0.0);
  // tiny penalty at an arbitrary point: clearly not optimal
  const PenaltySpec small = PenaltySpec::coupled_form(1e-6, 1.0, 1.0, Vector::Zero(3));
  Vector off(3);
  off << 5.0, -4.0, 3.0;
  CHECK(kkt_residual(off, data, small) > 1.0);
}

TEST_CASE("solver option validation") {
  const Dataset data = toy_data(20, 3, 11);
  const PenaltySpec pen = PenaltySpec::coupled_form(0.1, 1.0, 0.5, Vector::Zero(3));
  SolverOptions bad_tol;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(fit(data, pen, bad_tol), std::invalid_argument);
  SolverOptions bad_sweeps;
  bad_sweeps.max_sweeps = 0;
  CHECK_THROWS_AS(fit(data, pen, bad_sweeps), std::invalid_argument);
  SolverOptions bad_warm;
  bad_warm.warm_start = Vector::Zero(2);
  CHECK_THROWS_AS(fit(data, pen, bad_warm), DimensionMismatch);
  CHECK_THROWS_AS(PenaltySpec::coupled_form(-0.1, 1.0, 0.5, Vector::Zero(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(PenaltySpec::coupled_form(0.1, 1.5, 0.5, Vector::Zero(3)),
                  std::invalid_argument);
}
