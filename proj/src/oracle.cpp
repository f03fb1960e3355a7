#include "tenet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tenet/errors.hpp"
#include "tenet/rng.hpp"

namespace tenet {

Bracket refine_bracket(const std::function<double(double)>& f, double lo, double hi, double width) {
  if (!(hi >= lo)) throw std::invalid_argument("empty bracket");
  constexpr int kPoints = 64;
  double best = lo;
  while (hi - lo > width) {
    const double h = (hi - lo) / kPoints;
    if (!(lo + h > lo)) break;  // interval already at roundoff resolution
    int ibest = 0;
    double fbest = f(lo);
    for (int i = 1; i <= kPoints; ++i) {
      const double fx = f(lo + i * h);
      if (fx < fbest) {
        fbest = fx;
        ibest = i;
      }
    }
    best = lo + ibest * h;
    const double new_lo = lo + std::max(0, ibest - 1) * h;
    const double new_hi = lo + std::min(kPoints, ibest + 1) * h;
    lo = new_lo;
    hi = new_hi;
  }
  return {lo, hi, best};
}

double prox_oracle(double q, double z, double a, double c, double t) {
  if (!(q > 0.0)) throw NonpositiveCurvature("curvature must be positive");
  if (!(a >= 0.0) || !(c >= 0.0)) throw std::invalid_argument("kink weights must be nonnegative");
  if (!std::isfinite(z) || !std::isfinite(t)) throw std::invalid_argument("inputs must be finite");

  // Bisection on one-sided derivative signs over an interval that surely
  // holds the minimizer (the penalties only pull toward the kinks). Value
  // bracketing is not used here: where the objective is flat its grid argmin
  // drifts by sqrt(eps |g| / q), while the derivative signs stay reliable.
  const auto d_side = [&](double b, double side) {
    const double sb = b != 0.0 ? (b > 0.0 ? 1.0 : -1.0) : side;
    const double sbt = b != t ? (b > t ? 1.0 : -1.0) : side;
    return q * b - z + a * sb + c * sbt;
  };
  const double margin = (std::abs(z) + a + c) / q + 1.0;
  double lo = std::min(0.0, t) - margin;
  double hi = std::max(0.0, t) + margin;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // adjacent doubles, cannot split further
    if (d_side(mid, -1.0) > 0.0)
      hi = mid;
    else if (d_side(mid, 1.0) < 0.0)
      lo = mid;
    else
      return mid;  // zero lies in the subdifferential
  }
  return 0.5 * (lo + hi);
}

namespace {

Vector full_subgradient(const Vector& beta, const Dataset& data, const PenaltySpec& pen) {
  const double n = static_cast<double>(data.n());
  Vector g = data.X.transpose() * (data.X * beta - data.y) / n;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double diff = beta[j] - pen.beta_tilde[j];
    g[j] += 2.0 * pen.l2_own() * beta[j] + 2.0 * pen.l2_transfer() * diff;
    if (beta[j] != 0.0) g[j] += pen.l1_own() * (beta[j] > 0.0 ? 1.0 : -1.0);
    if (diff != 0.0) g[j] += pen.l1_transfer() * (diff > 0.0 ? 1.0 : -1.0);
  }
  return g;
}

// coordinate sweeps minimizing each coordinate with prox_oracle
void polish(Vector& beta, const Dataset& data, const PenaltySpec& pen) {
  const double n = static_cast<double>(data.n());
  const double a = pen.l1_own();
  const double c = pen.l1_transfer();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      const Vector partial = data.y - data.X * beta + data.X.col(j) * beta[j];
      const double q = data.X.col(j).squaredNorm() / n + 2.0 * pen.quad();
      const double z = data.X.col(j).dot(partial) / n + 2.0 * pen.l2_transfer() * pen.beta_tilde[j];
      const double bn = prox_oracle(q, z, a, c, pen.beta_tilde[j]);
      moved = std::max(moved, std::abs(bn - beta[j]));
      beta[j] = bn;
    }
    if (moved < 1e-13) break;
  }
}

}  // namespace

OracleResult full_oracle(const Dataset& data, const PenaltySpec& pen, std::uint64_t seed) {
  if (data.p() > 3) throw DimensionTooLarge("oracle handles at most three coefficients");
  if (pen.beta_tilde.size() != data.p()) throw DimensionMismatch("source estimate length mismatch");
  const Eigen::Index p = data.p();
  const double n = static_cast<double>(data.n());

  double lip = 0.0;  // step scale from the curvature
  for (Eigen::Index j = 0; j < p; ++j)
    lip = std::max(lip, data.X.col(j).squaredNorm() / n + 2.0 * pen.quad());
  const double step0 = lip > 0.0 ? 0.5 / lip : 0.5;

  Rng rng(seed);
  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  constexpr int kRandomStarts = 50;
  for (int s = 0; s < kRandomStarts + 2; ++s) {
    Vector beta(p);
    if (s == 0)
      beta = Vector::Zero(p);
    else if (s == 1)
      beta = pen.beta_tilde;
    else
      for (Eigen::Index j = 0; j < p; ++j) beta[j] = 2.0 * rng.normal();

    for (int k = 0; k < 400; ++k) {
      const Vector g = full_subgradient(beta, data, pen);
      beta -= (step0 / std::sqrt(static_cast<double>(k + 1))) * g;
    }
    polish(beta, data, pen);

    const double value = objective(beta, data, pen);
    if (value < best.objective) {
      best.objective = value;
      best.beta = beta;
    }
  }
  return best;
}

}  // namespace tenet
