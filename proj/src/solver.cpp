#include "tenet/solver.hpp"

#include <algorithm>
#include <cmath>

#include "tenet/errors.hpp"
#include "tenet/rng.hpp"

namespace tenet {

namespace {

void check_range01(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void check_penalty(const PenaltySpec& pen) {
  if (!(pen.lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  check_range01(pen.alpha, "alpha");
  check_range01(pen.rho1, "rho1");
  check_range01(pen.rho2, "rho2");
  if (pen.coupled && pen.rho2 != 1.0 - pen.rho1)
    throw WrongPenaltyShape("coupled penalty requires rho2 = 1 - rho1");
}

void check_dims(const Vector& beta, const Dataset& data, const PenaltySpec& pen) {
  if (beta.size() != data.p()) throw DimensionMismatch("coefficient length mismatch");
  if (pen.beta_tilde.size() != data.p()) throw DimensionMismatch("source estimate length mismatch");
  if (data.y.size() != data.n()) throw DimensionMismatch("y and X row counts differ");
}

}  // namespace

PenaltySpec PenaltySpec::coupled_form(double lambda, double alpha, double rho, Vector beta_tilde) {
  PenaltySpec pen;
  pen.lambda = lambda;
  pen.alpha = alpha;
  pen.rho1 = rho;
  pen.rho2 = 1.0 - rho;
  pen.coupled = true;
  pen.beta_tilde = std::move(beta_tilde);
  check_penalty(pen);
  return pen;
}

PenaltySpec PenaltySpec::decoupled_form(double lambda, double alpha, double rho1, double rho2,
                                        Vector beta_tilde) {
  PenaltySpec pen;
  pen.lambda = lambda;
  pen.alpha = alpha;
  pen.rho1 = rho1;
  pen.rho2 = rho2;
  pen.coupled = false;
  pen.beta_tilde = std::move(beta_tilde);
  check_penalty(pen);
  return pen;
}

double PenaltySpec::value(const Vector& beta) const {
  if (beta.size() != beta_tilde.size()) throw DimensionMismatch("coefficient length mismatch");
  const Vector diff = beta - beta_tilde;
  return lambda * (alpha * (rho1 * beta.lpNorm<1>() + (1.0 - rho1) * beta.squaredNorm()) +
                   (1.0 - alpha) * (rho1 * diff.lpNorm<1>() + rho2 * diff.squaredNorm()));
}

double objective(const Vector& beta, const Dataset& data, const PenaltySpec& pen) {
  check_penalty(pen);
  check_dims(beta, data, pen);
  const double n = static_cast<double>(data.n());
  return (data.y - data.X * beta).squaredNorm() / (2.0 * n) + pen.value(beta);
}

double two_kink_prox(double q, double z, double a, double c, double t) {
  if (!(q > 0.0)) throw NonpositiveCurvature("curvature must be positive");
  if (!(a >= 0.0) || !(c >= 0.0)) throw std::invalid_argument("kink weights must be nonnegative");
  if (!std::isfinite(z) || !std::isfinite(t)) throw std::invalid_argument("inputs must be finite");

  // one-sided derivatives of |.| at the kinks
  const auto sgn_left = [](double x) { return x > 0.0 ? 1.0 : -1.0; };
  const auto sgn_right = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
  const auto d_left = [&](double b) { return q * b - z + a * sgn_left(b) + c * sgn_left(b - t); };
  const auto d_right = [&](double b) { return q * b - z + a * sgn_right(b) + c * sgn_right(b - t); };

  const double k1 = std::min(0.0, t);
  const double k2 = std::max(0.0, t);

  if (d_left(k1) > 0.0) return (z + a + c) / q;  // minimizer left of both kinks
  if (d_right(k1) >= 0.0) return k1;             // zero in the subdifferential at k1
  if (k1 != k2) {
    // segment between the kinks: sign(b) = sign(t), sign(b - t) = -sign(t)
    if (d_left(k2) > 0.0) return (z - (a - c) * (t > 0.0 ? 1.0 : -1.0)) / q;
    if (d_right(k2) >= 0.0) return k2;
  }
  return (z - a - c) / q;  // minimizer right of both kinks
}

double kkt_residual(const Vector& beta, const Dataset& data, const PenaltySpec& pen) {
  check_penalty(pen);
  check_dims(beta, data, pen);
  const double n = static_cast<double>(data.n());
  const Vector grad_ls = data.X.transpose() * (data.X * beta - data.y) / n;
  const double a = pen.l1_own();
  const double c = pen.l1_transfer();

  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double diff = beta[j] - pen.beta_tilde[j];
    const double smooth = grad_ls[j] + 2.0 * pen.l2_own() * beta[j] + 2.0 * pen.l2_transfer() * diff;
    double lo = smooth;
    double hi = smooth;
    if (beta[j] == 0.0) {
      lo -= a;
      hi += a;
    } else {
      const double s = a * (beta[j] > 0.0 ? 1.0 : -1.0);
      lo += s;
      hi += s;
    }
    if (diff == 0.0) {
      lo -= c;
      hi += c;
    } else {
      const double s = c * (diff > 0.0 ? 1.0 : -1.0);
      lo += s;
      hi += s;
    }
    const double dist = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    worst = std::max(worst, dist);
  }
  return worst;
}

namespace {

// lambda = 0 with a zero-norm column: plain gradient descent with step 1/L
FitResult least_squares_gradient_fit(const Dataset& data, const PenaltySpec& pen, Vector beta,
                                     const SolverOptions& opts) {
  const double n = static_cast<double>(data.n());
  FitResult out;
  const Matrix gram = data.X.transpose() * data.X / n;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lip = eig.eigenvalues().maxCoeff();
  for (int it = 0; it < opts.max_sweeps; ++it) {
    const Vector grad = data.X.transpose() * (data.X * beta - data.y) / n;
    out.kkt = grad.lpNorm<Eigen::Infinity>();
    out.objective_trace.push_back((data.y - data.X * beta).squaredNorm() / (2.0 * n));
    out.sweeps = it;
    if (out.kkt <= opts.tol) {
      out.converged = true;
      break;
    }
    if (lip <= 0.0) break;  // X is all zeros; any beta is optimal
    beta -= grad / lip;
  }
  if (lip <= 0.0) {
    out.kkt = 0.0;
    out.converged = true;
  }
  out.beta = std::move(beta);
  out.objective = objective(out.beta, data, pen);
  return out;
}

}  // namespace

FitResult fit(const Dataset& data, const PenaltySpec& pen, const SolverOptions& opts) {
  check_penalty(pen);
  check_dims(pen.beta_tilde, data, pen);
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (opts.max_sweeps < 1) throw std::invalid_argument("need at least one sweep");

  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const double nn = static_cast<double>(n);

  Vector beta;
  if (opts.warm_start) {
    if (opts.warm_start->size() != p) throw DimensionMismatch("warm start length mismatch");
    beta = *opts.warm_start;
  } else if (pen.quad() == 0.0) {
    beta = pen.beta_tilde;  // deterministic tie-break without strict convexity
  } else {
    beta = Vector::Zero(p);
  }

  Vector col_ms(p);  // |X_j|^2 / n
  for (Eigen::Index j = 0; j < p; ++j) col_ms[j] = data.X.col(j).squaredNorm() / nn;
  const Vector q = col_ms.array() + 2.0 * pen.quad();
  if (q.minCoeff() <= 0.0) {
    if (pen.lambda == 0.0) return least_squares_gradient_fit(data, pen, std::move(beta), opts);
    throw DegenerateQ("zero-curvature coordinate with a nonzero penalty");
  }

  const double a = pen.l1_own();
  const double c = pen.l1_transfer();
  const double pull = 2.0 * pen.l2_transfer();

  std::vector<Eigen::Index> order(p);
  for (Eigen::Index j = 0; j < p; ++j) order[j] = j;
  Rng rng(opts.seed);

  FitResult out;
  Vector resid = data.y - data.X * beta;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    if (opts.order == SweepOrder::Randomized) {
      for (Eigen::Index j = p - 1; j > 0; --j)
        std::swap(order[j], order[rng.below(static_cast<std::uint64_t>(j) + 1)]);
    }
    for (Eigen::Index idx = 0; idx < p; ++idx) {
      const Eigen::Index j = order[idx];
      const double bj = beta[j];
      const double z = data.X.col(j).dot(resid) / nn + col_ms[j] * bj + pull * pen.beta_tilde[j];
      const double bn = two_kink_prox(q[j], z, a, c, pen.beta_tilde[j]);
      if (bn != bj) {
        resid += data.X.col(j) * (bj - bn);
        beta[j] = bn;
      }
    }
    resid = data.y - data.X * beta;  // fresh residual: no drift across sweeps
    out.sweeps = sweep;
    out.objective_trace.push_back(resid.squaredNorm() / (2.0 * nn) + pen.value(beta));
    out.kkt = kkt_residual(beta, data, pen);
    if (out.kkt <= opts.tol) {
      out.converged = true;
      break;
    }
  }
  out.beta = std::move(beta);
  out.objective = out.objective_trace.back();
  return out;
}

FitResult fit_enet(const Dataset& data, double lambda, double rho, const SolverOptions& opts) {
  return fit(data, PenaltySpec::coupled_form(lambda, 1.0, rho, Vector::Zero(data.p())), opts);
}

FitResult fit_tlasso(const Dataset& data, const Vector& beta_tilde, double lambda, double alpha,
                     const SolverOptions& opts) {
  return fit(data, PenaltySpec::decoupled_form(lambda, alpha, 1.0, 0.0, beta_tilde), opts);
}

}  // namespace tenet
