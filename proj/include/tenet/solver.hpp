#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tenet/model.hpp"

namespace tenet {

// Penalty
//   lambda * ( alpha   * (rho1*|b|_1      + (1-rho1)*|b|_2^2)
//            + (1-alpha)* (rho1*|b - bt|_1 + rho2   *|b - bt|_2^2) )
// The coupled form ties rho2 = 1 - rho1. The decoupled form leaves rho2 free;
// rho2 = 0 drops the quadratic pull toward the source estimate bt.
struct PenaltySpec {
  double lambda = 0.0;
  double alpha = 1.0;
  double rho1 = 1.0;
  double rho2 = 0.0;
  bool coupled = false;
  Vector beta_tilde;

  static PenaltySpec coupled_form(double lambda, double alpha, double rho, Vector beta_tilde);
  static PenaltySpec decoupled_form(double lambda, double alpha, double rho1, double rho2,
                                    Vector beta_tilde);

  // per-term weights
  double l1_own() const { return lambda * alpha * rho1; }
  double l1_transfer() const { return lambda * (1.0 - alpha) * rho1; }
  double l2_own() const { return lambda * alpha * (1.0 - rho1); }
  double l2_transfer() const { return lambda * (1.0 - alpha) * rho2; }
  double quad() const { return l2_own() + l2_transfer(); }

  double value(const Vector& beta) const;
};

double objective(const Vector& beta, const Dataset& data, const PenaltySpec& pen);

// exact minimizer of (q/2) b^2 - z b + a|b| + c|b - t| over b, q > 0
double two_kink_prox(double q, double z, double a, double c, double t);

enum class SweepOrder { Cyclic, Randomized };

struct SolverOptions {
  double tol = 1e-8;  // convergence: KKT residual at most tol
  int max_sweeps = 10000;
  SweepOrder order = SweepOrder::Cyclic;
  std::uint64_t seed = 0;  // randomized order only
  std::optional<Vector> warm_start;
};

struct FitResult {
  Vector beta;
  double objective = 0.0;
  double kkt = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // value after each sweep
};

// distance from zero to the subdifferential, maximized over coordinates;
// kinks are detected by exact equality (the solver lands on them exactly)
double kkt_residual(const Vector& beta, const Dataset& data, const PenaltySpec& pen);

// Cyclic (or seeded-random-order) coordinate descent with a maintained
// residual and the exact two-kink update. Without strict convexity (no
// quadratic term) the default warm start is beta_tilde, which fixes the
// selected minimizer. lambda = 0 with a zero-norm column falls back to
// fixed-step gradient descent on the least-squares loss.
FitResult fit(const Dataset& data, const PenaltySpec& pen, const SolverOptions& opts = {});

// alpha = 1 with a zero source estimate
FitResult fit_enet(const Dataset& data, double lambda, double rho, const SolverOptions& opts = {});

// rho1 = 1, rho2 = 0: pure l1 in both the own and the transfer term
FitResult fit_tlasso(const Dataset& data, const Vector& beta_tilde, double lambda, double alpha,
                     const SolverOptions& opts = {});

}  // namespace tenet
