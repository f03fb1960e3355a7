#pragma once

#include "tenet/model.hpp"
#include "tenet/solver.hpp"

namespace tenet {

// X_j . X_k / n; equals the sample correlation when the columns are standardized
double column_correlation(const Matrix& X, int j, int k);

// the difference bound applies when the pair shares a sign and both
// coordinates sit strictly off their kinks
bool grouping_preconditions(const Vector& beta_hat, const Vector& beta_tilde, int j, int k);

struct GroupingReport {
  int j = 0;
  int k = 0;
  double r_jk = 0.0;
  double z = 0.0;
  double bound = 0.0;
  double observed = 0.0;
  bool preconditions_met = false;
};

// Coupled-penalty fit: |bhat_j - bhat_k| <= Z sqrt(1 - r_jk) + (1-alpha)|bt_j - bt_k|
// with Z^2 = (|y|^2 + 2 n lambda (1-alpha) rho |bt|_1 + 2 n lambda (1-alpha)(1-rho) |bt|_2^2)
//            / (2 n lambda^2 (1-rho)^2).
// Estimates within 1e-12 of a kink are reported as preconditions_met = false.
GroupingReport grouping_bound(const Dataset& data, const PenaltySpec& pen, int j, int k,
                              const Vector& beta_hat);

// rho2 = 0 fit: the quadratic pull toward the source is gone, so the bound
// loses the source-difference term and gains 1/alpha:
// Z^2 = (|y|^2 + 2 n lambda (1-alpha) rho1 |bt|_1) / (2 n alpha^2 lambda^2 (1-rho1)^2)
GroupingReport grouping_bound_decoupled(const Dataset& data, const PenaltySpec& pen, int j, int k,
                                     const Vector& beta_hat);

// bound on |bt_j - bt_k| for a plain elastic-net source fit:
// |y'|_2 sqrt(2 m (1 - r_jk)) / (2 m lambda (1 - rho))
double source_grouping_bound(const Dataset& source, double lambda, double rho, int j, int k);

}  // namespace tenet
