#include "tenet/grouping.hpp"

#include <algorithm>
#include <cmath>

#include "tenet/errors.hpp"

namespace tenet {

namespace {

constexpr double kKinkMargin = 1e-12;

void check_pair(Eigen::Index p, int j, int k) {
  if (j < 0 || j >= p || k < 0 || k >= p) throw IndexOutOfRange("column index out of range");
  if (j == k) throw std::invalid_argument("need two distinct columns");
}

bool off_kinks(const Vector& beta_hat, const Vector& beta_tilde, int j, int k) {
  return std::abs(beta_hat[j]) > kKinkMargin && std::abs(beta_hat[k]) > kKinkMargin &&
         std::abs(beta_hat[j] - beta_tilde[j]) > kKinkMargin &&
         std::abs(beta_hat[k] - beta_tilde[k]) > kKinkMargin;
}

}  // namespace

double column_correlation(const Matrix& X, int j, int k) {
  check_pair(X.cols(), j, k);
  return X.col(j).dot(X.col(k)) / static_cast<double>(X.rows());
}

bool grouping_preconditions(const Vector& beta_hat, const Vector& beta_tilde, int j, int k) {
  check_pair(beta_hat.size(), j, k);
  if (beta_tilde.size() != beta_hat.size()) throw DimensionMismatch("source estimate length mismatch");
  return beta_hat[j] * beta_hat[k] > 0.0 &&
         (beta_hat[j] - beta_tilde[j]) * (beta_hat[k] - beta_tilde[k]) > 0.0;
}

GroupingReport grouping_bound(const Dataset& data, const PenaltySpec& pen, int j, int k,
                              const Vector& beta_hat) {
  if (!pen.coupled) throw WrongPenaltyShape("difference bound expects the coupled penalty");
  if (pen.lambda == 0.0 || pen.rho1 == 1.0)
    throw DegenerateParameters("need lambda > 0 and rho < 1");
  check_pair(data.p(), j, k);
  if (beta_hat.size() != data.p() || pen.beta_tilde.size() != data.p())
    throw DimensionMismatch("coefficient length mismatch");

  const double n = static_cast<double>(data.n());
  const double one_m_rho = 1.0 - pen.rho1;
  const double z2 = (data.y.squaredNorm() +
                     2.0 * n * pen.lambda * (1.0 - pen.alpha) * pen.rho1 * pen.beta_tilde.lpNorm<1>() +
                     2.0 * n * pen.lambda * (1.0 - pen.alpha) * one_m_rho * pen.beta_tilde.squaredNorm()) /
                    (2.0 * n * pen.lambda * pen.lambda * one_m_rho * one_m_rho);

  GroupingReport rep;
  rep.j = j;
  rep.k = k;
  rep.r_jk = column_correlation(data.X, j, k);
  rep.z = std::sqrt(z2);
  rep.bound = rep.z * std::sqrt(std::max(0.0, 1.0 - rep.r_jk)) +
              (1.0 - pen.alpha) * std::abs(pen.beta_tilde[j] - pen.beta_tilde[k]);
  rep.observed = std::abs(beta_hat[j] - beta_hat[k]);
  rep.preconditions_met = grouping_preconditions(beta_hat, pen.beta_tilde, j, k) &&
                          off_kinks(beta_hat, pen.beta_tilde, j, k);
  return rep;
}

GroupingReport grouping_bound_decoupled(const Dataset& data, const PenaltySpec& pen, int j, int k,
                                     const Vector& beta_hat) {
  if (pen.coupled || pen.rho2 != 0.0)
    throw WrongPenaltyShape("variant bound expects rho2 = 0");
  if (pen.lambda == 0.0 || pen.rho1 == 1.0 || pen.alpha == 0.0)
    throw DegenerateParameters("need lambda > 0, rho1 < 1 and alpha > 0");
  check_pair(data.p(), j, k);
  if (beta_hat.size() != data.p() || pen.beta_tilde.size() != data.p())
    throw DimensionMismatch("coefficient length mismatch");

  const double n = static_cast<double>(data.n());
  const double one_m_rho = 1.0 - pen.rho1;
  const double z2 = (data.y.squaredNorm() +
                     2.0 * n * pen.lambda * (1.0 - pen.alpha) * pen.rho1 * pen.beta_tilde.lpNorm<1>()) /
                    (2.0 * n * pen.alpha * pen.alpha * pen.lambda * pen.lambda * one_m_rho * one_m_rho);

  GroupingReport rep;
  rep.j = j;
  rep.k = k;
  rep.r_jk = column_correlation(data.X, j, k);
  rep.z = std::sqrt(z2);
  rep.bound = rep.z * std::sqrt(std::max(0.0, 1.0 - rep.r_jk));
  rep.observed = std::abs(beta_hat[j] - beta_hat[k]);
  rep.preconditions_met = grouping_preconditions(beta_hat, pen.beta_tilde, j, k) &&
                          off_kinks(beta_hat, pen.beta_tilde, j, k);
  return rep;
}

double source_grouping_bound(const Dataset& source, double lambda, double rho, int j, int k) {
  if (!(lambda > 0.0) || !(rho < 1.0)) throw DegenerateParameters("need lambda > 0 and rho < 1");
  check_pair(source.p(), j, k);
  const double m = static_cast<double>(source.n());
  const double r = column_correlation(source.X, j, k);
  return source.y.norm() * std::sqrt(2.0 * m * std::max(0.0, 1.0 - r)) /
         (2.0 * m * lambda * (1.0 - rho));
}

}  // namespace tenet
