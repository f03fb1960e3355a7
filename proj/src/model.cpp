#include "tenet/model.hpp"

#include <algorithm>
#include <cmath>

#include "tenet/errors.hpp"
#include "tenet/rng.hpp"

namespace tenet {

double Dataset::standardization_error() const {
  const double nn = static_cast<double>(n());
  double err = std::abs(y.sum()) / nn;
  for (Eigen::Index j = 0; j < p(); ++j) {
    err = std::max(err, std::abs(X.col(j).sum()) / nn);
    err = std::max(err, std::abs(X.col(j).squaredNorm() / nn - 1.0));
  }
  return err;
}

StandardizedData standardize(const Vector& y_raw, const Matrix& X_raw) {
  const Eigen::Index n = X_raw.rows();
  const Eigen::Index p = X_raw.cols();
  if (y_raw.size() != n) throw DimensionMismatch("y and X row counts differ");
  if (n < 2) throw DimensionMismatch("need at least two observations");

  StandardizedData out;
  out.transform.y_shift = y_raw.mean();
  out.transform.x_shift.resize(p);
  out.transform.x_scale.resize(p);
  out.data.y = y_raw.array() - out.transform.y_shift;
  out.data.X.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double m = X_raw.col(j).mean();
    Vector centered = X_raw.col(j).array() - m;
    const double scale = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    if (scale == 0.0) throw ZeroVarianceColumn(static_cast<int>(j));
    out.transform.x_shift[j] = m;
    out.transform.x_scale[j] = scale;
    out.data.X.col(j) = centered / scale;
  }
  return out;
}

Matrix standardize_columns(const Matrix& X_raw) {
  const Eigen::Index n = X_raw.rows();
  if (n < 2) throw DimensionMismatch("need at least two observations");
  Matrix X(n, X_raw.cols());
  for (Eigen::Index j = 0; j < X_raw.cols(); ++j) {
    Vector centered = X_raw.col(j).array() - X_raw.col(j).mean();
    const double scale = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    if (scale == 0.0) throw ZeroVarianceColumn(static_cast<int>(j));
    X.col(j) = centered / scale;
  }
  return X;
}

RawCoefficients to_raw_scale(const Vector& beta, const Standardization& t) {
  if (beta.size() != t.x_scale.size()) throw DimensionMismatch("coefficient length mismatch");
  RawCoefficients out;
  out.beta = beta.cwiseQuotient(t.x_scale);
  out.intercept = t.y_shift - t.x_shift.dot(out.beta);
  return out;
}

Matrix DesignSpec::covariance() const {
  if (n < 1 || p < 1) throw DimensionMismatch("design dimensions must be positive");
  Matrix sigma = Matrix::Identity(p, p);
  switch (kind) {
    case CovarianceKind::Identity:
      break;
    case CovarianceKind::Equicorrelated:
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
          if (j != k) sigma(j, k) = r;
      break;
    case CovarianceKind::Toeplitz:
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
          if (j != k) sigma(j, k) = std::pow(r, std::abs(j - k));
      break;
    case CovarianceKind::DuplicatedBlock: {
      if (block_size < 1) throw DimensionMismatch("block size must be positive");
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
          if (j != k && j / block_size == k / block_size) sigma(j, k) = r;
      break;
    }
  }
  return sigma;
}

double DesignSpec::gamma() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Matrix generate_design(const DesignSpec& spec, std::uint64_t seed) {
  const Matrix sigma = spec.covariance();
  Rng rng(seed);
  Matrix Z(spec.n, spec.p);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.p; ++j) Z(i, j) = rng.normal();
  if (spec.kind == CovarianceKind::Identity) return Z;

  // eigendecomposition factor tolerates singular covariances (r = 1 blocks)
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  const Vector ev = eig.eigenvalues();
  if (ev.minCoeff() < -1e-10 * std::max(1.0, ev.maxCoeff()))
    throw NonPsdCovariance("covariance has a negative eigenvalue");
  Matrix root = eig.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return Z * root.transpose();
}

Vector generate_noise(const NoiseSpec& spec, int n, std::uint64_t seed) {
  if (n < 0) throw DimensionMismatch("negative sample size");
  if (!(spec.sigma >= 0.0)) throw std::invalid_argument("noise scale must be nonnegative");
  Rng rng(seed);
  Vector eps(n);
  switch (spec.kind) {
    case NoiseKind::Gaussian:
      for (int i = 0; i < n; ++i) eps[i] = spec.sigma * rng.normal();
      break;
    case NoiseKind::ScaledRademacher:
      for (int i = 0; i < n; ++i) eps[i] = spec.sigma * rng.rademacher();
      break;
    case NoiseKind::Uniform: {
      const double half_width = spec.sigma * std::sqrt(3.0);
      for (int i = 0; i < n; ++i) eps[i] = rng.uniform(-half_width, half_width);
      break;
    }
  }
  return eps;
}

TrueModel TrueModel::make(const Vector& beta_star, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise scale must be nonnegative");
  TrueModel m;
  m.beta_star = beta_star;
  m.sigma = sigma;
  for (Eigen::Index j = 0; j < beta_star.size(); ++j)
    if (beta_star[j] != 0.0) m.support.push_back(static_cast<int>(j));
  return m;
}

Response generate_response(const Matrix& X, const Vector& beta_star, const Vector& noise) {
  if (beta_star.size() != X.cols()) throw DimensionMismatch("coefficient length mismatch");
  if (noise.size() != X.rows()) throw DimensionMismatch("noise length mismatch");
  Response out;
  Vector y = X * beta_star + noise;
  out.shift = y.mean();
  out.y = y.array() - out.shift;
  return out;
}

SourceEstimate make_source(const Vector& beta_star, const SourceSpec& spec, std::uint64_t seed) {
  const Eigen::Index p = beta_star.size();
  SourceEstimate out;
  out.beta_tilde = beta_star;
  Rng rng(seed);
  switch (spec.kind) {
    case SourceKind::Exact:
      break;
    case SourceKind::SparseShift: {
      if (spec.k < 0 || spec.k > p) throw DimensionMismatch("shift count out of range");
      std::vector<int> pool(p);
      for (Eigen::Index j = 0; j < p; ++j) pool[j] = static_cast<int>(j);
      for (int i = 0; i < spec.k; ++i) {
        const auto pick = static_cast<std::size_t>(rng.below(pool.size() - i)) + i;
        std::swap(pool[i], pool[pick]);
        out.beta_tilde[pool[i]] += spec.magnitude;
      }
      break;
    }
    case SourceKind::DenseGaussian:
      if (!(spec.tau >= 0.0)) throw std::invalid_argument("perturbation scale must be nonnegative");
      for (Eigen::Index j = 0; j < p; ++j) out.beta_tilde[j] += spec.tau * rng.normal();
      break;
  }
  out.delta = out.beta_tilde - beta_star;
  return out;
}

}  // namespace tenet
