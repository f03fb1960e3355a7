#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace tenet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Centered response and standardized predictors: sum(y) = 0 and, for every
// column, mean 0 and mean square 1 (divisor n, not n-1).
struct Dataset {
  Vector y;
  Matrix X;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }

  // largest deviation from the centering/scaling identities
  double standardization_error() const;
};

struct Standardization {
  double y_shift = 0.0;
  Vector x_shift;
  Vector x_scale;
};

struct StandardizedData {
  Dataset data;
  Standardization transform;
};

StandardizedData standardize(const Vector& y_raw, const Matrix& X_raw);

// center and scale columns only (no response involved)
Matrix standardize_columns(const Matrix& X_raw);

// undo the standardization: beta_raw[j] = beta[j] / x_scale[j], plus the
// intercept absorbed by the shifts
struct RawCoefficients {
  Vector beta;
  double intercept = 0.0;
};
RawCoefficients to_raw_scale(const Vector& beta, const Standardization& t);

enum class CovarianceKind { Identity, Equicorrelated, Toeplitz, DuplicatedBlock };

struct DesignSpec {
  int n = 0;
  int p = 0;
  CovarianceKind kind = CovarianceKind::Identity;
  double r = 0.0;      // correlation parameter; ignored for identity
  int block_size = 2;  // duplicated-block only: consecutive columns share r

  Matrix covariance() const;
  double gamma() const;  // smallest eigenvalue of the covariance
  double max_diag() const { return 1.0; }
};

// rows are independent draws from N(0, covariance); raw scale, not standardized
Matrix generate_design(const DesignSpec& spec, std::uint64_t seed);

// Every kind is sub-Gaussian with variance proxy sigma^2:
//   gaussian          proxy = variance
//   scaled rademacher +-sigma, Hoeffding on a bounded symmetric variable
//   uniform           on [-sigma*sqrt(3), sigma*sqrt(3)];
//                     E exp(tU) = sinh(ta)/(ta) <= exp(t^2 a^2/6), a^2/3 = sigma^2
enum class NoiseKind { Gaussian, ScaledRademacher, Uniform };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  double sigma = 1.0;

  double variance_proxy() const { return sigma * sigma; }
};

Vector generate_noise(const NoiseSpec& spec, int n, std::uint64_t seed);

struct TrueModel {
  Vector beta_star;
  std::vector<int> support;  // indices of the nonzero coordinates, ascending
  double sigma = 0.0;

  int s() const { return static_cast<int>(support.size()); }
  static TrueModel make(const Vector& beta_star, double sigma);
};

struct Response {
  Vector y;            // X beta + noise, centered
  double shift = 0.0;  // mean that was removed
};
Response generate_response(const Matrix& X, const Vector& beta_star, const Vector& noise);

enum class SourceKind { Exact, SparseShift, DenseGaussian };

struct SourceSpec {
  SourceKind kind = SourceKind::Exact;
  int k = 0;               // sparse shift: number of perturbed coordinates
  double magnitude = 0.0;  // sparse shift: amount added per coordinate
  double tau = 0.0;        // dense gaussian: perturbation scale
};

struct SourceEstimate {
  Vector beta_tilde;
  Vector delta;  // beta_tilde - beta_star

  Vector delta_alpha(double alpha) const { return delta - alpha * beta_tilde; }
};

SourceEstimate make_source(const Vector& beta_star, const SourceSpec& spec, std::uint64_t seed);

}  // namespace tenet
