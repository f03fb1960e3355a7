#include "tenet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "tenet/errors.hpp"
#include "tenet/rng.hpp"

namespace tenet {

namespace {

void check_support(const std::vector<int>& support, Eigen::Index p) {
  for (int j : support)
    if (j < 0 || j >= p) throw IndexOutOfRange("support index out of range");
}

constexpr double kRelSlack = 1e-12;  // float guard on mathematically certain comparisons

bool geq_with_slack(double lhs, double rhs) {
  return lhs >= rhs - kRelSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

ConeSpec ConeSpec::make(double alpha, double rho, double c, const Vector& beta_star,
                        const Vector& beta_tilde, const std::vector<int>& support) {
  if (beta_star.size() != beta_tilde.size()) throw DimensionMismatch("coefficient length mismatch");
  check_support(support, beta_star.size());
  ConeSpec spec;
  spec.alpha = alpha;
  spec.rho = rho;
  spec.c = c;
  spec.delta = beta_tilde - beta_star;
  spec.delta_alpha = spec.delta - alpha * beta_tilde;
  spec.support = support;
  return spec;
}

bool cone_contains(const Vector& v, const ConeSpec& spec) {
  const Eigen::Index p = v.size();
  if (spec.delta.size() != p || spec.delta_alpha.size() != p)
    throw DimensionMismatch("cone dimension mismatch");
  check_support(spec.support, p);

  std::vector<bool> on_support(p, false);
  for (int j : spec.support) on_support[j] = true;
  double v_s = 0.0, v_sc = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) (on_support[j] ? v_s : v_sc) += std::abs(v[j]);

  const double lhs = (spec.alpha * spec.rho - spec.c) * v_sc +
                     (1.0 - spec.alpha) * spec.rho * (v - spec.delta).lpNorm<1>();
  const double rhs = (spec.alpha * spec.rho + spec.c) * v_s +
                     (1.0 - spec.alpha) * spec.rho * spec.delta.lpNorm<1>() +
                     2.0 * (1.0 - spec.rho) * spec.delta_alpha.norm() * v.norm();
  return lhs <= rhs;
}

double phi_lower(const Matrix& X) {
  const double n = static_cast<double>(X.rows());
  const Matrix gram = X.transpose() * X / n;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().minCoeff());
}

namespace {

// smallest Rayleigh quotient over sampled cone members; count reported
std::pair<double, int> min_cone_quotient(const Matrix& X, const ConeSpec& spec, int n_samples,
                                         std::uint64_t seed, const std::vector<Vector>& extra) {
  const Eigen::Index p = X.cols();
  const double n = static_cast<double>(X.rows());
  check_support(spec.support, p);
  Rng rng(seed);

  double min_q = std::numeric_limits<double>::infinity();
  int members = 0;
  const auto consider = [&](const Vector& v) {
    const double norm2 = v.squaredNorm();
    if (norm2 == 0.0 || !cone_contains(v, spec)) return;
    ++members;
    min_q = std::min(min_q, (X * v).squaredNorm() / (n * norm2));
  };

  for (int i = 0; i < n_samples; ++i) {
    Vector v = Vector::Zero(p);
    switch (i % 3) {
      case 0:  // dense gaussian
        for (Eigen::Index j = 0; j < p; ++j) v[j] = rng.normal();
        break;
      case 1:  // gaussian on the support
        for (int j : spec.support) v[j] = rng.normal();
        break;
      default:  // scaled copy of delta
        v = rng.normal() * spec.delta;
        break;
    }
    consider(v);
  }
  for (const Vector& v : extra) {
    if (v.size() != p) throw DimensionMismatch("candidate length mismatch");
    consider(v);
  }
  if (members == 0) throw NoConeMemberSampled("no sampled vector fell in the cone");
  return {min_q, members};
}

}  // namespace

double phi_upper_estimate(const Matrix& X, const ConeSpec& spec, int n_samples,
                          std::uint64_t seed, const std::vector<Vector>& extra) {
  return min_cone_quotient(X, spec, n_samples, seed, extra).first;
}

PhiBracket phi_bracket(const Matrix& X, const ConeSpec& spec, int n_samples, std::uint64_t seed,
                       const std::vector<Vector>& extra) {
  PhiBracket out;
  out.lower = phi_lower(X);
  out.upper = phi_upper_estimate(X, spec, n_samples, seed, extra);
  out.samples = n_samples;
  out.seed = seed;
  return out;
}

double success_probability(int n, double c, double lambda, double sigma, int p) {
  if (n < 1 || p < 1) throw DimensionMismatch("sample size and dimension must be positive");
  if (!(c >= 0.0) || !(lambda >= 0.0) || !(sigma >= 0.0))
    throw std::invalid_argument("c, lambda, sigma must be nonnegative");
  if (sigma == 0.0) return lambda * c > 0.0 ? 1.0 : 0.0;
  const double exponent =
      -static_cast<double>(n) * c * c * lambda * lambda / (2.0 * sigma * sigma) +
      std::log(2.0 * static_cast<double>(p));
  return std::clamp(1.0 - std::exp(exponent), 0.0, 1.0);
}

BoundReport bound_tenet(const BoundIngredients& ing, double phi, DConvention convention) {
  const double den = 2.0 * ing.lambda * (1.0 - ing.rho) + phi;
  if (!(den > 0.0)) throw DegenerateDenominator("2*lambda*(1-rho) + phi must be positive");
  const double head = (ing.alpha * ing.rho + ing.c) * ing.lambda * std::sqrt(ing.s);
  const double tail = 2.0 * ing.lambda * (1.0 - ing.rho) * ing.delta_alpha_l2;
  const double tail_in_d = convention == DConvention::AsStated ? ing.alpha * tail : tail;
  const double d = (head + tail_in_d) * (head + tail_in_d) +
                   2.0 * ing.lambda * (1.0 - ing.alpha) * ing.rho * ing.delta_l1 * den;

  BoundReport rep;
  rep.method = BoundMethod::Tenet;
  rep.u = (head + tail + std::sqrt(d)) / den;
  rep.d = d;
  rep.phi = phi;
  rep.probability = success_probability(ing.n, ing.c, ing.lambda, ing.sigma, ing.p);
  rep.convention = convention;
  rep.ingredients = ing;
  return rep;
}

BoundReport bound_enet(const BoundIngredients& ing, double phi) {
  const double den = 2.0 * ing.lambda * (1.0 - ing.rho) + phi;
  if (!(den > 0.0)) throw DegenerateDenominator("2*lambda*(1-rho) + phi must be positive");
  BoundReport rep;
  rep.method = BoundMethod::Enet;
  rep.u = (2.0 * (ing.rho + ing.c) * ing.lambda * std::sqrt(ing.s) +
           4.0 * ing.lambda * (1.0 - ing.rho) * ing.beta_star_l2) /
          den;
  rep.phi = phi;
  rep.probability = success_probability(ing.n, ing.c, ing.lambda, ing.sigma, ing.p);
  rep.ingredients = ing;
  return rep;
}

BoundReport bound_tlasso(const BoundIngredients& ing, double phi) {
  if (!(phi > 0.0)) throw DegenerateDenominator("phi must be positive");
  const double head = (ing.alpha + ing.c) * ing.lambda * std::sqrt(ing.s);
  const double d = head * head + 2.0 * ing.lambda * (1.0 - ing.alpha) * ing.delta_l1 * phi;
  BoundReport rep;
  rep.method = BoundMethod::Tlasso;
  rep.u = (head + std::sqrt(d)) / phi;
  rep.d = d;
  rep.phi = phi;
  rep.probability = success_probability(ing.n, ing.c, ing.lambda, ing.sigma, ing.p);
  rep.ingredients = ing;
  return rep;
}

Prop1Result compare_prop1(const BoundIngredients& ing, double phi_tenet, double phi_enet) {
  if (ing.delta_l1 != 0.0) throw NonzeroDelta("comparison requires beta_tilde = beta_star");
  BoundIngredients at_zero = ing;
  at_zero.delta_alpha_l2 = ing.alpha * ing.beta_star_l2;
  Prop1Result out;
  out.u_tenet = bound_tenet(at_zero, phi_tenet, DConvention::ProofConsistent).u;
  out.u_enet = bound_enet(at_zero, phi_enet).u;
  out.holds = geq_with_slack(out.u_enet, out.u_tenet);
  return out;
}

Prop2Result compare_prop2(const BoundIngredients& ing, double phi_tenet, double phi_tlasso) {
  if (ing.delta_l1 != 0.0) throw NonzeroDelta("comparison requires beta_tilde = beta_star");
  BoundIngredients at_zero = ing;
  at_zero.delta_alpha_l2 = ing.alpha * ing.beta_star_l2;
  Prop2Result out;
  out.u_tenet = bound_tenet(at_zero, phi_tenet, DConvention::ProofConsistent).u;
  out.u_tlasso = bound_tlasso(at_zero, phi_tlasso).u;
  out.condition_holds =
      geq_with_slack(std::sqrt(ing.s) / 2.0, ing.beta_star_l2) &&
      geq_with_slack(phi_tenet + 2.0 * ing.lambda * (1.0 - ing.rho), phi_tlasso);
  out.conclusion_holds = geq_with_slack(out.u_tlasso, out.u_tenet);
  return out;
}

double required_sample_size(double alpha, double rho, double c, double s, double delta_alpha_l2,
                            double gamma, double big_m, int p) {
  if (p < 1) throw DimensionMismatch("dimension must be positive");
  if (!(gamma > 0.0) || !(big_m > 0.0))
    throw std::invalid_argument("gamma and M must be positive");
  const double margin = 2.0 * alpha * rho - c - rho;
  if (!(margin > 0.0)) throw ConeMarginViolated("2*alpha*rho - c - rho must be positive");
  const double f = (2.0 * alpha * rho * std::sqrt(s) + 2.0 * (1.0 - rho) * delta_alpha_l2) / margin;
  const double m72 = 72.0 * big_m;
  return m72 * m72 / gamma * f * f * std::log(static_cast<double>(p));
}

GreCheck check_gre_conclusion(const Matrix& X, const ConeSpec& spec, double gamma, int n_samples,
                              std::uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  GreCheck out;
  const auto [min_q, members] = min_cone_quotient(X, spec, n_samples, seed, {});
  out.min_quotient = min_q;
  out.members = members;
  out.threshold = gamma / 64.0;
  out.holds = min_q > out.threshold;
  return out;
}

}  // namespace tenet
