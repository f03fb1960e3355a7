#pragma once

#include <cstdint>
#include <vector>

#include "tenet/model.hpp"

namespace tenet {

// Restricted set for the estimation-error direction v = beta_hat - beta_star:
//   (alpha*rho - c)|v_Sc|_1 + (1-alpha)*rho*|v - delta|_1
//     <= (alpha*rho + c)|v_S|_1 + (1-alpha)*rho*|delta|_1
//        + 2(1-rho)*|delta_alpha|_2*|v|_2
// with delta = beta_tilde - beta_star and delta_alpha = delta - alpha*beta_tilde.
struct ConeSpec {
  double alpha = 1.0;
  double rho = 1.0;
  double c = 0.5;
  Vector delta;
  Vector delta_alpha;
  std::vector<int> support;

  static ConeSpec make(double alpha, double rho, double c, const Vector& beta_star,
                       const Vector& beta_tilde, const std::vector<int>& support);
};

bool cone_contains(const Vector& v, const ConeSpec& spec);

// smallest eigenvalue of X'X/n, clipped at zero (the Gram is PSD; tiny
// negative values are roundoff)
double phi_lower(const Matrix& X);

// Smallest Rayleigh quotient v'(X'X/n)v / v'v over sampled cone members.
// Candidate families: Gaussian, S-sparse Gaussian, scaled delta, plus any
// caller-supplied vectors (typically observed estimation errors).
double phi_upper_estimate(const Matrix& X, const ConeSpec& spec, int n_samples,
                          std::uint64_t seed, const std::vector<Vector>& extra = {});

struct PhiBracket {
  double lower = 0.0;
  double upper = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};
PhiBracket phi_bracket(const Matrix& X, const ConeSpec& spec, int n_samples, std::uint64_t seed,
                       const std::vector<Vector>& extra = {});

// Two readings of the discriminant inside the transfer bound. ProofConsistent
// drops a stray alpha factor and is the only reading that reproduces the
// simplified delta = 0 bound; AsStated keeps the factor.
enum class DConvention { ProofConsistent, AsStated };

enum class BoundMethod { Tenet, Enet, Tlasso };

struct BoundIngredients {
  double lambda = 0.0;
  double alpha = 1.0;
  double rho = 1.0;
  double c = 0.5;
  double s = 0.0;              // support size
  double delta_l1 = 0.0;       // |beta_tilde - beta_star|_1
  double delta_alpha_l2 = 0.0; // |delta - alpha*beta_tilde|_2
  double beta_star_l2 = 0.0;
  int n = 0;
  int p = 0;
  double sigma = 0.0;
};

struct BoundReport {
  BoundMethod method = BoundMethod::Tenet;
  double u = 0.0;    // estimation error bound (l2)
  double d = 0.0;    // discriminant under the square root (0 where unused)
  double phi = 0.0;
  double probability = 0.0;
  DConvention convention = DConvention::ProofConsistent;
  BoundIngredients ingredients;
};

BoundReport bound_tenet(const BoundIngredients& ing, double phi,
                        DConvention convention = DConvention::ProofConsistent);
BoundReport bound_enet(const BoundIngredients& ing, double phi);
BoundReport bound_tlasso(const BoundIngredients& ing, double phi);

// 1 - exp(-n c^2 lambda^2 / (2 sigma^2) + ln(2p)), clipped to [0, 1];
// sigma = 0 returns 1 when lambda*c > 0 (noiseless: the event is sure)
double success_probability(int n, double c, double lambda, double sigma, int p);

// delta = 0 comparisons; both overwrite delta_alpha_l2 with
// alpha*beta_star_l2, the only value consistent with delta = 0
struct Prop1Result {
  double u_tenet = 0.0;
  double u_enet = 0.0;
  bool holds = false;  // u_enet >= u_tenet up to 1e-12 relative slack
};
Prop1Result compare_prop1(const BoundIngredients& ing, double phi_tenet, double phi_enet);

struct Prop2Result {
  double u_tenet = 0.0;
  double u_tlasso = 0.0;
  bool condition_holds = false;   // sqrt(s)/2 >= |beta*_S|_2 and phi_tenet + 2*lambda*(1-rho) >= phi_tlasso
  bool conclusion_holds = false;  // u_tlasso >= u_tenet up to 1e-12 relative slack
};
Prop2Result compare_prop2(const BoundIngredients& ing, double phi_tenet, double phi_tlasso);

// sample size that makes the restricted-eigenvalue conclusion hold with the
// stated universal constants: ((72 M)^2 / gamma) * F^2 * ln p with
// F = (2*alpha*rho*sqrt(s) + 2*(1-rho)*|delta_alpha|_2) / (2*alpha*rho - c - rho)
double required_sample_size(double alpha, double rho, double c, double s, double delta_alpha_l2,
                            double gamma, double big_m, int p);

struct GreCheck {
  double min_quotient = 0.0;
  double threshold = 0.0;  // gamma / 64
  bool holds = false;
  int members = 0;
};
GreCheck check_gre_conclusion(const Matrix& X, const ConeSpec& spec, double gamma, int n_samples,
                              std::uint64_t seed);

}  // namespace tenet
