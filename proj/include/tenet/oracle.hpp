#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "tenet/model.hpp"
#include "tenet/solver.hpp"

namespace tenet {

// Bracket the minimizer of a strictly convex univariate function by iterated
// grid refinement: sample the bracket on a uniform grid, keep the neighbors
// of the best point, repeat until the bracket is narrower than width. Same
// bracket a single dense grid would produce, with a bounded evaluation count.
struct Bracket {
  double lo, hi, best;
};
Bracket refine_bracket(const std::function<double(double)>& f, double lo, double hi, double width);

// Search-based check on two_kink_prox; shares no code with its case analysis.
// Bisects on the one-sided derivatives (formed term by term from the
// objective) down to 1e-12, starting from an interval that provably contains
// the minimizer. Value-only grid search cannot resolve flat objectives past
// sqrt(eps |g| / q); refine_bracket serves as the coarse cross-check.
double prox_oracle(double q, double z, double a, double c, double t);

struct OracleResult {
  Vector beta;
  double objective = 0.0;
  std::string method = "subgradient+polish";
};

// Small problems only (p <= 3): subgradient descent with diminishing steps
// from 50 random starts plus beta_tilde and zero, each polished by
// coordinate sweeps that minimize via prox_oracle; returns the best.
OracleResult full_oracle(const Dataset& data, const PenaltySpec& pen,
                         std::uint64_t seed = 20260817ull);

}  // namespace tenet
