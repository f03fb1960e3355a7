#pragma once

#include <stdexcept>
#include <string>

namespace tenet {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroVarianceColumn : std::invalid_argument {
  int column;
  explicit ZeroVarianceColumn(int j)
      : std::invalid_argument("column " + std::to_string(j) + " has zero variance"), column(j) {}
};

struct NonPsdCovariance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonpositiveCurvature : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// zero curvature coordinate with a penalty that cannot repair it
struct DegenerateQ : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateDenominator : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConeMarginViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoConeMemberSampled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonzeroDelta : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateParameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WrongPenaltyShape : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tenet
