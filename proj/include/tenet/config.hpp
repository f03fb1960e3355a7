#pragma once

#include <string>
#include <vector>

#include "tenet/harness.hpp"

namespace tenet {

// simulation request: which experiments to run, on what configuration
struct SimulateSpec {
  ExperimentConfig config;
  std::vector<std::string> experiments{"theorem1"};
  int augmented_points = 1000;
  int inclusion_samples = 10000;
  Prop4Config prop4;
};

SimulateSpec parse_simulate_spec(const std::string& json_text);
GroupingConfig parse_grouping_config(const std::string& json_text);

struct SimulateResult {
  Theorem1Result theorem1;
  bool has_theorem1 = false;
  PhiChoice phi_choice = PhiChoice::Lower;  // labels theorem1 output; the
                                            // certificate only covers Lower
  double cone_fraction = 0.0;
  bool has_cone = false;
  double augmented_gap = 0.0;
  bool has_augmented = false;
  Prop1Summary prop1;
  bool has_prop1 = false;
  Prop2Summary prop2;
  bool has_prop2 = false;
  Prop4Summary prop4;
  bool has_prop4 = false;
  bool pass = true;
};

SimulateResult run_simulation(const SimulateSpec& spec);

// deterministic serializations; running the same spec twice must produce
// byte-identical strings
std::string simulate_summary_json(const SimulateResult& result);
std::string grouping_summary_json(const GroupingExperimentResult& result);

}  // namespace tenet
