#include "tenet/config.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "tenet/errors.hpp"

namespace tenet {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

CovarianceKind covariance_kind(const std::string& name) {
  if (name == "identity") return CovarianceKind::Identity;
  if (name == "equicorrelated") return CovarianceKind::Equicorrelated;
  if (name == "toeplitz") return CovarianceKind::Toeplitz;
  if (name == "duplicated-block") return CovarianceKind::DuplicatedBlock;
  throw ConfigError("unknown covariance kind '" + name + "'");
}

NoiseKind noise_kind(const std::string& name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "scaled-rademacher") return NoiseKind::ScaledRademacher;
  if (name == "uniform") return NoiseKind::Uniform;
  throw ConfigError("unknown noise kind '" + name + "'");
}

SourceKind source_kind(const std::string& name) {
  if (name == "exact") return SourceKind::Exact;
  if (name == "sparse-shift") return SourceKind::SparseShift;
  if (name == "dense-gaussian") return SourceKind::DenseGaussian;
  throw ConfigError("unknown source kind '" + name + "'");
}

// scalar or array, so configs can sweep or pin a parameter with the same key
std::vector<double> number_list(const json& j, const char* key,
                                const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  auto values = v.get<std::vector<double>>();
  if (values.empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
  return values;
}

NoiseSpec parse_noise(const json& j) {
  NoiseSpec spec;
  if (j.contains("kind")) spec.kind = noise_kind(j.at("kind").get<std::string>());
  spec.sigma = j.value("sigma", spec.sigma);
  return spec;
}

Scenario parse_scenario(const json& j) {
  Scenario sc;
  sc.n = j.at("n").get<int>();
  sc.p = j.at("p").get<int>();
  sc.s = j.value("s", sc.s);
  sc.beta_value = j.value("beta_value", sc.beta_value);
  if (j.contains("support")) sc.support = j.at("support").get<std::vector<int>>();
  if (j.contains("beta_values")) sc.beta_values = j.at("beta_values").get<std::vector<double>>();
  if (j.contains("covariance")) {
    const json& c = j.at("covariance");
    sc.covariance = covariance_kind(c.at("kind").get<std::string>());
    sc.r = c.value("r", sc.r);
    sc.block_size = c.value("block_size", sc.block_size);
  }
  if (j.contains("noise")) sc.noise = parse_noise(j.at("noise"));
  if (j.contains("source")) {
    const json& s = j.at("source");
    if (s.contains("kind")) sc.source.kind = source_kind(s.at("kind").get<std::string>());
    sc.source.k = s.value("k", sc.source.k);
    sc.source.magnitude = s.value("magnitude", sc.source.magnitude);
    sc.source.tau = s.value("tau", sc.source.tau);
  }
  return sc;
}

SolverOptions parse_solver(const json& j, const SolverOptions& base) {
  SolverOptions opts = base;
  opts.tol = j.value("tol", opts.tol);
  opts.max_sweeps = j.value("max_sweeps", opts.max_sweeps);
  if (j.contains("order")) {
    std::string order = j.at("order").get<std::string>();
    if (order == "cyclic")
      opts.order = SweepOrder::Cyclic;
    else if (order == "randomized")
      opts.order = SweepOrder::Randomized;
    else
      throw ConfigError("unknown sweep order '" + order + "'");
  }
  opts.seed = j.value("seed", opts.seed);
  return opts;
}

ExperimentConfig parse_experiment(const json& j) {
  ExperimentConfig config;
  config.scenario = parse_scenario(j.at("scenario"));
  config.lambdas = number_list(j, "lambda", config.lambdas);
  config.alphas = number_list(j, "alpha", config.alphas);
  config.rhos = number_list(j, "rho", config.rhos);
  config.c = j.value("c", config.c);
  config.replications = j.value("replications", config.replications);
  config.seed = j.value("seed", config.seed);
  if (j.contains("solver")) config.solver = parse_solver(j.at("solver"), config.solver);
  if (j.contains("convention")) {
    std::string name = j.at("convention").get<std::string>();
    if (name == "proof-consistent")
      config.convention = DConvention::ProofConsistent;
    else if (name == "as-stated")
      config.convention = DConvention::AsStated;
    else
      throw ConfigError("unknown bound convention '" + name + "'");
  }
  if (j.contains("phi")) {
    std::string name = j.at("phi").get<std::string>();
    if (name == "lower")
      config.phi_choice = PhiChoice::Lower;
    else if (name == "upper-estimate")
      config.phi_choice = PhiChoice::UpperEstimate;
    else
      throw ConfigError("unknown phi choice '" + name + "'");
  }
  config.phi_samples = j.value("phi_samples", config.phi_samples);
  return config;
}

Prop4Config parse_prop4(const json& j, const ExperimentConfig& base) {
  Prop4Config config;
  config.p = j.value("p", config.p);
  config.s = j.value("s", config.s);
  config.alpha = j.value("alpha", config.alpha);
  config.rho = j.value("rho", config.rho);
  config.c = j.value("c", base.c);
  if (j.contains("covariance")) {
    const json& c = j.at("covariance");
    config.covariance = covariance_kind(c.at("kind").get<std::string>());
    config.r = c.value("r", config.r);
    config.block_size = c.value("block_size", config.block_size);
  }
  if (j.contains("n_grid")) config.n_grid = j.at("n_grid").get<std::vector<int>>();
  config.seeds_per_n = j.value("seeds_per_n", config.seeds_per_n);
  config.samples_per_check = j.value("samples_per_check", config.samples_per_check);
  config.big_m = j.value("big_m", config.big_m);
  config.seed = j.value("seed", base.seed);
  return config;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("configuration is not valid JSON");
  return j;
}

const std::vector<std::string> kKnownExperiments{"theorem1", "cone",  "augmented",
                                                 "prop1",    "prop2", "prop4"};

ordered_json point_json(const PointSummary& s) {
  ordered_json j;
  j["lambda"] = s.lambda;
  j["alpha"] = s.alpha;
  j["rho"] = s.rho;
  j["replications"] = s.replications;
  j["converged"] = s.converged;
  j["covered"] = s.covered;
  j["probability"] = s.probability;
  j["coverage"] = s.coverage;
  j["pass_band"] = s.pass_band;
  j["vacuous"] = s.vacuous;
  j["pass"] = s.pass;
  return j;
}

}  // namespace

SimulateSpec parse_simulate_spec(const std::string& json_text) {
  try {
    json j = parse_text(json_text);
    SimulateSpec spec;
    spec.config = parse_experiment(j);
    if (j.contains("experiments")) {
      spec.experiments = j.at("experiments").get<std::vector<std::string>>();
      for (const std::string& name : spec.experiments)
        if (std::find(kKnownExperiments.begin(), kKnownExperiments.end(), name) ==
            kKnownExperiments.end())
          throw ConfigError("unknown experiment '" + name + "'");
    }
    spec.augmented_points = j.value("augmented_points", spec.augmented_points);
    spec.inclusion_samples = j.value("inclusion_samples", spec.inclusion_samples);
    if (j.contains("prop4")) spec.prop4 = parse_prop4(j.at("prop4"), spec.config);
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad simulation config: ") + e.what());
  }
}

GroupingConfig parse_grouping_config(const std::string& json_text) {
  try {
    json j = parse_text(json_text);
    GroupingConfig config;
    config.scenario = parse_scenario(j.at("scenario"));
    config.lambda = j.value("lambda", config.lambda);
    config.alpha = j.value("alpha", config.alpha);
    config.rho = j.value("rho", config.rho);
    config.decoupled_variant = j.value("decoupled_variant", config.decoupled_variant);
    config.replications = j.value("replications", config.replications);
    config.seed = j.value("seed", config.seed);
    if (j.contains("source")) {
      const json& s = j.at("source");
      config.fit_source = s.value("fit", config.fit_source);
      config.source_n = s.value("n", config.source_n);
      config.source_lambda = s.value("lambda", config.source_lambda);
      config.source_rho = s.value("rho", config.source_rho);
      if (s.contains("noise")) config.source_noise = parse_noise(s.at("noise"));
    }
    if (j.contains("solver")) config.solver = parse_solver(j.at("solver"), config.solver);
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad grouping config: ") + e.what());
  }
}

SimulateResult run_simulation(const SimulateSpec& spec) {
  SimulateResult result;
  auto wants = [&spec](const char* name) {
    return std::find(spec.experiments.begin(), spec.experiments.end(), name) !=
           spec.experiments.end();
  };
  if (wants("theorem1")) {
    result.theorem1 = run_theorem1_experiment(spec.config);
    result.has_theorem1 = true;
    result.phi_choice = spec.config.phi_choice;
    // the coverage certificate speaks about the conservative phi only; a
    // tightness study is reported but cannot fail the run
    if (spec.config.phi_choice == PhiChoice::Lower)
      result.pass = result.pass && result.theorem1.pass;
  }
  if (wants("cone")) {
    result.cone_fraction = run_cone_membership_check(spec.config);
    result.has_cone = true;  // informational; thresholds depend on the noise level
  }
  if (wants("augmented")) {
    result.augmented_gap = run_augmented_identity_check(spec.config, spec.augmented_points);
    result.has_augmented = true;
    result.pass = result.pass && result.augmented_gap <= 1e-9;
  }
  if (wants("prop1")) {
    result.prop1 = run_prop1_experiment(spec.config, spec.inclusion_samples);
    result.has_prop1 = true;
    result.pass =
        result.pass && result.prop1.violations == 0 && result.prop1.inclusion_violations == 0;
  }
  if (wants("prop2")) {
    result.prop2 = run_prop2_experiment(spec.config);
    result.has_prop2 = true;
    result.pass = result.pass && result.prop2.violations == 0;
  }
  if (wants("prop4")) {
    result.prop4 = run_prop4_experiment(spec.prop4);
    result.has_prop4 = true;
    result.pass = result.pass && result.prop4.monotone;
  }
  return result;
}

std::string simulate_summary_json(const SimulateResult& result) {
  ordered_json j;
  if (result.has_theorem1) {
    ordered_json points = ordered_json::array();
    for (const PointSummary& s : result.theorem1.summaries) points.push_back(point_json(s));
    j["theorem1"]["phi"] = result.phi_choice == PhiChoice::Lower
                               ? "lower"
                               : "upper-estimate (non-certified)";
    j["theorem1"]["points"] = std::move(points);
    j["theorem1"]["pass"] = result.theorem1.pass;
  }
  if (result.has_cone) j["cone_membership_fraction"] = result.cone_fraction;
  if (result.has_augmented) j["augmented_identity_max_gap"] = result.augmented_gap;
  if (result.has_prop1) {
    j["prop1"] = {{"grid_points", result.prop1.grid_points},
                  {"violations", result.prop1.violations},
                  {"inclusion_samples", result.prop1.inclusion_samples},
                  {"inclusion_members", result.prop1.inclusion_members},
                  {"inclusion_violations", result.prop1.inclusion_violations}};
  }
  if (result.has_prop2) {
    j["prop2"] = {{"grid_points", result.prop2.grid_points},
                  {"condition_points", result.prop2.condition_points},
                  {"violations", result.prop2.violations}};
  }
  if (result.has_prop4) {
    ordered_json curve = ordered_json::array();
    for (const Prop4Point& point : result.prop4.curve)
      curve.push_back({{"n", point.n}, {"successes", point.successes}, {"seeds", point.seeds}});
    j["prop4"] = {{"curve", std::move(curve)},
                  {"gamma", result.prop4.gamma},
                  {"required_n", result.prop4.required_n},
                  {"desk_scale_factor", result.prop4.desk_scale_factor},
                  {"monotone", result.prop4.monotone}};
  }
  j["pass"] = result.pass;
  return j.dump(2) + "\n";
}

std::string grouping_summary_json(const GroupingExperimentResult& result) {
  ordered_json j;
  j["pairs"] = result.target.size();
  j["qualifying"] = result.qualifying;
  j["violations"] = result.violations;
  j["max_excess"] = result.max_excess;
  j["source_pairs"] = result.source.size();
  j["source_qualifying"] = result.source_qualifying;
  j["source_violations"] = result.source_violations;
  j["skipped_fits"] = result.skipped_fits;
  j["pass"] = result.violations == 0 && result.source_violations == 0;
  return j.dump(2) + "\n";
}

}  // namespace tenet
