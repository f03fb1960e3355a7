#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tenet/acceptance.hpp"
#include "tenet/bounds.hpp"
#include "tenet/config.hpp"
#include "tenet/errors.hpp"
#include "tenet/harness.hpp"
#include "tenet/io.hpp"
#include "tenet/model.hpp"
#include "tenet/solver.hpp"

namespace {

using nlohmann::ordered_json;
using namespace tenet;

ordered_json vector_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

struct FitArgs {
  std::string data_path;
  std::string beta_tilde_path;
  double lambda = 0.1;
  double alpha = 1.0;
  double rho = 0.5;
  double rho2 = -1.0;  // >= 0 selects the decoupled form
  double tol = 1e-8;
  int max_sweeps = 10000;
  bool raw = false;
};

int run_fit(const FitArgs& args) {
  Matrix table = read_matrix(args.data_path);
  if (table.cols() < 2) throw ConfigError("data needs a response column plus predictors");
  Vector y = table.col(0);
  Matrix x = table.rightCols(table.cols() - 1);

  Dataset data;
  Standardization transform;
  if (args.raw) {
    data = Dataset{y, x};
  } else {
    StandardizedData sd = standardize(y, x);
    data = std::move(sd.data);
    transform = std::move(sd.transform);
  }

  Vector beta_tilde = Vector::Zero(data.p());
  if (!args.beta_tilde_path.empty()) {
    beta_tilde = read_vector(args.beta_tilde_path);
    if (beta_tilde.size() != data.p()) throw ConfigError("beta-tilde length mismatch");
  }

  PenaltySpec pen = args.rho2 >= 0.0
                        ? PenaltySpec::decoupled_form(args.lambda, args.alpha, args.rho,
                                                      args.rho2, beta_tilde)
                        : PenaltySpec::coupled_form(args.lambda, args.alpha, args.rho, beta_tilde);
  SolverOptions opts;
  opts.tol = args.tol;
  opts.max_sweeps = args.max_sweeps;
  FitResult res = fit(data, pen, opts);

  ordered_json out;
  out["penalty"] = {{"lambda", pen.lambda},
                    {"alpha", pen.alpha},
                    {"rho1", pen.rho1},
                    {"rho2", pen.rho2},
                    {"coupled", pen.coupled}};
  out["beta"] = vector_json(res.beta);
  if (!args.raw) {
    RawCoefficients rc = to_raw_scale(res.beta, transform);
    out["beta_raw"] = vector_json(rc.beta);
    out["intercept"] = rc.intercept;
  }
  out["objective"] = res.objective;
  out["kkt"] = res.kkt;
  out["sweeps"] = res.sweeps;
  out["converged"] = res.converged;
  std::printf("%s\n", out.dump(2).c_str());
  return res.converged ? 0 : 1;
}

struct BoundsArgs {
  BoundIngredients ing;
  double phi = 1.0;
  std::string method = "tenet";
  std::string convention = "proof-consistent";
};

int run_bounds(const BoundsArgs& args) {
  DConvention convention;
  if (args.convention == "proof-consistent")
    convention = DConvention::ProofConsistent;
  else if (args.convention == "as-stated")
    convention = DConvention::AsStated;
  else
    throw ConfigError("unknown convention '" + args.convention + "'");

  BoundReport rep;
  if (args.method == "tenet")
    rep = bound_tenet(args.ing, args.phi, convention);
  else if (args.method == "enet")
    rep = bound_enet(args.ing, args.phi);
  else if (args.method == "tlasso")
    rep = bound_tlasso(args.ing, args.phi);
  else
    throw ConfigError("unknown method '" + args.method + "'");

  ordered_json out;
  out["method"] = args.method;
  out["u"] = rep.u;
  out["d"] = rep.d;
  out["phi"] = rep.phi;
  out["probability"] = rep.probability;
  if (args.method == "tenet")
    out["convention"] = args.convention;
  out["ingredients"] = {{"lambda", rep.ingredients.lambda},
                        {"alpha", rep.ingredients.alpha},
                        {"rho", rep.ingredients.rho},
                        {"c", rep.ingredients.c},
                        {"s", rep.ingredients.s},
                        {"delta_l1", rep.ingredients.delta_l1},
                        {"delta_alpha_l2", rep.ingredients.delta_alpha_l2},
                        {"beta_star_l2", rep.ingredients.beta_star_l2},
                        {"n", rep.ingredients.n},
                        {"p", rep.ingredients.p},
                        {"sigma", rep.ingredients.sigma}};
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
  SimulateSpec spec = parse_simulate_spec(read_text_file(config_path));
  SimulateResult res = run_simulation(spec);
  std::filesystem::create_directories(out_dir);
  if (res.has_theorem1)
    write_text_file(out_dir + "/records.csv", records_csv(res.theorem1.records));
  write_text_file(out_dir + "/summary.json", simulate_summary_json(res));
  std::printf("simulate: %s (outputs in %s)\n", res.pass ? "pass" : "FAIL", out_dir.c_str());
  return res.pass ? 0 : 1;
}

int run_grouping_cmd(const std::string& config_path, const std::string& out_dir) {
  GroupingConfig config = parse_grouping_config(read_text_file(config_path));
  GroupingExperimentResult res = run_grouping_experiment(config);
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/grouping.csv", grouping_csv(res.target));
  if (!res.source.empty())
    write_text_file(out_dir + "/grouping_source.csv", grouping_csv(res.source));
  write_text_file(out_dir + "/summary.json", grouping_summary_json(res));
  const bool pass = res.violations == 0 && res.source_violations == 0;
  std::printf("grouping: %s, %d qualifying pairs, %d violations (outputs in %s)\n",
              pass ? "pass" : "FAIL", res.qualifying, res.violations, out_dir.c_str());
  return pass ? 0 : 1;
}

int run_check() {
  bool all = true;
  run_acceptance([&all](const CriterionResult& r) {
    std::printf("[%2d] %s  %-34s %s\n", r.index, r.passed ? "pass" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    all = all && r.passed;
  });
  std::printf("%s\n", all ? "all 13 criteria passed" : "ACCEPTANCE FAILED");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer elastic net: fits, error bounds, seeded experiments"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit one dataset from a delimited text file");
  fit_cmd->add_option("--data", fit_args.data_path,
                      "table with the response in the first column")->required();
  fit_cmd->add_option("--beta-tilde", fit_args.beta_tilde_path, "source estimate vector file");
  fit_cmd->add_option("--lambda", fit_args.lambda, "penalty level");
  fit_cmd->add_option("--alpha", fit_args.alpha, "own-vs-transfer mix");
  fit_cmd->add_option("--rho", fit_args.rho, "l1 share (coupled form ties rho2 = 1 - rho)");
  fit_cmd->add_option("--rho2", fit_args.rho2, "set >= 0 for the decoupled quadratic share");
  fit_cmd->add_option("--tol", fit_args.tol, "convergence tolerance");
  fit_cmd->add_option("--max-sweeps", fit_args.max_sweeps, "sweep budget");
  fit_cmd->add_flag("--raw", fit_args.raw, "skip standardization");

  BoundsArgs bounds_args;
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "closed-form error bound report");
  bounds_cmd->add_option("--lambda", bounds_args.ing.lambda)->required();
  bounds_cmd->add_option("--alpha", bounds_args.ing.alpha)->required();
  bounds_cmd->add_option("--rho", bounds_args.ing.rho)->required();
  bounds_cmd->add_option("--c", bounds_args.ing.c)->required();
  bounds_cmd->add_option("--s", bounds_args.ing.s, "support size")->required();
  bounds_cmd->add_option("--n", bounds_args.ing.n)->required();
  bounds_cmd->add_option("--p", bounds_args.ing.p)->required();
  bounds_cmd->add_option("--sigma", bounds_args.ing.sigma)->required();
  bounds_cmd->add_option("--phi", bounds_args.phi, "restricted eigenvalue")->required();
  bounds_cmd->add_option("--delta-l1", bounds_args.ing.delta_l1);
  bounds_cmd->add_option("--delta-alpha-l2", bounds_args.ing.delta_alpha_l2);
  bounds_cmd->add_option("--beta-star-l2", bounds_args.ing.beta_star_l2);
  bounds_cmd->add_option("--method", bounds_args.method, "tenet, enet, or tlasso");
  bounds_cmd->add_option("--convention", bounds_args.convention,
                         "proof-consistent or as-stated");

  std::string sim_config, sim_out = "simulate_out";
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run configured experiments");
  sim_cmd->add_option("--config", sim_config, "JSON experiment configuration")->required();
  sim_cmd->add_option("--out-dir", sim_out, "directory for records.csv and summary.json");

  std::string grp_config, grp_out = "grouping_out";
  CLI::App* grp_cmd = app.add_subcommand("grouping", "correlated-pair difference bounds");
  grp_cmd->add_option("--config", grp_config, "JSON grouping configuration")->required();
  grp_cmd->add_option("--out-dir", grp_out, "directory for grouping.csv and summary.json");

  app.add_subcommand("check", "run the full acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_args);
    if (bounds_cmd->parsed()) return run_bounds(bounds_args);
    if (sim_cmd->parsed()) return run_simulate(sim_config, sim_out);
    if (grp_cmd->parsed()) return run_grouping_cmd(grp_config, grp_out);
    return run_check();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
