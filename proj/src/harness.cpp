#include "tenet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tenet/errors.hpp"
#include "tenet/io.hpp"
#include "tenet/oracle.hpp"
#include "tenet/rng.hpp"

namespace tenet {

namespace {

// scenarios arrive from config files, so shape problems are config errors
Vector true_raw_coefficients(const Scenario& sc) {
  if (sc.p < 1) throw ConfigError("scenario needs p >= 1");
  std::vector<int> support = sc.support;
  if (support.empty()) {
    if (sc.s < 0 || sc.s > sc.p) throw ConfigError("scenario sparsity out of range");
    for (int j = 0; j < sc.s; ++j) support.push_back(j);
  }
  for (int j : support)
    if (j < 0 || j >= sc.p) throw ConfigError("support coordinate out of range");
  if (!sc.beta_values.empty() && sc.beta_values.size() != support.size())
    throw ConfigError("beta_values must match the support size");
  Vector beta = Vector::Zero(sc.p);
  for (std::size_t i = 0; i < support.size(); ++i)
    beta[support[i]] = sc.beta_values.empty() ? sc.beta_value : sc.beta_values[i];
  return beta;
}

DesignSpec design_of(const Scenario& sc) {
  DesignSpec ds;
  ds.n = sc.n;
  ds.p = sc.p;
  ds.kind = sc.covariance;
  ds.r = sc.r;
  ds.block_size = sc.block_size;
  return ds;
}

struct GridPoint {
  double lambda, alpha, rho;
};

std::vector<GridPoint> expand_grid(const ExperimentConfig& config) {
  std::vector<GridPoint> grid;
  for (double lambda : config.lambdas)
    for (double alpha : config.alphas)
      for (double rho : config.rhos) grid.push_back({lambda, alpha, rho});
  if (grid.empty()) throw ConfigError("empty parameter grid");
  return grid;
}

BoundIngredients ingredients_for(const Instance& inst, const ExperimentConfig& config,
                                 double lambda, double alpha, double rho) {
  BoundIngredients ing;
  ing.lambda = lambda;
  ing.alpha = alpha;
  ing.rho = rho;
  ing.c = config.c;
  ing.s = static_cast<double>(inst.support.size());
  Vector delta = inst.beta_tilde - inst.beta_star;
  ing.delta_l1 = delta.lpNorm<1>();
  ing.delta_alpha_l2 = (delta - alpha * inst.beta_tilde).norm();
  ing.beta_star_l2 = inst.beta_star.norm();
  ing.n = inst.data.n();
  ing.p = inst.data.p();
  ing.sigma = inst.sigma;
  return ing;
}

}  // namespace

Instance build_instance(const Scenario& scenario, std::uint64_t seed) {
  Vector beta_raw = true_raw_coefficients(scenario);
  Matrix x_raw = generate_design(design_of(scenario), derive_seed(seed, 1));
  Vector eps = generate_noise(scenario.noise, scenario.n, derive_seed(seed, 2));
  Response resp = generate_response(x_raw, beta_raw, eps);
  StandardizedData sd = standardize(resp.y, x_raw);
  sd.transform.y_shift += resp.shift;

  Instance inst;
  inst.data = std::move(sd.data);
  inst.transform = std::move(sd.transform);
  inst.beta_star_raw = beta_raw;
  inst.beta_star = inst.transform.x_scale.cwiseProduct(beta_raw);
  inst.support = TrueModel::make(inst.beta_star, scenario.noise.sigma).support;
  inst.beta_tilde =
      make_source(inst.beta_star, scenario.source, derive_seed(seed, 3)).beta_tilde;
  inst.sigma = scenario.noise.sigma;
  return inst;
}

Theorem1Result run_theorem1_experiment(const ExperimentConfig& config) {
  std::vector<GridPoint> grid = expand_grid(config);
  Theorem1Result out;
  out.pass = true;
  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    const GridPoint& gp = grid[pi];
    PointSummary summary;
    summary.lambda = gp.lambda;
    summary.alpha = gp.alpha;
    summary.rho = gp.rho;
    summary.replications = config.replications;
    for (int rep = 0; rep < config.replications; ++rep) {
      std::uint64_t rep_seed = derive_seed(config.seed, pi, static_cast<std::uint64_t>(rep));
      Instance inst = build_instance(config.scenario, rep_seed);
      PenaltySpec pen = PenaltySpec::coupled_form(gp.lambda, gp.alpha, gp.rho, inst.beta_tilde);
      FitResult fit_result = fit(inst.data, pen, config.solver);

      BoundIngredients ing = ingredients_for(inst, config, gp.lambda, gp.alpha, gp.rho);
      ConeSpec cone = ConeSpec::make(gp.alpha, gp.rho, config.c, inst.beta_star,
                                     inst.beta_tilde, inst.support);

      double phi = phi_lower(inst.data.X);
      if (config.phi_choice == PhiChoice::UpperEstimate) {
        const Vector v = fit_result.beta - inst.beta_star;
        std::vector<Vector> extra;
        if (cone_contains(v, cone)) extra.push_back(v);
        try {
          phi = phi_upper_estimate(inst.data.X, cone, config.phi_samples,
                                   derive_seed(rep_seed, 4), extra);
        } catch (const NoConeMemberSampled&) {
          // nothing landed in the cone: keep the certified floor
        }
      }
      BoundReport bound = bound_tenet(ing, phi, config.convention);

      ReplicationRecord rec;
      rec.seed = rep_seed;
      rec.lambda = gp.lambda;
      rec.alpha = gp.alpha;
      rec.rho = gp.rho;
      rec.error = (fit_result.beta - inst.beta_star).norm();
      rec.bound = bound.u;
      rec.probability = bound.probability;
      rec.cone_member = cone_contains(fit_result.beta - inst.beta_star, cone);
      rec.kkt_residual = fit_result.kkt;
      rec.converged = fit_result.converged;
      out.records.push_back(rec);

      if (rec.converged) {
        ++summary.converged;
        if (rec.error <= rec.bound) ++summary.covered;
      }
      summary.probability = rec.probability;  // identical across replications
    }
    summary.vacuous = summary.probability <= 0.0;
    if (summary.converged > 0) {
      summary.coverage = static_cast<double>(summary.covered) / summary.converged;
      double se = std::sqrt(std::max(summary.probability * (1.0 - summary.probability), 0.0) /
                            summary.converged);
      summary.pass_band = std::max(0.0, summary.probability - 3.0 * se);
      summary.pass = summary.coverage >= summary.pass_band;
    } else {
      summary.pass = false;
    }
    out.pass = out.pass && summary.pass;
    out.summaries.push_back(summary);
  }
  return out;
}

double run_cone_membership_check(const ExperimentConfig& config) {
  Theorem1Result result = run_theorem1_experiment(config);
  long members = 0, converged = 0;
  for (const ReplicationRecord& rec : result.records) {
    if (!rec.converged) continue;
    ++converged;
    if (rec.cone_member) ++members;
  }
  if (converged == 0) return 0.0;
  return static_cast<double>(members) / static_cast<double>(converged);
}

double augmented_objective_gap(const Dataset& data, const PenaltySpec& pen, const Vector& beta) {
  if (!pen.coupled) throw WrongPenaltyShape("augmented form needs the coupled penalty");
  if (beta.size() != data.p()) throw DimensionMismatch("beta length mismatch");
  const double plain = objective(beta, data, pen);  // validates the penalty too
  const double n = static_cast<double>(data.n());
  const double lambda = pen.lambda, alpha = pen.alpha, rho = pen.rho1;
  const Vector& bt = pen.beta_tilde;

  Matrix xa(data.n() + data.p(), data.p());
  xa.topRows(data.n()) = data.X;
  xa.bottomRows(data.p()) =
      std::sqrt(2.0 * n * lambda * (1.0 - rho)) * Matrix::Identity(data.p(), data.p());
  Vector ya = Vector::Zero(data.n() + data.p());
  ya.head(data.n()) = data.y;

  double augmented = (ya - xa * beta).squaredNorm() / (2.0 * n) +
                     lambda * alpha * rho * beta.lpNorm<1>() +
                     lambda * (1.0 - alpha) * rho * (beta - bt).lpNorm<1>() -
                     2.0 * lambda * (1.0 - alpha) * (1.0 - rho) * beta.dot(bt) +
                     lambda * (1.0 - alpha) * (1.0 - rho) * bt.squaredNorm();
  return std::abs(plain - augmented);
}

double run_augmented_identity_check(const ExperimentConfig& config, int n_points) {
  if (n_points < 1) throw ConfigError("need at least one probe point");
  std::vector<GridPoint> grid = expand_grid(config);
  Instance inst = build_instance(config.scenario, derive_seed(config.seed, 9001));
  Rng rng(derive_seed(config.seed, 9002));
  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const GridPoint& gp = grid[static_cast<std::size_t>(i) % grid.size()];
    PenaltySpec pen = PenaltySpec::coupled_form(gp.lambda, gp.alpha, gp.rho, inst.beta_tilde);
    double scale = std::pow(2.0, i % 4);  // magnitudes 1 through 8
    Vector beta(inst.data.p());
    for (int j = 0; j < beta.size(); ++j) beta[j] = scale * rng.normal();
    worst = std::max(worst, augmented_objective_gap(inst.data, pen, beta));
  }
  return worst;
}

Prop1Summary run_prop1_experiment(const ExperimentConfig& config, int inclusion_samples) {
  Instance inst = build_instance(config.scenario, derive_seed(config.seed, 101));
  if ((inst.beta_tilde - inst.beta_star).lpNorm<1>() != 0.0)
    throw NonzeroDelta("this comparison needs beta_tilde equal to beta_star");
  std::vector<GridPoint> grid = expand_grid(config);
  double phi = phi_lower(inst.data.X);

  Prop1Summary out;
  out.grid_points = static_cast<int>(grid.size());
  for (const GridPoint& gp : grid) {
    BoundIngredients ing = ingredients_for(inst, config, gp.lambda, gp.alpha, gp.rho);
    if (!compare_prop1(ing, phi, phi).holds) ++out.violations;
  }

  // cone nesting: transfer-cone members must lie in the alpha = 1 cone too.
  // Mixed draws (dense, support-only, support plus small dense spill) so a
  // decent share actually lands inside the transfer cone.
  Rng rng(derive_seed(config.seed, 102));
  out.inclusion_samples = inclusion_samples;
  const int p = inst.data.p();
  for (int i = 0; i < inclusion_samples; ++i) {
    const GridPoint& gp = grid[static_cast<std::size_t>(i) % grid.size()];
    ConeSpec cone_a = ConeSpec::make(gp.alpha, gp.rho, config.c, inst.beta_star,
                                     inst.beta_tilde, inst.support);
    ConeSpec cone_1 =
        ConeSpec::make(1.0, gp.rho, config.c, inst.beta_star, inst.beta_tilde, inst.support);
    Vector v = Vector::Zero(p);
    int kind = i % 4;
    if (kind == 0) {
      for (int j = 0; j < p; ++j) v[j] = rng.normal();
    } else {
      for (int j : inst.support) v[j] = rng.normal();
      if (kind == 2)
        for (int j = 0; j < p; ++j) v[j] += 0.05 * rng.normal();
      if (kind == 3)
        for (int j = 0; j < p; ++j) v[j] += 0.5 * rng.normal();
    }
    if (v.lpNorm<1>() == 0.0) continue;
    if (!cone_contains(v, cone_a)) continue;
    ++out.inclusion_members;
    if (!cone_contains(v, cone_1)) ++out.inclusion_violations;
  }
  return out;
}

Prop2Summary run_prop2_experiment(const ExperimentConfig& config) {
  Instance inst = build_instance(config.scenario, derive_seed(config.seed, 201));
  if ((inst.beta_tilde - inst.beta_star).lpNorm<1>() != 0.0)
    throw NonzeroDelta("this comparison needs beta_tilde equal to beta_star");
  std::vector<GridPoint> grid = expand_grid(config);
  double phi_t = phi_lower(inst.data.X);

  Prop2Summary out;
  out.grid_points = static_cast<int>(grid.size());
  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    const GridPoint& gp = grid[pi];
    BoundIngredients ing = ingredients_for(inst, config, gp.lambda, gp.alpha, gp.rho);
    // the competing method's curvature lives on the rho = 1 cone
    ConeSpec lasso_cone = ConeSpec::make(gp.alpha, 1.0, config.c, inst.beta_star,
                                         inst.beta_tilde, inst.support);
    double phi_tl =
        phi_upper_estimate(inst.data.X, lasso_cone, 300, derive_seed(config.seed, 202, pi));
    Prop2Result cmp = compare_prop2(ing, phi_t, phi_tl);
    if (!cmp.condition_holds) continue;
    ++out.condition_points;
    if (!cmp.conclusion_holds) ++out.violations;
  }
  return out;
}

Prop4Summary run_prop4_experiment(const Prop4Config& config) {
  if (config.s < 1 || config.s > config.p) throw DimensionMismatch("sparsity out of range");
  Vector beta_star = Vector::Zero(config.p);
  std::vector<int> support;
  for (int j = 0; j < config.s; ++j) {
    beta_star[j] = 1.0;
    support.push_back(j);
  }
  ConeSpec cone =
      ConeSpec::make(config.alpha, config.rho, config.c, beta_star, beta_star, support);

  DesignSpec ds;
  ds.p = config.p;
  ds.kind = config.covariance;
  ds.r = config.r;
  ds.block_size = config.block_size;
  ds.n = 2;  // overwritten per grid point
  Prop4Summary out;
  out.gamma = ds.gamma();

  for (int n : config.n_grid) {
    if (n < 2) throw DimensionMismatch("grid sample sizes must be at least 2");
    ds.n = n;
    Prop4Point point;
    point.n = n;
    point.seeds = config.seeds_per_n;
    for (int i = 0; i < config.seeds_per_n; ++i) {
      std::uint64_t a = static_cast<std::uint64_t>(n);
      std::uint64_t b = static_cast<std::uint64_t>(i);
      Matrix x = standardize_columns(
          generate_design(ds, derive_seed(config.seed, 7000 + a, b)));
      GreCheck gre = check_gre_conclusion(x, cone, out.gamma, config.samples_per_check,
                                          derive_seed(config.seed, 8000 + a, b));
      if (gre.holds) ++point.successes;
    }
    out.curve.push_back(point);
  }

  out.monotone = true;
  for (std::size_t i = 1; i < out.curve.size(); ++i)
    if (out.curve[i].successes < out.curve[i - 1].successes) out.monotone = false;

  double d_alpha = config.alpha * beta_star.norm();  // beta_tilde = beta_star here
  out.required_n = required_sample_size(config.alpha, config.rho, config.c,
                                        static_cast<double>(config.s), d_alpha, out.gamma,
                                        config.big_m, config.p);
  out.desk_scale_factor =
      config.n_grid.empty() ? 0.0 : out.required_n / static_cast<double>(config.n_grid.back());
  return out;
}

GroupingExperimentResult run_grouping_experiment(const GroupingConfig& config) {
  const Scenario& sc = config.scenario;
  Vector beta_raw = true_raw_coefficients(sc);
  DesignSpec target_ds = design_of(sc);
  DesignSpec source_ds = target_ds;
  source_ds.n = config.source_n;

  GroupingExperimentResult out;
  out.max_excess = -std::numeric_limits<double>::infinity();
  const double slack = 1e-9;

  for (int rep = 0; rep < config.replications; ++rep) {
    std::uint64_t rs = derive_seed(config.seed, 11, static_cast<std::uint64_t>(rep));

    // source sample, its own fit supplies the transfer coefficients
    Vector beta_tilde;
    StandardizedData source_sd;
    bool have_source_fit = false;
    if (config.fit_source) {
      Matrix xs = generate_design(source_ds, derive_seed(rs, 21));
      Vector es = generate_noise(config.source_noise, config.source_n, derive_seed(rs, 22));
      Response rsrc = generate_response(xs, beta_raw, es);
      source_sd = standardize(rsrc.y, xs);
      FitResult source_fit =
          fit_enet(source_sd.data, config.source_lambda, config.source_rho, config.solver);
      if (!source_fit.converged) {
        ++out.skipped_fits;
        continue;
      }
      beta_tilde = source_fit.beta;
      have_source_fit = true;
    }

    Instance inst = build_instance(sc, rs);
    if (!config.fit_source) beta_tilde = inst.beta_tilde;

    PenaltySpec pen =
        config.decoupled_variant
            ? PenaltySpec::decoupled_form(config.lambda, config.alpha, config.rho, 0.0,
                                          beta_tilde)
            : PenaltySpec::coupled_form(config.lambda, config.alpha, config.rho, beta_tilde);
    FitResult target_fit = fit(inst.data, pen, config.solver);
    if (!target_fit.converged) {
      ++out.skipped_fits;
      continue;
    }

    const int p = inst.data.p();
    const int bs = std::max(1, sc.block_size);
    for (int block = 0; block * bs < p; ++block) {
      int lo = block * bs;
      int hi = std::min(p, lo + bs);
      for (int j = lo; j < hi; ++j) {
        for (int k = j + 1; k < hi; ++k) {
          GroupingReport rep_jk =
              config.decoupled_variant
                  ? grouping_bound_decoupled(inst.data, pen, j, k, target_fit.beta)
                  : grouping_bound(inst.data, pen, j, k, target_fit.beta);
          out.target.push_back(rep_jk);
          if (rep_jk.preconditions_met) {
            ++out.qualifying;
            double excess = rep_jk.observed - rep_jk.bound;
            out.max_excess = std::max(out.max_excess, excess);
            if (excess > slack) ++out.violations;
          }

          if (have_source_fit) {
            GroupingReport src;
            src.j = j;
            src.k = k;
            src.r_jk = column_correlation(source_sd.data.X, j, k);
            src.z = 0.0;
            src.bound = source_grouping_bound(source_sd.data, config.source_lambda,
                                              config.source_rho, j, k);
            src.observed = std::abs(beta_tilde[j] - beta_tilde[k]);
            src.preconditions_met = true;  // the source bound has no sign hypothesis
            out.source.push_back(src);
            ++out.source_qualifying;
            if (src.observed > src.bound + slack) ++out.source_violations;
          }
        }
      }
    }
  }
  if (out.qualifying == 0) out.max_excess = 0.0;
  return out;
}

std::string records_csv(const std::vector<ReplicationRecord>& records) {
  std::ostringstream os;
  os << "seed,method,lambda,alpha,rho,error,bound,probability,cone_member,kkt_residual\n";
  for (const ReplicationRecord& rec : records) {
    os << rec.seed << ',' << rec.method << ',' << format_double(rec.lambda) << ','
       << format_double(rec.alpha) << ',' << format_double(rec.rho) << ','
       << format_double(rec.error) << ',' << format_double(rec.bound) << ','
       << format_double(rec.probability) << ',' << (rec.cone_member ? '1' : '0') << ','
       << format_double(rec.kkt_residual) << '\n';
  }
  return os.str();
}

std::string grouping_csv(const std::vector<GroupingReport>& reports) {
  std::ostringstream os;
  os << "j,k,r_jk,Z,bound,observed,preconditions_met\n";
  for (const GroupingReport& rep : reports) {
    os << rep.j << ',' << rep.k << ',' << format_double(rep.r_jk) << ','
       << format_double(rep.z) << ',' << format_double(rep.bound) << ','
       << format_double(rep.observed) << ',' << (rep.preconditions_met ? '1' : '0') << '\n';
  }
  return os.str();
}

}  // namespace tenet
