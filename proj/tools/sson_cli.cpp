// Batch front-end: generate synthetic instances, estimate structured models,
// benchmark solver configurations, and export decompositions as plot-ready
// tables. Exit codes: 0 success, 1 non-convergence under --strict,
// 2 usage/input errors.

#include <CLI11.hpp>

#include "sson/admm.hpp"
#include "sson/datagen.hpp"
#include "sson/eigen_sym.hpp"
#include "sson/matrix_io.hpp"
#include "sson/metrics.hpp"
#include "sson/parallel.hpp"
#include "sson/sson_norm.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace sson;

namespace {

// ---------------------------------------------------------------------------
// Small key=value manifest files.

using Manifest = std::map<std::string, std::string>;

void write_manifest(const std::string& path, const Manifest& entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const auto& [key, value] : entries) {
    out << key << '=' << value << '\n';
  }
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  Manifest entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(path + ": malformed line '" + line + "'");
    entries[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return entries;
}

std::string manifest_get(const Manifest& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw IoError("manifest: missing key '" + key + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Shared option blocks.

struct PenaltyFlags {
  std::string schedule = "paper-default";  // paper-default | lasso-only | custom
  std::vector<double> lambda;
  std::vector<double> lambda_hat;
  double lambda_e = 1.0;
  std::vector<int> block_sides;

  SsonConfig build(int p) const {
    if (schedule == "paper-default") return SsonConfig::default_schedule(p);
    if (schedule == "lasso-only") {
      SsonConfig cfg = SsonConfig::default_schedule(p);
      for (int i = 1; i < cfg.n; ++i) {
        cfg.lambda[i] = 1e6;
        cfg.lambda_hat[i] = 1e6;
      }
      return cfg;
    }
    if (schedule != "custom") {
      throw std::invalid_argument("penalty schedule must be paper-default, lasso-only or custom");
    }
    SsonConfig cfg;
    cfg.n = static_cast<int>(lambda.size());
    cfg.lambda = lambda;
    cfg.lambda_hat = lambda_hat;
    cfg.lambda_e = lambda_e;
    if (static_cast<int>(block_sides.size()) != cfg.n - 1) {
      throw std::invalid_argument("custom schedule: need one --block-sides entry per structured component (n-1)");
    }
    cfg.partitions.push_back(BlockPartition::grid(p, p));
    for (int side : block_sides) {
      cfg.partitions.push_back(BlockPartition::grid(p, side));
    }
    cfg.validate(p);
    return cfg;
  }
};

void add_penalty_flags(CLI::App* cmd, PenaltyFlags& flags) {
  cmd->add_option("--penalties", flags.schedule,
                  "Penalty schedule: paper-default, lasso-only, or custom")
      ->default_val("paper-default");
  cmd->add_option("--lambda", flags.lambda, "Custom: lambda_1..lambda_n");
  cmd->add_option("--lambda-hat", flags.lambda_hat,
                  "Custom: lambda_hat_1..lambda_hat_n (first entry 0)");
  cmd->add_option("--lambda-e", flags.lambda_e, "Custom: ridge penalty lambda_e");
  cmd->add_option("--block-sides", flags.block_sides,
                  "Custom: grid block side per structured component");
}

struct SolverFlags {
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double rho = 4.0;
  double tau = 1e-5;
  int max_iter = 1000;
  std::string mode = "gauss-seidel";
  bool strict = false;
  double latent_lambda = 1.0;
  double budget_sec = std::numeric_limits<double>::infinity();
  int threads = 0;

  SolverOptions build(bool latent) const {
    SolverOptions opts;
    opts.gamma = gamma;
    opts.rho = rho;
    opts.tau = tau;
    opts.max_iter = max_iter;
    if (mode == "jacobian") {
      opts.mode = UpdateMode::kJacobian;
    } else if (mode == "gauss-seidel") {
      opts.mode = UpdateMode::kGaussSeidel;
    } else {
      throw std::invalid_argument("--mode must be gauss-seidel or jacobian");
    }
    opts.strict_monitor = strict;
    if (latent) opts.latent_lambda = latent_lambda;
    if (std::isfinite(budget_sec)) opts.wall_budget_ms = budget_sec * 1000.0;
    opts.threads = threads;
    return opts;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--gamma", flags.gamma, "Augmented-Lagrangian penalty (default 2*lambda_e)");
  cmd->add_option("--rho", flags.rho, "Proximal damping of the Z steps")->default_val(4.0);
  cmd->add_option("--tau", flags.tau, "Stopping tolerance")->default_val(1e-5);
  cmd->add_option("--max-iter", flags.max_iter, "Iteration cap")->default_val(1000);
  cmd->add_option("--mode", flags.mode, "Update order: gauss-seidel or jacobian")
      ->default_val("gauss-seidel");
  cmd->add_flag("--strict", flags.strict,
                "Abort on monitor violations; exit 1 on non-convergence");
  cmd->add_option("--latent-lambda", flags.latent_lambda,
                  "Trace penalty of the latent component (latent model)")
      ->default_val(1.0);
  cmd->add_option("--budget-sec", flags.budget_sec, "Wall-clock budget in seconds");
  cmd->add_option("--threads", flags.threads,
                  "Worker cap (0 = auto; SSON_THREADS also caps)");
}

// ---------------------------------------------------------------------------
// Instance generation shared by simulate and benchmark.

struct InstanceFlags {
  std::string model = "gaussian";
  std::string family = "er";
  int p = 50;
  double prob = 0.05;
  int neighbors = 4;
  int attach = 2;
  int m = 0;  // 0 = 5p
  int latent_r = 5;
  int burn_in = 5000;
  int thin = 0;  // 0 = 10p
  double coupling = 0.5;
  double var_coef = 0.5;
  std::uint64_t seed = 0;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& flags) {
  cmd->add_option("--model", flags.model,
                  "gaussian | covariance | ising | latent | var")
      ->default_val("gaussian")
      ->check(CLI::IsMember({"gaussian", "covariance", "ising", "latent", "var"}));
  cmd->add_option("--family", flags.family, "Graph family: er | nn | sf")
      ->default_val("er")
      ->check(CLI::IsMember({"er", "nn", "sf"}));
  cmd->add_option("--p", flags.p, "Number of variables")->default_val(50);
  cmd->add_option("--prob", flags.prob, "Edge probability (er)")
      ->default_val(0.05)
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--neighbors", flags.neighbors, "Neighbor count (nn)")->default_val(4);
  cmd->add_option("--attach", flags.attach, "Attachment count (sf)")->default_val(2);
  cmd->add_option("--m", flags.m, "Sample count (default 5p)")->default_val(0);
  cmd->add_option("--latent-r", flags.latent_r, "Hidden variable count (latent)")
      ->default_val(5);
  cmd->add_option("--burn-in", flags.burn_in, "Gibbs burn-in in single-site updates")
      ->default_val(5000);
  cmd->add_option("--thin", flags.thin, "Gibbs thinning (default 10p updates)")
      ->default_val(0);
  cmd->add_option("--coupling", flags.coupling, "Ising edge coupling strength")
      ->default_val(0.5);
  cmd->add_option("--var-coef", flags.var_coef, "VAR transition spectral radius")
      ->default_val(0.5)
      ->check(CLI::Range(0.0, 0.999));
  cmd->add_option("--seed", flags.seed, "Random seed")->default_val(0);
}

GraphSpec to_graph_spec(const InstanceFlags& flags, int dim) {
  GraphSpec spec;
  spec.p = dim;
  if (flags.family == "er") {
    spec.family = GraphFamily::kErdosRenyi;
    spec.edge_prob = flags.prob;
  } else if (flags.family == "nn") {
    spec.family = GraphFamily::kNearestNeighbor;
    spec.neighbors = flags.neighbors;
  } else {
    spec.family = GraphFamily::kScaleFree;
    spec.attach = flags.attach;
  }
  spec.seed = flags.seed;
  return spec;
}

struct Instance {
  std::string model;
  SymMatrix adjacency;
  SymMatrix theta_true;
  Mat samples;                        // gaussian/covariance/ising/latent
  std::optional<SymMatrix> theta_lowrank;  // latent
  std::optional<Mat> trajectory;      // var
  std::optional<Mat> Y;
  std::optional<Mat> X;
  int m = 0;
};

Instance make_instance(const InstanceFlags& flags) {
  Instance inst;
  inst.model = flags.model;
  inst.m = flags.m > 0 ? flags.m : 5 * flags.p;
  const int thin = flags.thin > 0 ? flags.thin : 10 * flags.p;

  if (flags.model == "latent") {
    const GraphSpec spec = to_graph_spec(flags, flags.p + flags.latent_r);
    inst.adjacency = gen_adjacency(spec);
    const LatentInstance latent = build_latent_instance(flags.p, flags.latent_r, spec);
    inst.theta_true = latent.theta_obs;
    inst.theta_lowrank = latent.theta_lowrank;
    inst.samples = sample_gaussian(latent.marginal_precision, inst.m, flags.seed + 1);
    return inst;
  }

  const GraphSpec spec = to_graph_spec(flags, flags.p);
  inst.adjacency = gen_adjacency(spec);
  if (flags.model == "gaussian") {
    inst.theta_true = build_precision(inst.adjacency);
    inst.samples = sample_gaussian(inst.theta_true, inst.m, flags.seed + 1);
  } else if (flags.model == "covariance") {
    // The shifted adjacency serves directly as the (sparse, PD) covariance.
    inst.theta_true = build_precision(inst.adjacency);
    inst.samples =
        sample_gaussian_from_covariance(inst.theta_true, inst.m, flags.seed + 1);
  } else if (flags.model == "ising") {
    inst.theta_true =
        SymMatrix::from_symmetric_part(flags.coupling * inst.adjacency.mat());
    inst.samples = gibbs_ising(inst.theta_true, inst.m, flags.burn_in, thin,
                               flags.seed + 1);
  } else if (flags.model == "var") {
    Mat transition = flags.var_coef * inst.adjacency.mat();
    const auto eig = sym_eigen(inst.adjacency);
    const double radius = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (radius > 0.0) transition /= radius;  // spectral radius = var_coef < 1
    inst.theta_true = SymMatrix::from_symmetric_part(transition);
    const VarData data = simulate_var({inst.theta_true.mat()}, SymMatrix::identity(flags.p),
                                      inst.m, flags.seed + 1);
    inst.trajectory = data.trajectory;
    inst.Y = data.Y;
    inst.X = data.X;
  } else {
    throw std::invalid_argument("unknown model '" + flags.model + "'");
  }
  return inst;
}

void write_instance(const std::string& dir, const InstanceFlags& flags,
                    const Instance& inst) {
  fs::create_directories(dir);
  write_csv_matrix(dir + "/adjacency.csv", inst.adjacency.mat());
  write_csv_matrix(dir + "/theta_true.csv", inst.theta_true.mat());
  Manifest manifest;
  manifest["model"] = inst.model;
  manifest["family"] = flags.family;
  manifest["p"] = std::to_string(flags.p);
  manifest["m"] = std::to_string(inst.m);
  manifest["seed"] = std::to_string(flags.seed);
  manifest["files.adjacency"] = "adjacency.csv";
  manifest["files.theta_true"] = "theta_true.csv";
  if (flags.family == "er") manifest["edge_prob"] = format_double(flags.prob);
  if (flags.family == "nn") manifest["neighbors"] = std::to_string(flags.neighbors);
  if (flags.family == "sf") manifest["attach"] = std::to_string(flags.attach);
  if (inst.model == "var") {
    write_csv_matrix(dir + "/trajectory.csv", *inst.trajectory);
    write_csv_matrix(dir + "/Y.csv", *inst.Y);
    write_csv_matrix(dir + "/X.csv", *inst.X);
    manifest["files.trajectory"] = "trajectory.csv";
    manifest["files.Y"] = "Y.csv";
    manifest["files.X"] = "X.csv";
    manifest["var_coef"] = format_double(flags.var_coef);
  } else {
    write_csv_matrix(dir + "/samples.csv", inst.samples);
    manifest["files.samples"] = "samples.csv";
  }
  if (inst.model == "latent") {
    write_csv_matrix(dir + "/theta_lowrank.csv", inst.theta_lowrank->mat());
    manifest["files.theta_lowrank"] = "theta_lowrank.csv";
    manifest["latent_r"] = std::to_string(flags.latent_r);
  }
  if (inst.model == "ising") {
    manifest["coupling"] = format_double(flags.coupling);
    manifest["burn_in"] = std::to_string(flags.burn_in);
    manifest["thin"] = std::to_string(flags.thin > 0 ? flags.thin : 10 * flags.p);
  }
  write_manifest(dir + "/manifest.txt", manifest);
}

// ---------------------------------------------------------------------------
// Estimation.

SymMatrix covariance_of(const Mat& samples) {
  return SymMatrix::from_symmetric_part(samples.transpose() * samples /
                                        static_cast<double>(samples.rows()));
}

struct EstimateOutcome {
  RunResult result;
  double loss_value = 0.0;
  double omega_value = 0.0;
  int p = 0;
};

EstimateOutcome estimate_model(const std::string& model, const Mat& samples,
                               const std::optional<Mat>& var_y,
                               const std::optional<Mat>& var_x,
                               const std::optional<SymMatrix>& covariance,
                               const PenaltyFlags& penalties, const SolverFlags& solver,
                               std::ostream* trace) {
  std::unique_ptr<LossProblem> loss;
  int p = 0;
  if (model == "gaussian" || model == "covariance" || model == "latent") {
    const SymMatrix sigma = covariance ? *covariance : covariance_of(samples);
    p = sigma.dim();
    if (model == "covariance") {
      loss = std::make_unique<CovarianceLoss>(sigma);
    } else {
      loss = std::make_unique<GaussianLoss>(sigma);
    }
  } else if (model == "ising") {
    BbOptions bb;
    bb.tol = solver.tau / 10.0;  // inner error kept below the outer residuals
    p = static_cast<int>(samples.cols());
    loss = std::make_unique<IsingLoss>(samples, bb);
  } else if (model == "var") {
    if (!var_y || !var_x) {
      throw std::invalid_argument("var model needs Y and X stacks");
    }
    p = static_cast<int>(var_x->cols());
    loss = std::make_unique<VarLoss>(*var_y, *var_x);
  } else {
    throw std::invalid_argument("unknown model '" + model + "'");
  }

  const SsonConfig cfg = penalties.build(p);
  SolverOptions opts = solver.build(model == "latent");
  opts.trace_stream = trace;
  const AdmmDriver driver(*loss, cfg, opts);

  EstimateOutcome out;
  out.result = driver.run();
  out.p = p;
  out.loss_value = loss->objective(out.result.theta.mat());
  out.omega_value = evaluate_omega(cfg, out.result.decomposition);
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand drivers.

int run_simulate(const InstanceFlags& flags, const std::string& out_dir) {
  const Instance inst = make_instance(flags);
  write_instance(out_dir, flags, inst);
  std::cout << "wrote " << inst.model << " instance (p=" << flags.p << ", m=" << inst.m
            << ") to " << out_dir << "\n";
  return 0;
}

struct EstimateArgs {
  std::string input_dir;
  std::string samples_path;
  std::string covariance_path;
  std::string y_path;
  std::string x_path;
  std::string model = "gaussian";
  std::string out_dir = "results";
  double edge_threshold = 1e-4;
  PenaltyFlags penalties;
  SolverFlags solver;
};

int run_estimate(const EstimateArgs& args) {
  std::string model = args.model;
  Mat samples;
  std::optional<Mat> var_y;
  std::optional<Mat> var_x;
  std::optional<SymMatrix> covariance;

  if (!args.input_dir.empty()) {
    const Manifest manifest = read_manifest(args.input_dir + "/manifest.txt");
    model = manifest_get(manifest, "model");
    if (model == "var") {
      var_y = read_csv_matrix(args.input_dir + "/" + manifest_get(manifest, "files.Y"));
      var_x = read_csv_matrix(args.input_dir + "/" + manifest_get(manifest, "files.X"));
    } else {
      samples =
          read_csv_matrix(args.input_dir + "/" + manifest_get(manifest, "files.samples"));
    }
  } else {
    if (!args.covariance_path.empty()) {
      covariance = read_csv_sym(args.covariance_path);
    } else if (!args.samples_path.empty()) {
      samples = read_csv_matrix(args.samples_path);
    } else if (model == "var") {
      if (args.y_path.empty() || args.x_path.empty()) {
        throw std::invalid_argument("var model needs --y and --x (or --input)");
      }
    } else {
      throw std::invalid_argument("need --input, --samples, or --covariance");
    }
    if (!args.y_path.empty()) var_y = read_csv_matrix(args.y_path);
    if (!args.x_path.empty()) var_x = read_csv_matrix(args.x_path);
  }

  fs::create_directories(args.out_dir);
  std::ofstream trace(args.out_dir + "/trace.csv");
  if (!trace) throw IoError("cannot write '" + args.out_dir + "/trace.csv'");

  const EstimateOutcome outcome =
      estimate_model(model, samples, var_y, var_x, covariance, args.penalties,
                     args.solver, &trace);
  const RunResult& res = outcome.result;

  write_csv_matrix(args.out_dir + "/theta_hat.csv", res.theta.mat());
  const SsonConfig cfg = args.penalties.build(outcome.p);
  write_decomposition(args.out_dir, res.decomposition, cfg);
  write_edges(args.out_dir + "/edges.txt",
              edges_from_matrix(res.theta, args.edge_threshold));

  Manifest summary;
  summary["model"] = model;
  summary["p"] = std::to_string(outcome.p);
  summary["converged"] = res.converged ? "true" : "false";
  summary["iterations"] = std::to_string(res.iterations);
  if (!res.trace.empty()) {
    const IterateReport& last = res.trace.back();
    summary["stop_stat"] = format_double(last.stop_stat);
    summary["primal_residual"] = format_double(last.primal_residual);
    summary["stationarity_residual"] = format_double(last.stationarity_residual);
    summary["dual_gap"] = format_double(last.dual_gap);
  }
  summary["omega"] = format_double(outcome.omega_value);
  summary["loss"] = format_double(outcome.loss_value);
  summary["objective"] = format_double(outcome.loss_value + outcome.omega_value);
  if (!res.warning.empty()) summary["warning"] = res.warning;
  write_manifest(args.out_dir + "/summary.txt", summary);

  if (!res.converged) {
    std::cerr << "warning: " << res.warning << "\n";
    if (args.solver.strict) return 1;
  }
  std::cout << "estimate written to " << args.out_dir << " (converged="
            << (res.converged ? "true" : "false") << ", iterations=" << res.iterations
            << ")\n";
  return 0;
}

struct BenchmarkArgs {
  InstanceFlags instance;
  int repeats = 10;
  std::vector<std::string> solvers = {"sson", "lasso"};
  std::string out_dir = "benchmark";
  double edge_threshold = 1e-4;
  SolverFlags solver;
  int threads = 0;
};

int run_benchmark(const BenchmarkArgs& args) {
  if (args.repeats < 1) throw std::invalid_argument("--repeats must be >= 1");
  if (args.solvers.empty()) throw std::invalid_argument("need at least one solver");
  for (const auto& s : args.solvers) {
    if (s != "sson" && s != "lasso") {
      throw std::invalid_argument("unknown solver '" + s + "' (expected sson or lasso)");
    }
  }

  struct Row {
    int instance = 0;
    std::uint64_t seed = 0;
    std::vector<double> ne;
    std::vector<double> se;
    std::vector<double> ms;
    std::vector<bool> converged;
  };
  std::vector<Row> rows(args.repeats);

  parallel_for(args.repeats, args.threads, [&](int rep) {
    InstanceFlags flags = args.instance;
    flags.seed = args.instance.seed + static_cast<std::uint64_t>(rep);
    const Instance inst = make_instance(flags);
    Row row;
    row.instance = rep;
    row.seed = flags.seed;
    for (const auto& solver_name : args.solvers) {
      PenaltyFlags penalties;
      penalties.schedule = solver_name == "sson" ? "paper-default" : "lasso-only";
      const auto t0 = std::chrono::steady_clock::now();
      double ne = std::numeric_limits<double>::quiet_NaN();
      double se = std::numeric_limits<double>::quiet_NaN();
      bool converged = false;
      try {
        const EstimateOutcome outcome =
            estimate_model(inst.model, inst.samples, inst.Y, inst.X, std::nullopt,
                           penalties, args.solver, nullptr);
        ne = correct_edges(outcome.result.theta, inst.theta_true, args.edge_threshold);
        se = squared_error(outcome.result.theta, inst.theta_true);
        converged = outcome.result.converged;
      } catch (const std::exception& e) {
        // Partial failures stay in the table as failures; the run continues.
      }
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      row.ne.push_back(ne);
      row.se.push_back(se);
      row.ms.push_back(ms);
      row.converged.push_back(converged);
    }
    rows[rep] = std::move(row);
  });

  fs::create_directories(args.out_dir);
  // Atomic table write: temp file then rename.
  const std::string table_path = args.out_dir + "/table.csv";
  {
    const std::string tmp = table_path + ".tmp";
    std::ofstream table(tmp);
    if (!table) throw IoError("cannot write '" + tmp + "'");
    table << "instance,seed,solver,n_e,s_e,time_ms,converged\n";
    for (const Row& row : rows) {
      for (size_t s = 0; s < args.solvers.size(); ++s) {
        table << row.instance << ',' << row.seed << ',' << args.solvers[s] << ','
              << format_double(row.ne[s]) << ',' << format_double(row.se[s]) << ','
              << format_double(row.ms[s]) << ','
              << (row.converged[s] ? "true" : "false") << '\n';
      }
    }
    table.close();
    fs::rename(tmp, table_path);
  }

  ProfileTable ne_table;
  ne_table.solvers = args.solvers;
  ProfileTable se_table;
  se_table.solvers = args.solvers;
  for (const Row& row : rows) {
    ne_table.values.push_back(row.ne);
    se_table.values.push_back(row.se);
  }
  write_profile(args.out_dir + "/profile_ne.csv", performance_profile(ne_table, true));
  write_profile(args.out_dir + "/profile_se.csv", performance_profile(se_table, false));

  std::cout << "benchmark table and profiles written to " << args.out_dir << "\n";
  return 0;
}

int run_decompose_export(const std::string& results_dir, const std::string& out_path) {
  std::vector<std::pair<std::string, std::string>> components;  // name, path
  for (int i = 1;; ++i) {
    const std::string path = results_dir + "/Z_" + std::to_string(i) + ".csv";
    if (!fs::exists(path)) break;
    components.emplace_back("Z_" + std::to_string(i), path);
  }
  std::vector<std::string> missing;
  if (components.empty()) missing.push_back("Z_1.csv");
  if (fs::exists(results_dir + "/E.csv")) {
    components.emplace_back("E", results_dir + "/E.csv");
  } else {
    missing.push_back("E.csv");
  }
  if (fs::exists(results_dir + "/Z_latent.csv")) {
    components.emplace_back("Z_latent", results_dir + "/Z_latent.csv");
  }
  if (!missing.empty()) {
    std::string joined;
    for (const auto& name : missing) joined += (joined.empty() ? "" : ", ") + name;
    throw IoError("missing components in " + results_dir + ": " + joined);
  }

  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << "i,j,value,component\n";
  for (const auto& [name, path] : components) {
    const Mat m = read_csv_matrix(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out << (i + 1) << ',' << (j + 1) << ',' << format_double(m(i, j)) << ',' << name
            << '\n';
      }
    }
  }
  std::cout << "long-format decomposition written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured-decomposition estimation of graphical and regression models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (INI-style, one section per subcommand)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  InstanceFlags sim_flags;
  std::string sim_out = "instance";
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic instance bundle");
  add_instance_flags(simulate, sim_flags);
  simulate->add_option("--out", sim_out, "Output directory")->default_val("instance");

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand("estimate", "Estimate a structured model");
  estimate->add_option("--input", est.input_dir, "Instance bundle directory");
  estimate->add_option("--samples", est.samples_path, "Observation matrix CSV (m x p)");
  estimate->add_option("--covariance", est.covariance_path, "Precomputed covariance CSV");
  estimate->add_option("--y", est.y_path, "Stacked response CSV (var model)");
  estimate->add_option("--x", est.x_path, "Stacked design CSV (var model)");
  estimate->add_option("--model", est.model, "gaussian | covariance | ising | latent | var")
      ->default_val("gaussian")
      ->check(CLI::IsMember({"gaussian", "covariance", "ising", "latent", "var"}));
  estimate->add_option("--out", est.out_dir, "Output directory")->default_val("results");
  estimate->add_option("--edge-threshold", est.edge_threshold, "Edge detection threshold")
      ->default_val(1e-4);
  add_penalty_flags(estimate, est.penalties);
  add_solver_flags(estimate, est.solver);

  BenchmarkArgs bench;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "Repeated-trial solver comparison with profiles");
  add_instance_flags(benchmark, bench.instance);
  benchmark->add_option("--repeats", bench.repeats, "Instances per configuration")
      ->default_val(10);
  benchmark->add_option("--solvers", bench.solvers,
                        "Solver configurations to compare (sson, lasso)");
  benchmark->add_option("--out", bench.out_dir, "Output directory")->default_val("benchmark");
  benchmark->add_option("--edge-threshold", bench.edge_threshold, "Edge detection threshold")
      ->default_val(1e-4);
  benchmark->add_option("--pool", bench.threads, "Instance worker pool size (0 = auto)")
      ->default_val(0);
  add_solver_flags(benchmark, bench.solver);

  std::string export_results = "results";
  std::string export_out = "decomposition.csv";
  CLI::App* export_cmd = app.add_subcommand(
      "decompose-export", "Concatenate components as a long-format (i,j,value,component) table");
  export_cmd->add_option("--results", export_results, "Estimation results directory")
      ->default_val("results");
  export_cmd->add_option("--out", export_out, "Output CSV path")
      ->default_val("decomposition.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_flags, sim_out);
    if (estimate->parsed()) return run_estimate(est);
    if (benchmark->parsed()) return run_benchmark(bench);
    if (export_cmd->parsed()) return run_decompose_export(export_results, export_out);
  } catch (const MonitorViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
