#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "banditlab/corral.hpp"
#include "banditlab/harness.hpp"
#include "banditlab/linucb_pp.hpp"
#include "banditlab/lowerbound.hpp"
#include "banditlab/policies.hpp"

namespace {

using namespace banditlab;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out;
  std::optional<int> parallelism;
  std::string format = "table";
  bool force = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Master seed (overrides the config)");
  cmd->add_option("--trials", flags.trials, "Trial count (overrides the config)");
  cmd->add_option("--out", flags.out, "Output path base (overrides the config)");
  cmd->add_option("--parallelism", flags.parallelism, "Concurrent trials (overrides the config)");
  cmd->add_option("--format", flags.format, "Export format")
      ->check(CLI::IsMember({"table", "plot"}));
  cmd->add_flag("--force", flags.force, "Overwrite existing output files");
}

ExperimentConfig apply_flags(ExperimentConfig cfg, const CommonFlags& flags) {
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.trials) cfg.trials = *flags.trials;
  if (flags.out) cfg.out = *flags.out;
  if (flags.parallelism) cfg.parallelism = *flags.parallelism;
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config_path, const CommonFlags& flags, bool sweep) {
  const ExperimentConfig cfg = apply_flags(load_config(config_path), flags);
  const AggregateResult result = sweep ? run_sweep(cfg) : run_experiment(cfg);
  const ExportFormat format =
      flags.format == "plot" ? ExportFormat::plot : ExportFormat::table;
  const std::string path = export_results(result, cfg.out, format, flags.force);
  std::cout << "wrote " << path << " (config " << result.config_hash << ")\n";
  if (!result.mean_regret.empty()) {
    for (std::size_t a = 0; a < result.algorithms.size(); ++a) {
      std::printf("%-16s terminal mean regret %10.3f (band %.3f)\n",
                  result.algorithms[a].c_str(), result.mean_regret[a].back(),
                  result.band_halfwidth[a].back());
    }
  } else {
    for (const SweepRow& row : result.sweep) {
      std::printf("%-16s d*=%-4d alpha=%.3f terminal mean regret %10.3f (band %.3f)\n",
                  row.algorithm.c_str(), row.d_star, row.alpha, row.mean_terminal,
                  row.band_halfwidth);
    }
  }
  return 0;
}

int cmd_rates(double beta, const std::string& grid_arg, const std::string& out_path, bool force) {
  std::vector<double> grid;
  if (grid_arg.empty()) {
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  } else {
    std::stringstream ss(grid_arg);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  }

  const RateFunction frontier = pareto_rate_function(beta);
  std::ostringstream out;
  out << "# rate frontier, " << frontier.label << "\n";
  out << "alpha,rate,lower_bound\n";
  for (double alpha : grid) {
    char line[128];
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", alpha, frontier(alpha),
                  rate_lower_bound(beta, alpha));
    out << line;
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    if (!force && std::ifstream(out_path).good()) {
      std::cerr << "error: '" << out_path << "' exists; pass --force to overwrite\n";
      return 1;
    }
    std::ofstream file(out_path, std::ios::binary);
    file << out.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_lowerbound(long long T, double alpha_prime, double alpha, double budget, bool expressive,
                   int theta0_coord, const std::string& out_path, bool force) {
  const AdversarialFamily family =
      build_adversarial_family(T, alpha_prime, alpha, budget, expressive, theta0_coord);
  std::printf("family: K=%lld  delta=%.10g  dim=%d  rho(1)=%lld\n",
              family.K, family.delta, family.dim, family.rho_offset + 1);
  std::printf("regret floor over the harder family: %.10g\n", regret_floor(T, alpha, budget));
  if (!out_path.empty()) {
    if (!force && std::ifstream(out_path).good()) {
      std::cerr << "error: '" << out_path << "' exists; pass --force to overwrite\n";
      return 1;
    }
    std::ofstream file(out_path, std::ios::binary);
    export_family(family, file);
    std::cout << "wrote " << out_path << "\n";
  } else {
    export_family(family, std::cout);
  }
  return 0;
}

bool report(const char* name, bool ok) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

// Compact self-check of the library's key identities; the full suites live
// in the test binaries.
int cmd_verify() {
  bool all = true;

  {
    bool ok = true;
    Rng rng(7);
    for (int n = 0; n < 200 && ok; ++n) {
      const long long T = 2 + static_cast<long long>(rng.uniform() * 999998.0);
      const double beta = 0.5 + 0.49 * rng.uniform();
      const Schedule s = build_schedule(T, beta, 500);
      long long total = 0;
      for (long long len : s.lengths) total += len;
      ok = total >= T && s.p == static_cast<int>(std::ceil(beta * std::log2(double(T))));
    }
    const Schedule s = build_schedule(2500, 0.5, 500);
    ok = ok && s.p == 6 && s.dims == std::vector<int>{128, 64, 32, 16, 8, 4} &&
         s.lengths == std::vector<long long>{128, 256, 512, 1024, 2048, 2500};
    all &= report("schedule formulas and horizon coverage", ok);
  }

  {
    bool ok = true;
    Rng rng(11);
    for (int rep = 0; rep < 20 && ok; ++rep) {
      const int m = 2 + static_cast<int>(rng.uniform() * 10);
      RidgeState state = RidgeState::make(m, 0.1);
      Eigen::MatrixXd gram = 0.1 * Eigen::MatrixXd::Identity(m, m);
      Eigen::VectorXd moment = Eigen::VectorXd::Zero(m);
      for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd arm(m);
        for (int c = 0; c < m; ++c) arm[c] = rng.gauss();
        arm /= std::max(1.0, arm.norm() * (1.0 + 1e-12));
        const double reward = rng.gauss();
        ridge_update(state, arm, reward);
        gram += arm * arm.transpose();
        moment += reward * arm;
      }
      const Eigen::VectorXd direct = gram.ldlt().solve(moment);
      ok = (state.theta_hat - direct).norm() <= 1e-8 * std::max(1.0, direct.norm());
    }
    all &= report("incremental ridge matches dense solve", ok);
  }

  {
    Rng rng(3);
    const ActionSet a = sample_sphere_arms(25, 40, rng);
    bool ok = true;
    for (int k = 0; k < a.num_arms(); ++k) {
      ok = ok && std::abs(a.arms().row(k).norm() - 1.0) <= 1e-12;
    }
    all &= report("sphere sampling produces unit arms", ok);
  }

  {
    bool ok = true;
    for (int g = 0; g < 10 && ok; ++g) {
      const double mu1 = -1.0 + 0.2 * g;
      const double mu2 = 0.7 - 0.15 * g;
      // Simpson quadrature of the divergence integrand for N(mu, 1/4).
      const double sigma2 = 0.25;
      const double lo = mu1 - 8.0, hi = mu1 + 8.0;
      const int n = 4000;
      const double h = (hi - lo) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double x = lo + h * i;
        const double p = std::exp(-(x - mu1) * (x - mu1) / (2 * sigma2));
        const double logratio =
            (-(x - mu1) * (x - mu1) + (x - mu2) * (x - mu2)) / (2 * sigma2);
        const double f = p / std::sqrt(2 * M_PI * sigma2) * logratio;
        acc += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
      }
      acc *= h / 3.0;
      ok = std::abs(acc - gaussian_kl(mu1, mu2)) < 1e-6;
    }
    all &= report("closed-form divergence matches quadrature", ok);
  }

  {
    const AdversarialFamily fam = build_adversarial_family(2500, 0.0, 0.5, 50.0);
    bool ok = fam.K == 25 && std::abs(fam.delta - 0.015625) < 1e-15;
    const double floor = regret_floor(2500, 0.5, 50.0);
    ok = ok && std::abs(floor - std::pow(2500.0, 1.5) / (1024.0 * 50.0)) < 1e-9 * floor;
    all &= report("adversarial family constants and regret floor", ok);
  }

  {
    const RateFunction a = pareto_rate_function(0.5);
    const RateFunction b = pareto_rate_function(0.7);
    const std::vector<double> grid{0.0, 0.4};
    const bool ok = compare_rates(a, b, grid) == RateOrder::incomparable;
    all &= report("frontier curves pairwise incomparable", ok);
  }

  {
    ExperimentConfig cfg;
    cfg.T = 220;
    cfg.K = 30;
    cfg.d = 16;
    cfg.d_star = {4};
    cfg.trials = 2;
    cfg.algorithms = {"linucb++", "linucb"};
    const AggregateResult r1 = run_experiment(cfg);
    const AggregateResult r2 = run_experiment(cfg);
    all &= report("seeded experiment reruns byte-identical",
                  render_table(r1) == render_table(r2));
  }

  std::printf("%s\n", all ? "verify: all checks passed" : "verify: FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banditlab: linear-bandit model-selection simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  CommonFlags run_flags, sweep_flags;
  CLI::App* run = app.add_subcommand("run", "Run the configured experiment (regret curves)");
  run->add_option("config", config_path, "Config file (key = value lines)")->required();
  add_common(run, run_flags);

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep d_star values (terminal regret table)");
  sweep->add_option("config", config_path, "Config file (key = value lines)")->required();
  add_common(sweep, sweep_flags);

  double beta = 0.5;
  std::string grid_arg, rates_out;
  bool rates_force = false;
  CLI::App* rates = app.add_subcommand("rates", "Print the rate frontier table");
  rates->add_option("--beta", beta, "Frontier parameter in [1/2, 1)")->required();
  rates->add_option("--grid", grid_arg, "Comma-separated hardness levels (default 0..1 by 0.05)");
  rates->add_option("--out", rates_out, "Write the table to a file instead of stdout");
  rates->add_flag("--force", rates_force, "Overwrite an existing output file");

  long long lb_T = 2500;
  double lb_alpha_prime = 0.0, lb_alpha = 0.5, lb_budget = 50.0;
  bool lb_expressive = false, lb_force = false;
  int lb_coord = 1;
  std::string lb_out;
  CLI::App* lower = app.add_subcommand("lowerbound", "Export the adversarial instance family");
  lower->add_option("--horizon", lb_T, "Time horizon T")->required();
  lower->add_option("--alpha-prime", lb_alpha_prime, "Easier hardness level");
  lower->add_option("--alpha", lb_alpha, "Harder hardness level")->required();
  lower->add_option("--budget", lb_budget, "Regret budget B on the easier family")->required();
  lower->add_flag("--expressive", lb_expressive, "Append the all-zero action");
  lower->add_option("--theta0-coord", lb_coord, "Support coordinate of the easy instance");
  lower->add_option("--out", lb_out, "Write the family to a file instead of stdout");
  lower->add_flag("--force", lb_force, "Overwrite an existing output file");

  CLI::App* verify = app.add_subcommand("verify", "Run the built-in property checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, run_flags, false);
    if (sweep->parsed()) return cmd_run(config_path, sweep_flags, true);
    if (rates->parsed()) return cmd_rates(beta, grid_arg, rates_out, rates_force);
    if (lower->parsed()) {
      return cmd_lowerbound(lb_T, lb_alpha_prime, lb_alpha, lb_budget, lb_expressive, lb_coord,
                            lb_out, lb_force);
    }
    if (verify->parsed()) return cmd_verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
