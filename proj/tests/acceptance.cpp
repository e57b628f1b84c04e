#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "banditlab/corral.hpp"
#include "banditlab/harness.hpp"
#include "banditlab/linucb_pp.hpp"
#include "banditlab/lowerbound.hpp"
#include "banditlab/policies.hpp"

using namespace banditlab;

// Accumulates a criterion verdict while still reporting each sub-condition.
#define ACCEPT(cond)            \
  do {                          \
    const bool accept_c = (cond); \
    CHECK(accept_c);            \
    ok = ok && accept_c;        \
  } while (0)

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void announce(int index, const char* name, bool ok, double seconds) {
  std::printf("[criterion %02d] %s: %s (%.1fs)\n", index, ok ? "PASS" : "FAIL", name, seconds);
  std::fflush(stdout);
}

void parallel_trials(int trials, const std::function<void(int)>& fn) {
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = std::max(1u, std::min(2u, std::thread::hardware_concurrency()));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

ExperimentConfig fig2a_full() {
  ExperimentConfig cfg;
  cfg.T = 2500;
  cfg.K = 1000;
  cfg.d = 500;
  cfg.d_star = {12};
  cfg.noise_std = 0.1;
  cfg.lambda = 0.1;
  cfg.beta = 0.5;
  cfg.eta = "sqrt-mt";  // 1/sqrt(9 * 2500) at d = 500
  cfg.trials = 20;
  cfg.seed = 20250810;
  cfg.algorithms = {"linucb++", "linucb", "smooth-corral"};
  cfg.parallelism = 2;
  return cfg;
}

ExperimentConfig fig2a_fast() {
  ExperimentConfig cfg = fig2a_full();
  cfg.T = 2000;
  cfg.K = 300;
  cfg.d = 200;
  cfg.trials = 10;
  return cfg;
}

std::string temp_base(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / "banditlab_acceptance";
  std::filesystem::create_directories(dir);
  return (dir / tag).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct OrderingChecks {
  double pp_terminal;
  double linucb_terminal;
  double corral_terminal;
  double pp_tail_increment;
  double linucb_tail_increment;
};

OrderingChecks fig2a_orderings(const ExperimentConfig& cfg) {
  const AggregateResult result = run_experiment(cfg);
  OrderingChecks out{};
  const long long tail = 500;
  for (std::size_t a = 0; a < result.algorithms.size(); ++a) {
    const auto& mean = result.mean_regret[a];
    const double terminal = mean.back();
    const double increment = mean.back() - mean[mean.size() - 1 - tail];
    if (result.algorithms[a] == "linucb++") {
      out.pp_terminal = terminal;
      out.pp_tail_increment = increment;
    } else if (result.algorithms[a] == "linucb") {
      out.linucb_terminal = terminal;
      out.linucb_tail_increment = increment;
    } else if (result.algorithms[a] == "smooth-corral") {
      out.corral_terminal = terminal;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("criterion 01: schedule validity on sampled horizons") {
  Stopwatch watch;
  bool ok = true;

  Rng rng(1001);
  for (int rep = 0; rep < 1000; ++rep) {
    const long long T =
        2 + static_cast<long long>(std::floor(std::pow(10.0, rng.uniform() * 6.0))) % 999999;
    const double beta = 0.5 + 0.49 * rng.uniform();
    const int d = 1 + static_cast<int>(rng.uniform() * 2000);
    const Schedule s = build_schedule(T, beta, d);

    // Independent recomputation: p is the least integer with 2^p >= T^beta.
    const double t_beta = std::pow(static_cast<double>(T), beta);
    bool formulas = std::pow(2.0, s.p) >= t_beta * (1.0 - 1e-12) &&
                    std::pow(2.0, s.p - 1) < t_beta * (1.0 + 1e-12);
    long long total = 0;
    for (int i = 1; i <= s.p; ++i) {
      formulas = formulas && s.dims[i - 1] == std::min<long long>(1LL << (s.p + 2 - i), d);
      formulas = formulas && s.lengths[i - 1] == std::min<long long>(1LL << (s.p + i), T);
      total += s.lengths[i - 1];
    }
    ok = ok && formulas && total >= T;
  }
  CHECK(ok);

  const Schedule pinned = build_schedule(2500, 0.5, 500);
  ACCEPT(pinned.p == 6);
  ACCEPT((pinned.dims == std::vector<int>{128, 64, 32, 16, 8, 4}));
  ACCEPT((pinned.lengths == std::vector<long long>{128, 256, 512, 1024, 2048, 2500}));

  announce(1, "schedule validity on sampled horizons", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 02: incremental ridge matches the dense-solve oracle") {
  Stopwatch watch;
  bool ok = true;

  Rng rng(1002);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 1 + static_cast<int>(rng.uniform() * 20);
    const int steps = 1 + static_cast<int>(rng.uniform() * 200);
    const double lambda = 0.05 + rng.uniform();
    RidgeState state = RidgeState::make(m, lambda);
    Eigen::MatrixXd gram = lambda * Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd moment = Eigen::VectorXd::Zero(m);
    for (int t = 0; t < steps; ++t) {
      Eigen::VectorXd arm(m);
      for (int c = 0; c < m; ++c) arm[c] = rng.gauss();
      const double norm = arm.norm();
      if (norm > 1.0) arm *= rng.uniform() / norm;
      const double reward = rng.gauss();
      ridge_update(state, arm, reward);
      gram += arm * arm.transpose();
      moment += reward * arm;
    }
    const Eigen::VectorXd direct = gram.ldlt().solve(moment);
    ok = ok && (state.theta_hat - direct).norm() <= 1e-8 * std::max(1.0, direct.norm());
  }
  CHECK(ok);

  announce(2, "incremental ridge matches the dense-solve oracle", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 03: mixture-arm mean identity under replay") {
  Stopwatch watch;
  bool ok = true;

  Rng rng(1003);
  const ActionSet actions = sample_sphere_arms(64, 50, rng);
  const RewardModel model = make_paper_model(64, 6, 0.1);
  const LinUcbPlusPlusResult run = run_linucb_plus_plus(actions, model, 1200, 0.5, 4242);
  const Environment env(actions, model, 0);

  REQUIRE(!run.mixtures.empty());
  const int j = static_cast<int>(run.mixtures.size());  // last completed iteration
  const VirtualMixtureArm& mix = run.mixtures[j - 1];
  const IterationRecord& rec = run.iterations[j - 1];
  REQUIRE(rec.completed);

  const double recorded_avg = rec.mean_reward_sum / static_cast<double>(rec.length);

  const int draws = 100000;
  double mc_sum = 0.0, mc_sq = 0.0;
  Rng replay_rng(991);
  for (int i = 0; i < draws; ++i) {
    const double v = env.mean(resolve_virtual_arm(mix, run.mixtures, replay_rng));
    mc_sum += v;
    mc_sq += v * v;
  }
  const double mc_mean = mc_sum / draws;
  const double mc_var = std::max(0.0, mc_sq / draws - mc_mean * mc_mean);

  // The recorded average itself fluctuates through the resolution chains of
  // the virtual slots played inside the iteration; fold that variance into
  // the standard error of the difference.
  double chain_var = 0.0;
  for (std::size_t s = static_cast<std::size_t>(mix.num_real_slots());
       s < mix.frequencies.size(); ++s) {
    const long long pulls = mix.support_counts[s];
    if (pulls == 0) continue;
    const int inner = static_cast<int>(s) - mix.num_real_slots() + 1;
    const std::vector<double> flat = flatten_virtual_arm(run.mixtures[inner - 1], run.mixtures);
    double mean_inner = 0.0, second = 0.0;
    for (int a = 0; a < actions.num_arms(); ++a) {
      mean_inner += flat[a] * env.mean(a);
      second += flat[a] * env.mean(a) * env.mean(a);
    }
    const double var_inner = std::max(0.0, second - mean_inner * mean_inner);
    const double weight = mix.frequencies[s];
    chain_var += weight * weight * var_inner / static_cast<double>(pulls);
  }

  const double se = std::sqrt(mc_var / draws + chain_var) + 1e-12;
  ACCEPT(std::abs(mc_mean - recorded_avg) <= 4.0 * se);

  announce(3, "mixture-arm mean identity under replay", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 04: divergence identity (quadrature and trace audit)") {
  Stopwatch watch;
  bool ok = true;

  // 20 x 20 grid of means, quadrature against the closed form.
  const double sigma2 = 0.25;
  for (int i = 0; i < 20; ++i) {
    for (int k = 0; k < 20; ++k) {
      const double mu1 = -1.0 + 2.0 * i / 19.0;
      const double mu2 = -1.0 + 2.0 * k / 19.0;
      const double lo = mu1 - 8.0, hi = mu1 + 8.0;
      const int n = 2000;
      const double h = (hi - lo) / n;
      double acc = 0.0;
      for (int q = 0; q <= n; ++q) {
        const double x = lo + h * q;
        const double p = std::exp(-(x - mu1) * (x - mu1) / (2 * sigma2)) /
                         std::sqrt(2 * M_PI * sigma2);
        const double log_ratio =
            (-(x - mu1) * (x - mu1) + (x - mu2) * (x - mu2)) / (2 * sigma2);
        acc += p * log_ratio * ((q == 0 || q == n) ? 1.0 : (q % 2 ? 4.0 : 2.0));
      }
      acc *= h / 3.0;
      ok = ok && std::abs(acc - gaussian_kl(mu1, mu2)) < 1e-6;
    }
  }
  CHECK(ok);

  // 50 simulated traces under the easy instance.
  Rng rng(1004);
  for (int rep = 0; rep < 50; ++rep) {
    const AdversarialFamily fam = build_adversarial_family(700, 0.1, 0.6, 60.0, rep % 2 == 0);
    const Environment env(fam.actions(), fam.model(0), 500 + rep);
    Rng policy(900 + rep);
    RegretTrace trace;
    for (int t = 0; t < 350; ++t) {
      const int arm = static_cast<int>(policy.uniform() * fam.num_actions());
      trace.add(arm, env.pull(t, arm), env.gap(arm));
    }
    const int instance = 1 + static_cast<int>(policy.uniform() * fam.K);
    const KlAuditResult audit = kl_decomposition_audit(trace, fam, instance);
    ok = ok && std::abs(audit.per_step_sum - audit.pull_count_form) <=
                   1e-12 * std::max(1.0, audit.pull_count_form);
  }
  CHECK(ok);

  announce(4, "divergence identity (quadrature and trace audit)", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 05: adversarial family validity and regret floor") {
  Stopwatch watch;
  bool ok = true;

  Rng rng(1005);
  int built = 0;
  while (built < 50) {
    const long long T = 60 + static_cast<long long>(rng.uniform() * 2700);
    const double alpha = 0.35 + 0.45 * rng.uniform();
    const double alpha_prime = rng.uniform() * 0.6 * alpha;
    const double t_alpha = std::pow(static_cast<double>(T), alpha);
    const double B = t_alpha * (1.0 + 2.0 * rng.uniform());
    const long long K = static_cast<long long>(std::floor(t_alpha / 2.0));
    if (K < 2 || K < t_alpha / 4.0 || K < std::pow(static_cast<double>(T), alpha_prime)) continue;
    ++built;

    const AdversarialFamily fam =
        build_adversarial_family(T, alpha_prime, alpha, B, built % 2 == 0);
    ok = ok && fam.delta == std::ldexp(static_cast<double>(fam.K) / B, -5);
    ok = ok && fam.delta <= std::ldexp(1.0, -5) + 1e-15;
    ok = ok && fam.dim >= static_cast<int>(t_alpha) && fam.dim >= 2 * fam.K;
    for (const auto& theta : fam.thetas) {
      ok = ok && theta.norm() <= 1.0 && theta.norm() <= std::sqrt(5.0) * fam.delta / 2.0 + 1e-12;
    }
    for (int a = 0; a < fam.num_actions(); ++a) {
      ok = ok && fam.action_matrix.row(a).norm() <= 1.0 + 1e-12;
    }
    // Support of theta_0 sits below every planted coordinate.
    const Eigen::VectorXd means0 = fam.action_matrix * fam.thetas[0];
    for (int i = 1; i <= fam.K; ++i) ok = ok && means0[i] == 0.0;
    // Spot-check gaps on one instance.
    const int probe = 1 + static_cast<int>(rng.uniform() * fam.K);
    const BestArm best = best_arm_and_gap(fam.actions(), fam.model(probe));
    ok = ok && best.index == probe &&
         std::abs(best.gaps[0] - fam.delta / 2.0) <= 1e-12;
  }
  CHECK(ok);

  const double floor = regret_floor(2500, 0.5, 50.0);
  const double expected = std::ldexp(std::pow(2500.0, 1.5) / 50.0, -10);
  ACCEPT(std::abs(floor - expected) <= 1e-9 * expected);

  announce(5, "adversarial family validity and regret floor", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 06: frontier incomparability at beta 0.5 vs 0.7") {
  Stopwatch watch;
  bool ok = true;

  const RateFunction half = pareto_rate_function(0.5);
  const RateFunction seven = pareto_rate_function(0.7);
  ACCEPT(half(0.0) == 0.5);
  ACCEPT(half(0.0) < 0.7);
  ACCEPT(half(0.4) == doctest::Approx(0.9).epsilon(1e-15));
  ACCEPT(half(0.4) > 0.7);
  ACCEPT(seven(0.0) == 0.7);
  ACCEPT(seven(0.4) == doctest::Approx(0.7).epsilon(1e-15));

  const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  ACCEPT(compare_rates(half, seven, grid) == RateOrder::incomparable);

  announce(6, "frontier incomparability at beta 0.5 vs 0.7", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 07: regret ordering at the reference configuration") {
  Stopwatch watch;
  bool ok = true;

  const OrderingChecks fast = fig2a_orderings(fig2a_fast());
  ACCEPT(fast.pp_terminal < fast.linucb_terminal);
  ACCEPT(fast.pp_terminal < fast.corral_terminal);
  ACCEPT(fast.pp_tail_increment < fast.linucb_tail_increment);
  std::printf("  fast mode: linucb++ %.1f, linucb %.1f, smooth-corral %.1f; tail %.1f vs %.1f\n",
              fast.pp_terminal, fast.linucb_terminal, fast.corral_terminal,
              fast.pp_tail_increment, fast.linucb_tail_increment);

  const OrderingChecks full = fig2a_orderings(fig2a_full());
  ACCEPT(full.pp_terminal < full.linucb_terminal);
  ACCEPT(full.pp_terminal < full.corral_terminal);
  ACCEPT(full.pp_tail_increment < full.linucb_tail_increment);
  std::printf("  full mode: linucb++ %.1f, linucb %.1f, smooth-corral %.1f; tail %.1f vs %.1f\n",
              full.pp_terminal, full.linucb_terminal, full.corral_terminal,
              full.pp_tail_increment, full.linucb_tail_increment);

  announce(7, "regret ordering at the reference configuration", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 08: sweep keeps linucb flat and linucb++ below it") {
  Stopwatch watch;
  bool ok = true;

  ExperimentConfig cfg = fig2a_full();
  cfg.d_star = {5, 15, 25, 35};
  cfg.trials = 10;
  cfg.algorithms = {"linucb++", "linucb"};
  const AggregateResult sweep = run_sweep(cfg);

  double linucb_min = 1e300, linucb_max = 0.0;
  for (const SweepRow& row : sweep.sweep) {
    if (row.algorithm != "linucb") continue;
    linucb_min = std::min(linucb_min, row.mean_terminal);
    linucb_max = std::max(linucb_max, row.mean_terminal);
  }
  std::printf("  linucb terminal range over d*: [%.1f, %.1f]\n", linucb_min, linucb_max);
  ACCEPT((linucb_max - linucb_min) / linucb_max < 0.15);

  for (int ds : cfg.d_star) {
    double pp = 0.0, lin = 0.0;
    for (const SweepRow& row : sweep.sweep) {
      if (row.d_star != ds) continue;
      if (row.algorithm == "linucb++") pp = row.mean_terminal;
      if (row.algorithm == "linucb") lin = row.mean_terminal;
    }
    std::printf("  d*=%d: linucb++ %.1f vs linucb %.1f\n", ds, pp, lin);
    ACCEPT(pp < lin);
  }

  announce(8, "sweep keeps linucb flat and linucb++ below it", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 09: known intrinsic dimension beats the ambient run") {
  Stopwatch watch;
  bool ok = true;

  const ExperimentConfig cfg = fig2a_full();
  const int trials = 20;
  std::vector<double> ambient(trials), oracle(trials);
  parallel_trials(trials, [&](int trial) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng arms_rng(mix_seed(trial_seed, kArmsStream));
    const ActionSet arms = sample_sphere_arms(cfg.d, cfg.K, arms_rng);
    const RewardModel model = make_paper_model(cfg.d, 12, cfg.noise_std);

    LinUcbRunOptions opts;
    opts.lambda = cfg.lambda;
    opts.width = resolve_width(cfg);
    ambient[trial] = run_linucb(arms, model, cfg.T, trial_seed, opts).total();
    opts.working_dim = 12;
    oracle[trial] = run_linucb(arms, model, cfg.T, trial_seed, opts).total();
  });

  int wins = 0;
  for (int trial = 0; trial < trials; ++trial) {
    if (oracle[trial] < ambient[trial]) ++wins;
  }
  std::printf("  oracle wins %d/%d paired trials\n", wins, trials);
  ACCEPT(wins >= 16);

  announce(9, "known intrinsic dimension beats the ambient run", ok, watch.seconds());
  REQUIRE(ok);
}

TEST_CASE("criterion 10: repeated fast-mode runs export identical bytes") {
  Stopwatch watch;
  bool ok = true;

  ExperimentConfig cfg = fig2a_fast();
  const AggregateResult first = run_experiment(cfg);
  const AggregateResult second = run_experiment(cfg);

  const std::string path_a = export_results(first, temp_base("repeat_a"), ExportFormat::table, true);
  const std::string path_b =
      export_results(second, temp_base("repeat_b"), ExportFormat::table, true);
  ACCEPT(slurp(path_a) == slurp(path_b));
  ACCEPT(!slurp(path_a).empty());

  announce(10, "repeated fast-mode runs export identical bytes", ok, watch.seconds());
  REQUIRE(ok);
}
