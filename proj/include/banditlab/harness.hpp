#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

/// Flat experiment description. The config-file keys mirror the field names;
/// unknown keys are rejected.
struct ExperimentConfig {
  long long T = 2500;
  int K = 1000;
  int d = 500;
  std::vector<int> d_star = {12};
  double noise_std = 0.1;
  double lambda = 0.1;
  double beta = 0.5;
  std::string eta = "sqrt-mt";  // "sqrt-mt" | "t-beta" | positive number
  std::string width = "1";      // "auto" (confidence-width formulas) | number
  int trials = 20;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms = {"linucb++", "linucb", "linucb-oracle", "smooth-corral"};
  bool expressive = false;
  std::string out = "results";
  int parallelism = 1;

  void validate() const;
  std::string canonical_text() const;
  std::string hash() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct SweepRow {
  std::string algorithm;
  int d_star;
  double alpha;          // hardness level log_T(d_star)
  double mean_terminal;
  double band_halfwidth;
};

/// Aggregated output: per-step mean cumulative regret and the 2-standard-
/// deviation band per algorithm, plus per-hardness terminal rows for sweeps.
struct AggregateResult {
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> mean_regret;     // [algorithm][step]
  std::vector<std::vector<double>> band_halfwidth;  // [algorithm][step]
  std::vector<SweepRow> sweep;
  std::string config_hash;
  std::uint64_t seed = 0;
  int trials = 0;
};

/// K arms drawn isotropically and normalized onto the unit sphere.
ActionSet sample_sphere_arms(int d, int K, Rng& rng);

/// Reward parameter [1/sqrt(d_star), ..., 1/sqrt(d_star), 0, ..., 0].
RewardModel make_paper_model(int d, int d_star, double noise_std = 0.1);

struct Aggregate {
  std::vector<double> mean;
  std::vector<double> band;  // 2 x sample standard deviation (n-1 denominator)
};

/// Per-step mean and 2-sigma band of the cumulative regret across traces.
/// All traces must share one length; a single trace yields zero-width bands.
Aggregate aggregate_trials(std::span<const RegretTrace> traces);

using AlgorithmFn = std::function<RegretTrace(const ActionSet&, const RewardModel&,
                                              const ExperimentConfig&, std::uint64_t trial_seed)>;
using AlgorithmRegistry = std::map<std::string, AlgorithmFn>;

const AlgorithmRegistry& default_registry();

/// Base dimensions {1, 2, 4, ...} capped at d for the standalone corral.
std::vector<int> smooth_corral_base_dims(int d);

/// Master learning rate from the config rule: 1/sqrt(M T) with
/// M = ceil(log2 d), T^{-beta}, or an explicit positive number.
double resolve_eta(const ExperimentConfig& cfg);

/// Exploration width from the config rule: -1 for "auto" (every learner
/// applies its confidence-width formula, with the enlarged-parameter bonus
/// on the lifted problems), or the explicit nonnegative constant that
/// replaces both.
double resolve_width(const ExperimentConfig& cfg);

/// Seeded multi-trial run of every configured algorithm on per-trial fresh
/// arms with a shared (step, arm)-indexed noise stream. Trials execute
/// concurrently up to cfg.parallelism; results are aggregated in trial
/// order. On any trial failure, completed trials are persisted next to
/// cfg.out and the error names the trial and algorithm.
AggregateResult run_experiment(const ExperimentConfig& cfg);
AggregateResult run_experiment(const ExperimentConfig& cfg, const AlgorithmRegistry& registry);

/// Terminal-regret sweep over the configured d_star grid.
AggregateResult run_sweep(const ExperimentConfig& cfg);
AggregateResult run_sweep(const ExperimentConfig& cfg, const AlgorithmRegistry& registry);

enum class ExportFormat { table, plot };

/// Delimited-text form of the result (curve or sweep schema), with the
/// config hash embedded in the leading comment block.
std::string render_table(const AggregateResult& result);

/// Writes the result to `<path_base>.csv`/`.svg` (curves) or
/// `<path_base>_sweep.csv`/`.svg` (sweep rows), embedding the config hash.
/// Refuses to overwrite an existing file unless `force` is set. Returns the
/// path written.
std::string export_results(const AggregateResult& result, const std::string& path_base,
                           ExportFormat format, bool force = false);

/// Reads a table written by export_results back into an AggregateResult.
AggregateResult import_table(const std::string& path);

std::string render_curves_svg(const AggregateResult& result);
std::string render_sweep_svg(const AggregateResult& result);

}  // namespace banditlab
