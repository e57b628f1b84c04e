#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

/// Geometric iteration plan: p = ceil(log2 T^beta), working dimensions
/// d_i = min(2^{p+2-i}, d) and lengths dT_i = min(2^{p+i}, T) for i = 1..p.
/// The vectors always carry all p planned iterations; execution stops
/// exactly at step T, so iterations past the boundary crossing never run.
struct Schedule {
  int p = 0;
  long long horizon = 0;
  std::vector<int> dims;
  std::vector<long long> lengths;
  std::vector<long long> boundaries;  // running sums of lengths

  /// Number of iterations that actually start before the horizon is hit.
  int executed_iterations() const;
};

Schedule build_schedule(long long T, double beta, int d);

/// Empirical sampling frequencies of one completed iteration, over the
/// K + j - 1 arm slots that were available in iteration j (real arms first,
/// then the earlier virtual arms). Frequencies are counts / delta_t.
struct VirtualMixtureArm {
  int iteration = 0;
  std::vector<double> frequencies;
  std::vector<long long> support_counts;
  long long delta_t = 0;

  int num_real_slots() const {
    return static_cast<int>(frequencies.size()) - (iteration - 1);
  }
};

VirtualMixtureArm finalize_mixture_arm(std::span<const long long> counts, long long delta_t,
                                       int iteration);

/// Lifted action matrix for iteration i: the K truncated real arms padded
/// with i-1 zeros, stacked over one unit-vector row per earlier virtual arm
/// (row K + j - 1 has a single 1 in column d_i + j - 1, zero-based).
struct ExtendedActionSet {
  Eigen::MatrixXd matrix;  // (K + i - 1) x (d_i + i - 1)
  int num_real = 0;        // K
  int working_dim = 0;     // d_i
  int iteration = 0;       // i

  bool is_virtual_row(int row) const { return row >= num_real; }
  int virtual_index(int row) const { return row - num_real + 1; }  // j for virtual rows
};

ExtendedActionSet extend_action_set(const ActionSet& actions, int d_i,
                                    std::span<const VirtualMixtureArm> virtual_arms);

/// Samples a slot from the mixture and chases virtual references through the
/// registry (iteration indices strictly decrease) until a real arm appears.
/// registry[j-1] must hold the mixture of iteration j for every j below the
/// arm's iteration.
int resolve_virtual_arm(const VirtualMixtureArm& arm,
                        std::span<const VirtualMixtureArm> registry, Rng& rng);

/// Exact distribution over real arms obtained by back-substituting every
/// virtual slot through the registry.
std::vector<double> flatten_virtual_arm(const VirtualMixtureArm& arm,
                                        std::span<const VirtualMixtureArm> registry);

struct IterationRecord {
  int index = 0;        // 1-based iteration number
  int working_dim = 0;  // d_i
  long long start = 0;  // global step of the first pull (0-based)
  long long length = 0; // executed steps
  double pseudo_regret_sum = 0.0;
  double mean_reward_sum = 0.0;  // sum of <theta*, resolved arm>
  bool completed = false;        // ran its full planned length
};

struct LinUcbPlusPlusOptions {
  double lambda = 0.1;
  double delta = -1.0;       // <= 0: per-iteration default dT_i^{-1/2}
  double norm_bonus = -1.0;  // < 0: default 2 ln T
  double width = -1.0;       // < 0: derive from confidence_width per iteration
};

struct LinUcbPlusPlusResult {
  RegretTrace trace;
  Schedule schedule;
  std::vector<VirtualMixtureArm> mixtures;   // finalized, iteration order
  std::vector<IterationRecord> iterations;
};

/// The full run loop: per iteration, LinUCB on the extended problem with the
/// enlarged-parameter bonus, real rows played directly and virtual rows
/// resolved through the registry; stops exactly at step T. Pseudo-regret is
/// always measured against the ambient best arm, so a non-expressive action
/// set simply runs in misspecified mode.
LinUcbPlusPlusResult run_linucb_plus_plus(const ActionSet& actions, const RewardModel& model,
                                          long long T, double beta, std::uint64_t seed,
                                          const LinUcbPlusPlusOptions& opts = {});

}  // namespace banditlab
