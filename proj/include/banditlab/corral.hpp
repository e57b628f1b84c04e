#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/linucb_pp.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

/// Master state of the corralling algorithm: a simplex over the bases,
/// per-base mirror-descent step sizes with their smoothing thresholds, and
/// importance-weighted loss accumulators for audit. Mixing with the uniform
/// distribution keeps every probability at or above floor_prob = 1/(2 M T).
struct CorralState {
  Eigen::VectorXd probabilities;
  Eigen::VectorXd step_sizes;
  Eigen::VectorXd thresholds;
  Eigen::VectorXd loss_sums;
  double eta = 0.0;        // master learning rate
  double mix = 0.0;        // uniform-mixing weight per step
  double floor_prob = 0.0; // mix / M
  long long t = 0;

  static CorralState make(int num_bases, double eta, long long horizon);
};

/// One played slot: `slot` is the index in the iteration's arm layout (real
/// arms first, virtual arms after) and `real_arm` the resolved real arm.
/// They coincide for direct plays.
struct BasePlay {
  int slot;
  int real_arm;
};

/// A base learner under the corral master. Each select/observe pair is one
/// internal round of the base; bases never see other bases' pulls.
class CorralBase {
 public:
  virtual ~CorralBase() = default;
  virtual BasePlay select(Rng& rng) = 0;
  virtual void observe(const BasePlay& play, double reward) = 0;
};

/// LinUCB on arm features truncated to `dim` coordinates. When `smoothed`
/// is set, each round plays a slot drawn uniformly from the base's own past
/// plays plus its current recommendation, which keeps the conditional
/// per-round regret stable when the master starves the base (at the price
/// of roughly doubling the base's own regret).
class LinUcbCorralBase : public CorralBase {
 public:
  LinUcbCorralBase(const ActionSet& actions, int dim, double lambda, double width,
                   bool smoothed);

  BasePlay select(Rng& rng) override;
  void observe(const BasePlay& play, double reward) override;

  const LinUcbRunner& runner() const { return runner_; }

 private:
  LinUcbRunner runner_;
  bool smoothed_;
  std::vector<int> history_;  // arms this base has played
};

/// UCB over the virtual mixture-arms of earlier iterations. Selection
/// resolves the chosen virtual arm to a real arm through the registry;
/// smoothing replays a uniformly random past virtual choice with a fresh
/// resolution.
class VirtualUcbCorralBase : public CorralBase {
 public:
  VirtualUcbCorralBase(const std::vector<VirtualMixtureArm>& registry, int num_real,
                       bool smoothed, double scale = 2.0);

  BasePlay select(Rng& rng) override;
  void observe(const BasePlay& play, double reward) override;

  const UcbState& ucb() const { return ucb_; }

 private:
  const std::vector<VirtualMixtureArm>* registry_;
  int num_real_;
  bool smoothed_;
  UcbState ucb_;
  std::vector<int> history_;  // virtual-arm indices this base has played
  long long rounds_ = 0;
};

/// Log-barrier mirror-descent step on the simplex: returns the probability
/// vector p' with 1/p'_i = 1/p_i + eta_i (loss_i - lambda), where lambda
/// normalizes p' to the simplex.
Eigen::VectorXd log_barrier_omd(const Eigen::VectorXd& probabilities,
                                const Eigen::VectorXd& losses,
                                const Eigen::VectorXd& step_sizes);

struct CorralStepOutcome {
  int base;
  int slot;
  int real_arm;
  double reward;
};

/// One master round: sample a base, play it, feed the observation back to
/// the chosen base, then update the simplex from the importance-weighted
/// loss (1 - reward)/2 clipped to [0, 1]. Throws std::runtime_error if the
/// simplex leaves its invariants.
CorralStepOutcome corral_step(CorralState& state, std::span<CorralBase* const> bases,
                              const std::function<double(int real_arm)>& env_pull, Rng& rng);

struct SmoothCorralResult {
  RegretTrace trace;
  CorralState state;                 // terminal master state
  std::vector<int> base_choices;     // chosen base per step
};

/// Standalone comparator: one truncated-dimension LinUCB base per entry of
/// base_dims (smoothed whenever there is more than one), corralled for T
/// steps. A nonnegative `width` overrides the confidence-width formula for
/// every base.
SmoothCorralResult run_smooth_corral(const ActionSet& actions, const RewardModel& model,
                                     long long T, double eta, std::span<const int> base_dims,
                                     std::uint64_t seed, double lambda = 0.1,
                                     double width = -1.0);

struct CorralScheduleResult {
  RegretTrace trace;
  Schedule schedule;
  std::vector<VirtualMixtureArm> mixtures;
  std::vector<double> etas;  // per-iteration master learning rate
};

/// Expressiveness-free variant of the iteration schedule: per iteration,
/// Smooth Corral over a truncated LinUCB base and (from iteration 2 on) a
/// UCB base over the existing virtual mixture-arms, with the master tuned
/// for the LinUCB base: eta_i = 1/sqrt(d_i * dT_i).
CorralScheduleResult run_corral_within_schedule(const ActionSet& actions,
                                                const RewardModel& model, long long T,
                                                double beta, std::uint64_t seed,
                                                double lambda = 0.1, double width = -1.0);

}  // namespace banditlab
