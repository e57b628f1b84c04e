#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "banditlab/core.hpp"

namespace banditlab {

/// Ridge-regression state for a linear bandit learner in dimension `dim`.
/// `gram_inverse` tracks V_t^{-1} with V_t = lambda*I + sum_s A_s A_s^T and
/// stays symmetric positive definite; `theta_hat` is V_t^{-1} * moment.
struct RidgeState {
  int dim = 0;
  double lambda = 0.1;
  Eigen::MatrixXd gram_inverse;
  Eigen::VectorXd moment;
  Eigen::VectorXd theta_hat;
  long long t = 0;

  static RidgeState make(int dim, double lambda);
};

/// Rank-one update of the inverse Gram matrix, moment and estimate after
/// observing (arm, reward). Throws std::runtime_error if the rank-one
/// denominator collapses, which cannot happen for a PD Gram matrix and
/// indicates corrupted state.
void ridge_update(RidgeState& state, const Eigen::VectorXd& arm, double reward);

/// 2 * sqrt(ln(2 T K / delta)); with delta = T^{-1/2} this is the
/// expected-regret width used by the baselines.
double confidence_width(long long T, long long K, double delta);

/// Optimistic selection: argmax over candidate rows of
/// <theta_hat, a> + (width + norm_bonus) * sqrt(a^T V^{-1} a),
/// ties broken toward the lowest index. norm_bonus is 0 in the standard
/// unit-norm setting and 2*ln(T) when the parameter norm can reach 2*log T
/// (the lifted problems built around virtual mixture-arms).
int linucb_select(const RidgeState& state, const Eigen::MatrixXd& candidates, double width,
                  double norm_bonus);

/// Per-arm pull counts and empirical means for a finite-armed UCB learner.
struct UcbState {
  Eigen::VectorXd means;
  Eigen::VectorXi counts;
  double scale = 2.0;

  static UcbState make(int num_arms, double scale = 2.0);
};

void ucb_update(UcbState& state, int arm, double reward);

/// Round-t selection: any unpulled arm first (lowest index), otherwise
/// argmax of mean + scale * sqrt(2 ln t / count).
int ucb_select(const UcbState& state, long long t);

/// LinUCB over a fixed candidate matrix with incrementally maintained
/// exploration terms. Selection agrees with linucb_select on the same
/// state; the incremental path keeps the whole scoring loop at
/// O(num_candidates * dim) per step instead of a quadratic form per arm.
class LinUcbRunner {
 public:
  LinUcbRunner(Eigen::MatrixXd candidates, double lambda, double width, double norm_bonus);

  int select() const;
  void update(int row, double reward);

  const RidgeState& state() const { return state_; }
  const Eigen::MatrixXd& candidates() const { return candidates_; }
  double bonus() const { return bonus_; }

 private:
  RidgeState state_;
  Eigen::MatrixXd candidates_;  // rows
  Eigen::VectorXd quad_;        // cached a^T V^{-1} a per row
  double bonus_;
};

struct LinUcbRunOptions {
  double lambda = 0.1;
  int working_dim = -1;     // <= 0: ambient dimension
  double delta = -1.0;      // <= 0: default T^{-1/2}
  double width = -1.0;      // < 0: derive from confidence_width
};

/// Plain LinUCB baseline on (optionally truncated) arm features. With
/// working_dim set to the intrinsic dimension this is the oracle variant.
RegretTrace run_linucb(const ActionSet& actions, const RewardModel& model, long long T,
                       std::uint64_t seed, const LinUcbRunOptions& opts = {});

/// Finite-armed UCB baseline ignoring the feature structure.
RegretTrace run_ucb(const ActionSet& actions, const RewardModel& model, long long T,
                    std::uint64_t seed, double scale = 2.0);

}  // namespace banditlab
