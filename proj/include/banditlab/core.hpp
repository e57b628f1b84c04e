#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "banditlab/rng.hpp"

namespace banditlab {

// Absolute tolerance for tie detection in pure floating-point comparisons
// (gaps, rate values). No sampling noise exists at this layer.
inline constexpr double kTieTolerance = 1e-12;

/// Finite action set: K feature vectors of common length d, stored as rows.
/// Every arm must have Euclidean norm at most 1.
class ActionSet {
 public:
  explicit ActionSet(Eigen::MatrixXd arms);

  int num_arms() const { return static_cast<int>(arms_.rows()); }
  int dim() const { return static_cast<int>(arms_.cols()); }
  const Eigen::MatrixXd& arms() const { return arms_; }
  Eigen::VectorXd arm(int k) const { return arms_.row(k).transpose(); }

 private:
  Eigen::MatrixXd arms_;  // K x d
};

/// Hidden linear reward parameter with its intrinsic dimension (the largest
/// index of a nonzero coordinate) and the reward noise scale.
class RewardModel {
 public:
  /// Derives the intrinsic dimension from the parameter vector.
  RewardModel(Eigen::VectorXd theta_star, double noise_std);
  /// Validates a caller-supplied intrinsic dimension against the vector.
  RewardModel(Eigen::VectorXd theta_star, int intrinsic_dim, double noise_std);

  const Eigen::VectorXd& theta_star() const { return theta_star_; }
  int intrinsic_dim() const { return intrinsic_dim_; }
  double noise_std() const { return noise_std_; }
  int dim() const { return static_cast<int>(theta_star_.size()); }

 private:
  Eigen::VectorXd theta_star_;
  int intrinsic_dim_;
  double noise_std_;
};

/// One played step: the resolved real arm, the realized reward and the
/// instantaneous pseudo-regret. `extended_row` records which row of an
/// extended action matrix was chosen when the step came from a lifted
/// problem (-1 when the arm was played directly).
struct RegretStep {
  int arm;
  double reward;
  double instant_regret;
  int extended_row;
};

/// Append-only per-step record with the running pseudo-regret sum.
class RegretTrace {
 public:
  void add(int arm, double reward, double instant_regret, int extended_row = -1);

  const std::vector<RegretStep>& steps() const { return steps_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  long long size() const { return static_cast<long long>(steps_.size()); }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::vector<RegretStep> steps_;
  std::vector<double> cumulative_;
};

/// Regret exponent profile alpha -> rate, with a label so exported frontier
/// tables are self-describing. Values are expected in [0, 1] and
/// nondecreasing in alpha.
struct RateFunction {
  std::string label;
  std::function<double(double)> eval;

  double operator()(double alpha) const { return eval(alpha); }
};

enum class RateOrder {
  a_strictly_smaller,
  b_strictly_smaller,
  equal,
  incomparable,
};

std::string to_string(RateOrder order);

/// log_T(d_star): the tension between horizon and intrinsic dimension.
double hardness_level(long long T, long long d_star);

/// min(max(beta, 1 + alpha - beta), 1) for beta in [1/2, 1).
double pareto_rate(double beta, double alpha);

/// min(max(theta0, 1 + alpha - theta0), 1) for theta0 in [1/2, 1]; the floor
/// any achievable rate function must respect given its value at alpha = 0.
double rate_lower_bound(double theta0, double alpha);

RateFunction pareto_rate_function(double beta);
RateFunction constant_rate_function(double value);

/// Pointwise comparison of two rate functions on a grid of alpha values,
/// with ties detected at kTieTolerance.
RateOrder compare_rates(const RateFunction& a, const RateFunction& b,
                        std::span<const double> grid);

/// Augments the set with every truncate-and-pad image of every arm for the
/// given dimensions. Bit-exact duplicates are removed; original arms and
/// first-seen order are retained, which makes the operation idempotent.
ActionSet expressive_closure(const ActionSet& actions, std::span<const int> dims);

struct BestArm {
  int index;             // lowest index among maximizers
  Eigen::VectorXd gaps;  // <theta*, a_best - a_k> for every arm k
};

BestArm best_arm_and_gap(const ActionSet& actions, const RewardModel& model);

/// Reward oracle shared by every run loop: deterministic means plus a noise
/// stream addressed by (step, arm). Immutable after construction.
class Environment {
 public:
  Environment(const ActionSet& actions, const RewardModel& model, std::uint64_t noise_seed);

  /// Realized reward for pulling `arm` at global step `step` (0-based).
  double pull(long long step, int arm) const {
    return means_[arm] + noise_std_ * normal_at(noise_seed_, static_cast<std::uint64_t>(step),
                                                static_cast<std::uint64_t>(arm));
  }
  double mean(int arm) const { return means_[arm]; }
  double gap(int arm) const { return gaps_[arm]; }
  int best_arm() const { return best_; }
  double best_mean() const { return means_[best_]; }
  int num_arms() const { return static_cast<int>(means_.size()); }

 private:
  Eigen::VectorXd means_;
  Eigen::VectorXd gaps_;
  int best_;
  double noise_std_;
  std::uint64_t noise_seed_;
};

}  // namespace banditlab
