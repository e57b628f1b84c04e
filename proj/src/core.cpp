#include "banditlab/core.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

namespace banditlab {

namespace {

constexpr double kNormSlack = 1e-9;

// Bit-exact key for duplicate detection of arm rows.
std::string row_key(const Eigen::MatrixXd& m, Eigen::Index row) {
  std::string key(static_cast<std::size_t>(m.cols()) * sizeof(double), '\0');
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double v = m(row, c);
    std::memcpy(key.data() + static_cast<std::size_t>(c) * sizeof(double), &v, sizeof(double));
  }
  return key;
}

}  // namespace

ActionSet::ActionSet(Eigen::MatrixXd arms) : arms_(std::move(arms)) {
  if (arms_.rows() < 1) throw std::invalid_argument("ActionSet: at least one arm required");
  if (arms_.cols() < 1) throw std::invalid_argument("ActionSet: dimension must be positive");
  for (Eigen::Index k = 0; k < arms_.rows(); ++k) {
    if (arms_.row(k).norm() > 1.0 + kNormSlack) {
      throw std::invalid_argument("ActionSet: arm " + std::to_string(k) + " has norm > 1");
    }
  }
}

namespace {

int derive_intrinsic_dim(const Eigen::VectorXd& theta) {
  for (Eigen::Index i = theta.size(); i-- > 0;) {
    if (theta[i] != 0.0) return static_cast<int>(i) + 1;
  }
  return 0;
}

}  // namespace

RewardModel::RewardModel(Eigen::VectorXd theta_star, double noise_std)
    : RewardModel(std::move(theta_star), -1, noise_std) {}

RewardModel::RewardModel(Eigen::VectorXd theta_star, int intrinsic_dim, double noise_std)
    : theta_star_(std::move(theta_star)), intrinsic_dim_(intrinsic_dim), noise_std_(noise_std) {
  if (theta_star_.size() < 1) throw std::invalid_argument("RewardModel: empty parameter vector");
  if (theta_star_.norm() > 1.0 + kNormSlack) {
    throw std::invalid_argument("RewardModel: parameter norm exceeds 1");
  }
  if (!(noise_std_ >= 0.0)) throw std::invalid_argument("RewardModel: noise_std must be >= 0");
  const int derived = derive_intrinsic_dim(theta_star_);
  if (intrinsic_dim_ < 0) {
    intrinsic_dim_ = derived;
  } else if (intrinsic_dim_ != derived) {
    throw std::invalid_argument(
        "RewardModel: intrinsic_dim must be the largest nonzero coordinate index (expected " +
        std::to_string(derived) + ")");
  }
}

void RegretTrace::add(int arm, double reward, double instant_regret, int extended_row) {
  if (instant_regret < 0.0) {
    throw std::invalid_argument("RegretTrace: instantaneous pseudo-regret must be >= 0");
  }
  steps_.push_back({arm, reward, instant_regret, extended_row});
  cumulative_.push_back(total() + instant_regret);
}

std::string to_string(RateOrder order) {
  switch (order) {
    case RateOrder::a_strictly_smaller: return "a_strictly_smaller";
    case RateOrder::b_strictly_smaller: return "b_strictly_smaller";
    case RateOrder::equal: return "equal";
    case RateOrder::incomparable: return "incomparable";
  }
  return "unknown";
}

double hardness_level(long long T, long long d_star) {
  if (T < 2) throw std::invalid_argument("hardness_level: T must be >= 2");
  if (d_star < 1) throw std::invalid_argument("hardness_level: d_star must be >= 1");
  if (d_star > T) throw std::invalid_argument("hardness_level: d_star > T would exceed level 1");
  return std::log(static_cast<double>(d_star)) / std::log(static_cast<double>(T));
}

double pareto_rate(double beta, double alpha) {
  if (!(beta >= 0.5 && beta < 1.0)) {
    throw std::invalid_argument("pareto_rate: beta must lie in [1/2, 1)");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("pareto_rate: alpha must lie in [0, 1]");
  }
  return std::min(std::max(beta, 1.0 + alpha - beta), 1.0);
}

double rate_lower_bound(double theta0, double alpha) {
  if (!(theta0 >= 0.5 && theta0 <= 1.0)) {
    throw std::invalid_argument("rate_lower_bound: theta0 must lie in [1/2, 1]");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("rate_lower_bound: alpha must lie in [0, 1]");
  }
  return std::min(std::max(theta0, 1.0 + alpha - theta0), 1.0);
}

RateFunction pareto_rate_function(double beta) {
  // Validate once up front so a bad beta fails at construction.
  pareto_rate(beta, 0.0);
  char label[64];
  std::snprintf(label, sizeof(label), "pareto(beta=%g)", beta);
  return RateFunction{label, [beta](double alpha) { return pareto_rate(beta, alpha); }};
}

RateFunction constant_rate_function(double value) {
  char label[64];
  std::snprintf(label, sizeof(label), "constant(%g)", value);
  return RateFunction{label, [value](double) { return value; }};
}

RateOrder compare_rates(const RateFunction& a, const RateFunction& b,
                        std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("compare_rates: grid must be nonempty");
  bool a_below = false;  // a < b somewhere
  bool b_below = false;  // b < a somewhere
  for (double alpha : grid) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("compare_rates: grid values must lie in [0, 1]");
    }
    const double va = a(alpha);
    const double vb = b(alpha);
    if (va < vb - kTieTolerance) a_below = true;
    if (vb < va - kTieTolerance) b_below = true;
  }
  if (a_below && b_below) return RateOrder::incomparable;
  if (a_below) return RateOrder::a_strictly_smaller;
  if (b_below) return RateOrder::b_strictly_smaller;
  return RateOrder::equal;
}

ActionSet expressive_closure(const ActionSet& actions, std::span<const int> dims) {
  const int d = actions.dim();
  for (int dim : dims) {
    if (dim < 1 || dim > d) {
      throw std::invalid_argument("expressive_closure: dims must lie in [1, d]");
    }
  }

  const Eigen::MatrixXd& arms = actions.arms();
  std::vector<Eigen::VectorXd> out;
  std::unordered_set<std::string> seen;
  out.reserve(static_cast<std::size_t>(arms.rows()) * (dims.size() + 1));

  for (Eigen::Index k = 0; k < arms.rows(); ++k) {
    if (seen.insert(row_key(arms, k)).second) out.push_back(arms.row(k).transpose());
  }
  for (Eigen::Index k = 0; k < arms.rows(); ++k) {
    for (int dim : dims) {
      Eigen::VectorXd truncated = Eigen::VectorXd::Zero(d);
      truncated.head(dim) = arms.row(k).head(dim).transpose();
      std::string key(reinterpret_cast<const char*>(truncated.data()),
                      static_cast<std::size_t>(d) * sizeof(double));
      if (seen.insert(std::move(key)).second) out.push_back(std::move(truncated));
    }
  }

  Eigen::MatrixXd result(static_cast<Eigen::Index>(out.size()), d);
  for (std::size_t i = 0; i < out.size(); ++i) result.row(static_cast<Eigen::Index>(i)) = out[i].transpose();
  return ActionSet(std::move(result));
}

BestArm best_arm_and_gap(const ActionSet& actions, const RewardModel& model) {
  if (actions.dim() != model.dim()) {
    throw std::invalid_argument("best_arm_and_gap: action and model dimensions differ");
  }
  const Eigen::VectorXd means = actions.arms() * model.theta_star();
  int best = 0;
  for (int k = 1; k < actions.num_arms(); ++k) {
    if (means[k] > means[best]) best = k;  // ties keep the lowest index
  }
  Eigen::VectorXd gaps = Eigen::VectorXd::Constant(actions.num_arms(), means[best]) - means;
  return BestArm{best, std::move(gaps)};
}

Environment::Environment(const ActionSet& actions, const RewardModel& model,
                         std::uint64_t noise_seed)
    : noise_std_(model.noise_std()), noise_seed_(noise_seed) {
  const BestArm best = best_arm_and_gap(actions, model);
  means_ = actions.arms() * model.theta_star();
  gaps_ = best.gaps;
  best_ = best.index;
}

}  // namespace banditlab
