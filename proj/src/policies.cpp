#include "banditlab/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditlab {

RidgeState RidgeState::make(int dim, double lambda) {
  if (dim < 1) throw std::invalid_argument("RidgeState: dim must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("RidgeState: lambda must be > 0");
  RidgeState s;
  s.dim = dim;
  s.lambda = lambda;
  s.gram_inverse = Eigen::MatrixXd::Identity(dim, dim) / lambda;
  s.moment = Eigen::VectorXd::Zero(dim);
  s.theta_hat = Eigen::VectorXd::Zero(dim);
  s.t = 0;
  return s;
}

void ridge_update(RidgeState& state, const Eigen::VectorXd& arm, double reward) {
  if (arm.size() != state.dim) throw std::invalid_argument("ridge_update: arm dimension mismatch");
  if (arm.norm() > 1.0 + 1e-9) throw std::invalid_argument("ridge_update: arm norm exceeds 1");

  const Eigen::VectorXd u = state.gram_inverse * arm;
  const double denom = 1.0 + arm.dot(u);
  if (denom < 1e-12) {
    throw std::runtime_error("ridge_update: rank-one denominator below 1e-12, state corrupted");
  }
  state.gram_inverse.noalias() -= (u * u.transpose()) / denom;
  // Re-symmetrize so round-off never accumulates into asymmetry.
  Eigen::MatrixXd sym = 0.5 * (state.gram_inverse + state.gram_inverse.transpose());
  state.gram_inverse = std::move(sym);
  state.moment.noalias() += reward * arm;
  state.theta_hat.noalias() = state.gram_inverse * state.moment;
  ++state.t;
}

double confidence_width(long long T, long long K, double delta) {
  if (T < 1) throw std::invalid_argument("confidence_width: T must be >= 1");
  if (K < 1) throw std::invalid_argument("confidence_width: K must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("confidence_width: delta must lie in (0, 1)");
  }
  return 2.0 * std::sqrt(std::log(2.0 * static_cast<double>(T) * static_cast<double>(K) / delta));
}

int linucb_select(const RidgeState& state, const Eigen::MatrixXd& candidates, double width,
                  double norm_bonus) {
  if (candidates.rows() == 0) throw std::invalid_argument("linucb_select: empty candidate list");
  if (candidates.cols() != state.dim) {
    throw std::invalid_argument("linucb_select: candidate dimension mismatch");
  }
  if (width < 0.0) throw std::invalid_argument("linucb_select: width must be >= 0");
  if (norm_bonus < 0.0) throw std::invalid_argument("linucb_select: norm_bonus must be >= 0");

  const double bonus = width + norm_bonus;
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < candidates.rows(); ++r) {
    const auto a = candidates.row(r);
    const double quad = std::max(0.0, (a * state.gram_inverse * a.transpose()).value());
    const double score = a.dot(state.theta_hat) + bonus * std::sqrt(quad);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(r);
    }
  }
  return best;
}

UcbState UcbState::make(int num_arms, double scale) {
  if (num_arms < 1) throw std::invalid_argument("UcbState: at least one arm required");
  if (!(scale >= 0.0)) throw std::invalid_argument("UcbState: scale must be >= 0");
  UcbState s;
  s.means = Eigen::VectorXd::Zero(num_arms);
  s.counts = Eigen::VectorXi::Zero(num_arms);
  s.scale = scale;
  return s;
}

void ucb_update(UcbState& state, int arm, double reward) {
  if (arm < 0 || arm >= state.counts.size()) {
    throw std::invalid_argument("ucb_update: arm out of range");
  }
  state.counts[arm] += 1;
  state.means[arm] += (reward - state.means[arm]) / state.counts[arm];
}

int ucb_select(const UcbState& state, long long t) {
  if (state.counts.size() == 0) throw std::invalid_argument("ucb_select: empty arm set");
  if (t < 1) throw std::invalid_argument("ucb_select: round index must be >= 1");

  for (int k = 0; k < state.counts.size(); ++k) {
    if (state.counts[k] == 0) return k;
  }
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  const double lt = std::log(static_cast<double>(t));
  for (int k = 0; k < state.counts.size(); ++k) {
    const double score = state.means[k] + state.scale * std::sqrt(2.0 * lt / state.counts[k]);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

LinUcbRunner::LinUcbRunner(Eigen::MatrixXd candidates, double lambda, double width,
                           double norm_bonus)
    : state_(RidgeState::make(static_cast<int>(candidates.cols()), lambda)),
      candidates_(std::move(candidates)),
      bonus_(width + norm_bonus) {
  if (candidates_.rows() == 0) throw std::invalid_argument("LinUcbRunner: empty candidate list");
  if (width < 0.0 || norm_bonus < 0.0) {
    throw std::invalid_argument("LinUcbRunner: width and norm_bonus must be >= 0");
  }
  quad_ = candidates_.rowwise().squaredNorm() / lambda;
}

int LinUcbRunner::select() const {
  const Eigen::VectorXd scores =
      candidates_ * state_.theta_hat + bonus_ * quad_.cwiseMax(0.0).cwiseSqrt();
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < scores.size(); ++r) {
    if (scores[r] > best_score) {
      best_score = scores[r];
      best = static_cast<int>(r);
    }
  }
  return best;
}

void LinUcbRunner::update(int row, double reward) {
  if (row < 0 || row >= candidates_.rows()) {
    throw std::invalid_argument("LinUcbRunner: row out of range");
  }
  const Eigen::VectorXd a = candidates_.row(row).transpose();
  const Eigen::VectorXd u = state_.gram_inverse * a;
  const double denom = 1.0 + a.dot(u);
  // b^T V'^{-1} b = b^T V^{-1} b - (b^T u)^2 / denom for every candidate b.
  const Eigen::VectorXd proj = candidates_ * u;
  quad_.noalias() -= proj.cwiseProduct(proj) / denom;
  ridge_update(state_, a, reward);
}

RegretTrace run_linucb(const ActionSet& actions, const RewardModel& model, long long T,
                       std::uint64_t seed, const LinUcbRunOptions& opts) {
  if (T < 1) throw std::invalid_argument("run_linucb: T must be >= 1");
  if (actions.dim() != model.dim()) {
    throw std::invalid_argument("run_linucb: action and model dimensions differ");
  }
  const int dim = opts.working_dim > 0 ? std::min(opts.working_dim, actions.dim()) : actions.dim();
  const double delta =
      opts.delta > 0.0 ? opts.delta : 1.0 / std::sqrt(static_cast<double>(std::max<long long>(T, 2)));
  const double width =
      opts.width >= 0.0 ? opts.width : confidence_width(T, actions.num_arms(), delta);

  Environment env(actions, model, mix_seed(seed, kNoiseStream));
  LinUcbRunner runner(actions.arms().leftCols(dim), opts.lambda, width, 0.0);

  RegretTrace trace;
  for (long long t = 0; t < T; ++t) {
    const int arm = runner.select();
    const double reward = env.pull(t, arm);
    runner.update(arm, reward);
    trace.add(arm, reward, env.gap(arm));
  }
  return trace;
}

RegretTrace run_ucb(const ActionSet& actions, const RewardModel& model, long long T,
                    std::uint64_t seed, double scale) {
  if (T < 1) throw std::invalid_argument("run_ucb: T must be >= 1");
  Environment env(actions, model, mix_seed(seed, kNoiseStream));
  UcbState state = UcbState::make(actions.num_arms(), scale);

  RegretTrace trace;
  for (long long t = 0; t < T; ++t) {
    const int arm = ucb_select(state, t + 1);
    const double reward = env.pull(t, arm);
    ucb_update(state, arm, reward);
    trace.add(arm, reward, env.gap(arm));
  }
  return trace;
}

}  // namespace banditlab
