#include "banditlab/corral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditlab {

CorralState CorralState::make(int num_bases, double eta, long long horizon) {
  if (num_bases < 1) throw std::invalid_argument("CorralState: need at least one base");
  if (!(eta > 0.0)) throw std::invalid_argument("CorralState: eta must be > 0");
  if (horizon < 1) throw std::invalid_argument("CorralState: horizon must be >= 1");

  CorralState s;
  const double m = static_cast<double>(num_bases);
  s.probabilities = Eigen::VectorXd::Constant(num_bases, 1.0 / m);
  s.step_sizes = Eigen::VectorXd::Constant(num_bases, m * eta);
  s.thresholds = Eigen::VectorXd::Constant(num_bases, 2.0 * m);
  s.loss_sums = Eigen::VectorXd::Zero(num_bases);
  s.eta = eta;
  s.mix = 1.0 / (2.0 * static_cast<double>(horizon));
  s.floor_prob = s.mix / m;
  return s;
}

LinUcbCorralBase::LinUcbCorralBase(const ActionSet& actions, int dim, double lambda, double width,
                                   bool smoothed)
    : runner_(actions.arms().leftCols(dim), lambda, width, 0.0), smoothed_(smoothed) {}

BasePlay LinUcbCorralBase::select(Rng& rng) {
  int arm = runner_.select();
  if (smoothed_) {
    // Uniform over the base's own past plays plus the fresh recommendation.
    const std::size_t draw =
        static_cast<std::size_t>(rng.uniform() * static_cast<double>(history_.size() + 1));
    if (draw < history_.size()) arm = history_[draw];
  }
  history_.push_back(arm);
  return {arm, arm};
}

void LinUcbCorralBase::observe(const BasePlay& play, double reward) {
  runner_.update(play.real_arm, reward);
}

VirtualUcbCorralBase::VirtualUcbCorralBase(const std::vector<VirtualMixtureArm>& registry,
                                           int num_real, bool smoothed, double scale)
    : registry_(&registry),
      num_real_(num_real),
      smoothed_(smoothed),
      ucb_(UcbState::make(static_cast<int>(registry.size()), scale)) {
  if (registry.empty()) {
    throw std::invalid_argument("VirtualUcbCorralBase: no virtual arms to play");
  }
}

BasePlay VirtualUcbCorralBase::select(Rng& rng) {
  int j = ucb_select(ucb_, rounds_ + 1) + 1;  // iteration index of the chosen arm
  if (smoothed_) {
    const std::size_t draw =
        static_cast<std::size_t>(rng.uniform() * static_cast<double>(history_.size() + 1));
    if (draw < history_.size()) j = history_[draw];
  }
  history_.push_back(j);
  const int real = resolve_virtual_arm((*registry_)[j - 1], *registry_, rng);
  return {num_real_ + j - 1, real};
}

void VirtualUcbCorralBase::observe(const BasePlay& play, double reward) {
  ucb_update(ucb_, play.slot - num_real_, reward);
  ++rounds_;
}

Eigen::VectorXd log_barrier_omd(const Eigen::VectorXd& probabilities,
                                const Eigen::VectorXd& losses,
                                const Eigen::VectorXd& step_sizes) {
  const Eigen::Index m = probabilities.size();
  if (losses.size() != m || step_sizes.size() != m) {
    throw std::invalid_argument("log_barrier_omd: size mismatch");
  }

  // The normalizer solves sum_i 1/(1/p_i + eta_i (l_i - lambda)) = 1.
  // The sum is increasing in lambda on (-inf, first pole); it is <= 1 at
  // lambda = min(l) and diverges at the pole, so bisection applies.
  double lo = losses.minCoeff();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    hi = std::min(hi, losses[i] + 1.0 / (step_sizes[i] * probabilities[i]));
  }
  const auto mass = [&](double lambda) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      total += 1.0 / (1.0 / probabilities[i] + step_sizes[i] * (losses[i] - lambda));
    }
    return total;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const double lambda = 0.5 * (lo + hi);
  Eigen::VectorXd next(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    next[i] = 1.0 / (1.0 / probabilities[i] + step_sizes[i] * (losses[i] - lambda));
  }
  return next / next.sum();
}

CorralStepOutcome corral_step(CorralState& state, std::span<CorralBase* const> bases,
                              const std::function<double(int real_arm)>& env_pull, Rng& rng) {
  const int m = static_cast<int>(bases.size());
  if (m < 1) throw std::invalid_argument("corral_step: need at least one base");
  if (state.probabilities.size() != m) {
    throw std::invalid_argument("corral_step: state sized for a different base count");
  }

  const int chosen =
      rng.pick(std::span<const double>(state.probabilities.data(), static_cast<std::size_t>(m)));
  const BasePlay play = bases[chosen]->select(rng);
  const double reward = env_pull(play.real_arm);
  bases[chosen]->observe(play, reward);

  const double loss = std::clamp((1.0 - reward) / 2.0, 0.0, 1.0);
  Eigen::VectorXd iw = Eigen::VectorXd::Zero(m);
  iw[chosen] = loss / state.probabilities[chosen];
  state.loss_sums += iw;

  Eigen::VectorXd p = log_barrier_omd(state.probabilities, iw, state.step_sizes);
  p = (1.0 - state.mix) * p + Eigen::VectorXd::Constant(m, state.mix / m);

  const double total = p.sum();
  if (p.minCoeff() < state.floor_prob - 1e-9 || std::abs(total - 1.0) > 1e-9) {
    throw std::runtime_error("corral_step: simplex corrupted");
  }
  state.probabilities = p / total;

  for (int b = 0; b < m; ++b) {
    if (1.0 / state.probabilities[b] > state.thresholds[b]) {
      state.thresholds[b] = 2.0 / state.probabilities[b];
      state.step_sizes[b] *= 2.0;
    }
  }
  ++state.t;
  return {chosen, play.slot, play.real_arm, reward};
}

SmoothCorralResult run_smooth_corral(const ActionSet& actions, const RewardModel& model,
                                     long long T, double eta, std::span<const int> base_dims,
                                     std::uint64_t seed, double lambda, double width) {
  if (T < 1) throw std::invalid_argument("run_smooth_corral: T must be >= 1");
  if (base_dims.empty()) throw std::invalid_argument("run_smooth_corral: base_dims is empty");
  for (int dim : base_dims) {
    if (dim < 1 || dim > actions.dim()) {
      throw std::invalid_argument("run_smooth_corral: base dim outside [1, d]");
    }
  }

  Environment env(actions, model, mix_seed(seed, kNoiseStream));
  Rng rng(mix_seed(seed, kPolicyStream));
  if (width < 0.0) {
    width = confidence_width(
        T, actions.num_arms(), 1.0 / std::sqrt(static_cast<double>(std::max<long long>(T, 2))));
  }

  // A lone base needs no smoothing; the wrapper then reduces to the raw base.
  const bool smoothed = base_dims.size() > 1;
  std::vector<std::unique_ptr<CorralBase>> owned;
  owned.reserve(base_dims.size());
  for (int dim : base_dims) {
    owned.push_back(std::make_unique<LinUcbCorralBase>(actions, dim, lambda, width, smoothed));
  }
  std::vector<CorralBase*> bases;
  for (auto& b : owned) bases.push_back(b.get());

  SmoothCorralResult result;
  result.state = CorralState::make(static_cast<int>(bases.size()), eta, T);
  for (long long t = 0; t < T; ++t) {
    const auto outcome = corral_step(
        result.state, bases, [&](int arm) { return env.pull(t, arm); }, rng);
    result.trace.add(outcome.real_arm, outcome.reward, env.gap(outcome.real_arm));
    result.base_choices.push_back(outcome.base);
  }
  return result;
}

CorralScheduleResult run_corral_within_schedule(const ActionSet& actions,
                                                const RewardModel& model, long long T,
                                                double beta, std::uint64_t seed, double lambda,
                                                double width) {
  if (actions.dim() != model.dim()) {
    throw std::invalid_argument("run_corral_within_schedule: dimension mismatch");
  }
  CorralScheduleResult result;
  result.schedule = build_schedule(T, beta, actions.dim());

  Environment env(actions, model, mix_seed(seed, kNoiseStream));
  Rng rng(mix_seed(seed, kPolicyStream));
  const int K = actions.num_arms();

  long long t = 0;
  for (int i = 1; i <= result.schedule.p && t < T; ++i) {
    const int d_i = result.schedule.dims[i - 1];
    const long long planned = result.schedule.lengths[i - 1];
    const long long len = std::min(planned, T - t);
    const double eta_i = 1.0 / std::sqrt(static_cast<double>(d_i) * static_cast<double>(planned));
    result.etas.push_back(eta_i);

    const double base_width =
        width >= 0.0 ? width
                     : confidence_width(planned, K, 1.0 / std::sqrt(static_cast<double>(planned)));
    const bool smoothed = !result.mixtures.empty();  // two bases from iteration 2 on
    std::vector<std::unique_ptr<CorralBase>> owned;
    owned.push_back(
        std::make_unique<LinUcbCorralBase>(actions, d_i, lambda, base_width, smoothed));
    if (!result.mixtures.empty()) {
      owned.push_back(std::make_unique<VirtualUcbCorralBase>(result.mixtures, K, smoothed));
    }
    std::vector<CorralBase*> bases;
    for (auto& b : owned) bases.push_back(b.get());

    CorralState state = CorralState::make(static_cast<int>(bases.size()), eta_i, planned);
    std::vector<long long> counts(static_cast<std::size_t>(K + i - 1), 0);
    for (long long s = 0; s < len; ++s, ++t) {
      const auto outcome =
          corral_step(state, bases, [&](int arm) { return env.pull(t, arm); }, rng);
      counts[static_cast<std::size_t>(outcome.slot)] += 1;
      result.trace.add(outcome.real_arm, outcome.reward, env.gap(outcome.real_arm), outcome.slot);
    }
    if (len == planned) {
      result.mixtures.push_back(finalize_mixture_arm(counts, len, i));
    }
  }
  return result;
}

}  // namespace banditlab
