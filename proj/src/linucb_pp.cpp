#include "banditlab/linucb_pp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "banditlab/policies.hpp"

namespace banditlab {

int Schedule::executed_iterations() const {
  for (int i = 0; i < p; ++i) {
    if (boundaries[i] >= horizon) return i + 1;
  }
  return p;
}

Schedule build_schedule(long long T, double beta, int d) {
  if (T < 2) throw std::invalid_argument("build_schedule: T must be >= 2");
  if (!(beta >= 0.5 && beta < 1.0)) {
    throw std::invalid_argument("build_schedule: beta must lie in [1/2, 1)");
  }
  if (d < 1) throw std::invalid_argument("build_schedule: d must be >= 1");

  Schedule s;
  s.horizon = T;
  s.p = static_cast<int>(std::ceil(beta * std::log2(static_cast<double>(T))));
  long long cumulative = 0;
  for (int i = 1; i <= s.p; ++i) {
    const long long dim_cap = 1LL << (s.p + 2 - i);
    const long long len_cap = 1LL << (s.p + i);
    s.dims.push_back(static_cast<int>(std::min<long long>(dim_cap, d)));
    s.lengths.push_back(std::min<long long>(len_cap, T));
    cumulative += s.lengths.back();
    s.boundaries.push_back(cumulative);
  }
  if (cumulative < T) {
    throw std::runtime_error("build_schedule: plan shorter than the horizon");  // unreachable
  }
  return s;
}

VirtualMixtureArm finalize_mixture_arm(std::span<const long long> counts, long long delta_t,
                                       int iteration) {
  if (iteration < 1) throw std::invalid_argument("finalize_mixture_arm: iteration must be >= 1");
  if (delta_t < 1) throw std::invalid_argument("finalize_mixture_arm: delta_t must be >= 1");
  long long total = 0;
  for (long long c : counts) {
    if (c < 0) throw std::invalid_argument("finalize_mixture_arm: negative count");
    total += c;
  }
  if (total != delta_t) {
    throw std::invalid_argument("finalize_mixture_arm: counts sum to " + std::to_string(total) +
                                ", expected " + std::to_string(delta_t));
  }

  VirtualMixtureArm arm;
  arm.iteration = iteration;
  arm.delta_t = delta_t;
  arm.support_counts.assign(counts.begin(), counts.end());
  arm.frequencies.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    arm.frequencies[i] = static_cast<double>(counts[i]) / static_cast<double>(delta_t);
  }
  return arm;
}

ExtendedActionSet extend_action_set(const ActionSet& actions, int d_i,
                                    std::span<const VirtualMixtureArm> virtual_arms) {
  if (d_i < 1 || d_i > actions.dim()) {
    throw std::invalid_argument("extend_action_set: d_i must lie in [1, d]");
  }
  for (std::size_t j = 0; j < virtual_arms.size(); ++j) {
    if (virtual_arms[j].iteration != static_cast<int>(j) + 1) {
      throw std::invalid_argument(
          "extend_action_set: virtual arms must cover iterations 1..i-1 without gaps");
    }
  }

  const int K = actions.num_arms();
  const int n_virtual = static_cast<int>(virtual_arms.size());

  ExtendedActionSet ext;
  ext.num_real = K;
  ext.working_dim = d_i;
  ext.iteration = n_virtual + 1;
  ext.matrix = Eigen::MatrixXd::Zero(K + n_virtual, d_i + n_virtual);
  ext.matrix.topLeftCorner(K, d_i) = actions.arms().leftCols(d_i);
  for (int j = 1; j <= n_virtual; ++j) {
    ext.matrix(K + j - 1, d_i + j - 1) = 1.0;
  }
  return ext;
}

namespace {

void check_registry_prefix(std::span<const VirtualMixtureArm> registry, int iteration) {
  if (static_cast<int>(registry.size()) < iteration - 1) {
    throw std::invalid_argument("virtual-arm registry is missing earlier iterations");
  }
  for (int j = 0; j < iteration - 1; ++j) {
    if (registry[j].iteration != j + 1) {
      throw std::invalid_argument("virtual-arm registry out of order");
    }
  }
}

}  // namespace

int resolve_virtual_arm(const VirtualMixtureArm& arm,
                        std::span<const VirtualMixtureArm> registry, Rng& rng) {
  check_registry_prefix(registry, arm.iteration);
  const VirtualMixtureArm* current = &arm;
  const int max_depth = arm.iteration;  // iteration indices strictly decrease
  for (int depth = 0; depth < max_depth; ++depth) {
    const int num_real = current->num_real_slots();
    const int slot = rng.pick(current->frequencies);
    if (slot < num_real) return slot;
    const int next = slot - num_real + 1;
    if (next >= current->iteration) {
      throw std::runtime_error("resolve_virtual_arm: registry corrupted (forward reference)");
    }
    current = &registry[next - 1];
  }
  throw std::runtime_error("resolve_virtual_arm: resolution did not terminate");  // unreachable
}

std::vector<double> flatten_virtual_arm(const VirtualMixtureArm& arm,
                                        std::span<const VirtualMixtureArm> registry) {
  check_registry_prefix(registry, arm.iteration);
  const int num_real = arm.num_real_slots();

  std::vector<std::vector<double>> flat(static_cast<std::size_t>(arm.iteration));
  for (int j = 1; j <= arm.iteration; ++j) {
    const VirtualMixtureArm& mix = (j == arm.iteration) ? arm : registry[j - 1];
    if (mix.num_real_slots() != num_real) {
      throw std::invalid_argument("flatten_virtual_arm: inconsistent real-slot counts");
    }
    std::vector<double> dist(static_cast<std::size_t>(num_real), 0.0);
    for (std::size_t s = 0; s < mix.frequencies.size(); ++s) {
      const double f = mix.frequencies[s];
      if (f == 0.0) continue;
      if (static_cast<int>(s) < num_real) {
        dist[s] += f;
      } else {
        const std::vector<double>& inner = flat[s - static_cast<std::size_t>(num_real)];
        for (int a = 0; a < num_real; ++a) dist[static_cast<std::size_t>(a)] += f * inner[a];
      }
    }
    flat[static_cast<std::size_t>(j - 1)] = std::move(dist);
  }
  return flat[static_cast<std::size_t>(arm.iteration - 1)];
}

LinUcbPlusPlusResult run_linucb_plus_plus(const ActionSet& actions, const RewardModel& model,
                                          long long T, double beta, std::uint64_t seed,
                                          const LinUcbPlusPlusOptions& opts) {
  if (actions.dim() != model.dim()) {
    throw std::invalid_argument("run_linucb_plus_plus: action and model dimensions differ");
  }
  LinUcbPlusPlusResult result;
  result.schedule = build_schedule(T, beta, actions.dim());

  Environment env(actions, model, mix_seed(seed, kNoiseStream));
  Rng rng(mix_seed(seed, kPolicyStream));
  const double norm_bonus =
      opts.norm_bonus >= 0.0 ? opts.norm_bonus : 2.0 * std::log(static_cast<double>(T));

  long long t = 0;
  for (int i = 1; i <= result.schedule.p && t < T; ++i) {
    const int d_i = result.schedule.dims[i - 1];
    const long long planned = result.schedule.lengths[i - 1];
    const long long len = std::min(planned, T - t);

    const ExtendedActionSet ext = extend_action_set(actions, d_i, result.mixtures);
    const double delta =
        opts.delta > 0.0 ? opts.delta : 1.0 / std::sqrt(static_cast<double>(planned));
    const double width =
        opts.width >= 0.0 ? opts.width : confidence_width(planned, ext.matrix.rows(), delta);
    LinUcbRunner runner(ext.matrix, opts.lambda, width, norm_bonus);

    std::vector<long long> counts(static_cast<std::size_t>(ext.matrix.rows()), 0);
    IterationRecord rec;
    rec.index = i;
    rec.working_dim = d_i;
    rec.start = t;
    for (long long s = 0; s < len; ++s, ++t) {
      const int row = runner.select();
      const int arm = ext.is_virtual_row(row)
                          ? resolve_virtual_arm(result.mixtures[ext.virtual_index(row) - 1],
                                                result.mixtures, rng)
                          : row;
      const double reward = env.pull(t, arm);
      runner.update(row, reward);
      counts[static_cast<std::size_t>(row)] += 1;
      const double gap = env.gap(arm);
      result.trace.add(arm, reward, gap, row);
      rec.pseudo_regret_sum += gap;
      rec.mean_reward_sum += env.mean(arm);
    }
    rec.length = len;
    rec.completed = (len == planned);
    if (rec.completed) {
      result.mixtures.push_back(finalize_mixture_arm(counts, len, i));
    }
    result.iterations.push_back(std::move(rec));
  }
  return result;
}

}  // namespace banditlab
