#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "banditlab/corral.hpp"
#include "banditlab/harness.hpp"

using namespace banditlab;

namespace {

// Test base that always plays one fixed arm.
class FixedArmBase : public CorralBase {
 public:
  explicit FixedArmBase(int arm) : arm_(arm) {}
  BasePlay select(Rng&) override { return {arm_, arm_}; }
  void observe(const BasePlay&, double) override {}

 private:
  int arm_;
};

}  // namespace

TEST_SUITE_BEGIN("corral");

TEST_CASE("master state starts uniform with the documented constants") {
  const CorralState s = CorralState::make(4, 0.05, 1000);
  CHECK(s.probabilities.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.probabilities.minCoeff() == doctest::Approx(0.25));
  CHECK(s.step_sizes.minCoeff() == doctest::Approx(4 * 0.05));
  CHECK(s.thresholds.minCoeff() == doctest::Approx(8.0));
  CHECK(s.floor_prob == doctest::Approx(1.0 / (2.0 * 4 * 1000)));
  CHECK_THROWS_AS(CorralState::make(0, 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(CorralState::make(2, 0.0, 10), std::invalid_argument);
}

TEST_CASE("log-barrier update stays on the simplex and follows the losses") {
  const Eigen::VectorXd probs = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  const Eigen::VectorXd steps = Eigen::VectorXd::Constant(3, 0.2);

  // Zero losses leave the point unchanged.
  const Eigen::VectorXd same = log_barrier_omd(probs, Eigen::VectorXd::Zero(3), steps);
  for (int i = 0; i < 3; ++i) CHECK(same[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  // A loss on one coordinate moves mass away from it.
  Eigen::VectorXd losses = Eigen::VectorXd::Zero(3);
  losses[1] = 2.0;
  const Eigen::VectorXd moved = log_barrier_omd(probs, losses, steps);
  CHECK(moved.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moved[1] < 1.0 / 3.0);
  CHECK(moved[0] > 1.0 / 3.0);
  CHECK(moved[0] == doctest::Approx(moved[2]).epsilon(1e-9));

  // Single-base degenerate case.
  const Eigen::VectorXd one = log_barrier_omd(Eigen::VectorXd::Ones(1),
                                              Eigen::VectorXd::Constant(1, 3.0),
                                              Eigen::VectorXd::Constant(1, 0.5));
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant-gap bases separate and keep the simplex floored") {
  // Base 0 earns reward 1 (loss 0), base 1 earns reward 0 (loss 1/2).
  const long long T = 2000;
  double terminal_sum = 0.0;
  double late_pick_rate = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    FixedArmBase good(0);
    FixedArmBase bad(1);
    std::vector<CorralBase*> bases{&good, &bad};
    CorralState state = CorralState::make(2, 0.1, T);
    Rng rng(100 + seed);
    int late_good = 0;
    for (long long t = 0; t < T; ++t) {
      const auto outcome = corral_step(
          state, bases, [](int arm) { return arm == 0 ? 1.0 : 0.0; }, rng);
      CHECK(state.probabilities.minCoeff() >= state.floor_prob - 1e-12);
      CHECK(state.probabilities.sum() == doctest::Approx(1.0).epsilon(1e-9));
      if (t >= T - T / 10 && outcome.base == 0) ++late_good;
    }
    terminal_sum += state.probabilities[0];
    late_pick_rate += late_good / static_cast<double>(T / 10);
  }
  CHECK(terminal_sum / 20.0 > 0.9);
  // The dominant base is picked most of the time over the last 10% of steps.
  CHECK(late_pick_rate / 20.0 > 0.8);
}

TEST_CASE("a tenfold learning rate still keeps the simplex valid") {
  const long long T = 500;
  FixedArmBase good(0);
  FixedArmBase bad(1);
  std::vector<CorralBase*> bases{&good, &bad};
  CorralState state = CorralState::make(2, 1.0, T);  // 10x the previous eta
  Rng rng(5);
  for (long long t = 0; t < T; ++t) {
    corral_step(state, bases, [](int arm) { return arm == 0 ? 1.0 : 0.0; }, rng);
    CHECK(state.probabilities.minCoeff() >= state.floor_prob - 1e-12);
    CHECK(state.probabilities.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("single-base corral reduces to the base algorithm step for step") {
  Rng rng(7);
  const ActionSet actions = sample_sphere_arms(10, 12, rng);
  const RewardModel model = make_paper_model(10, 3, 0.1);
  const long long T = 400;
  const std::uint64_t seed = 21;

  const std::vector<int> dims{10};
  const SmoothCorralResult corral = run_smooth_corral(actions, model, T, 0.05, dims, seed);
  const RegretTrace plain = run_linucb(actions, model, T, seed);

  REQUIRE(corral.trace.size() == T);
  for (long long t = 0; t < T; ++t) {
    CHECK(corral.trace.steps()[t].arm == plain.steps()[t].arm);
    CHECK(corral.trace.steps()[t].reward == plain.steps()[t].reward);
  }
}

TEST_CASE("smooth corral validates its configuration") {
  Rng rng(9);
  const ActionSet actions = sample_sphere_arms(6, 5, rng);
  const RewardModel model = make_paper_model(6, 2, 0.1);
  CHECK_THROWS_AS(run_smooth_corral(actions, model, 100, 0.1, std::vector<int>{}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_smooth_corral(actions, model, 100, 0.1, std::vector<int>{7}, 1),
                  std::invalid_argument);
}

TEST_CASE("schedule corral uses the per-iteration tuned learning rate") {
  Rng rng(11);
  const ActionSet actions = sample_sphere_arms(300, 25, rng);
  const RewardModel model = make_paper_model(300, 4, 0.1);
  const CorralScheduleResult run = run_corral_within_schedule(actions, model, 2500, 0.5, 17);

  // d_1 = min(2^7, 300) = 128 and dT_1 = 128, so eta_1 = 1/128.
  REQUIRE(!run.etas.empty());
  CHECK(run.etas[0] == doctest::Approx(1.0 / 128.0).epsilon(1e-12));
  CHECK(run.trace.size() == 2500);
  for (std::size_t j = 0; j < run.mixtures.size(); ++j) {
    CHECK(run.mixtures[j].iteration == static_cast<int>(j) + 1);
    long long total = 0;
    for (long long c : run.mixtures[j].support_counts) total += c;
    CHECK(total == run.mixtures[j].delta_t);
  }
}

TEST_CASE("schedule corral stays in the same regret regime as the direct run") {
  Rng rng(13);
  const ActionSet actions = sample_sphere_arms(16, 10, rng);
  const RewardModel model = make_paper_model(16, 2, 0.05);
  const long long T = 1200;

  double corral_total = 0.0;
  double direct_total = 0.0;
  double random_total = 0.0;
  const Environment env(actions, model, 0);
  double mean_gap = 0.0;
  for (int k = 0; k < actions.num_arms(); ++k) mean_gap += env.gap(k);
  mean_gap /= actions.num_arms();

  for (int trial = 0; trial < 8; ++trial) {
    const std::uint64_t seed = 900 + trial;
    corral_total += run_corral_within_schedule(actions, model, T, 0.5, seed).trace.total();
    direct_total += run_linucb_plus_plus(actions, model, T, 0.5, seed).trace.total();
    random_total += mean_gap * static_cast<double>(T);
  }
  // Both schedule-based algorithms beat uniform play and stay within a small
  // factor of each other on a well-specified instance.
  CHECK(corral_total < random_total);
  CHECK(direct_total < random_total);
  CHECK(corral_total < 4.0 * direct_total + 1.0);
  CHECK(direct_total < 4.0 * corral_total + 1.0);
}

TEST_SUITE_END();
