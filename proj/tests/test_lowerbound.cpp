#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/lowerbound.hpp"

using namespace banditlab;

namespace {

// Uniform random play over the family's action set under instance theta_0.
RegretTrace random_play_trace(const AdversarialFamily& fam, long long T, std::uint64_t seed) {
  const ActionSet actions = fam.actions();
  const Environment env(actions, fam.model(0), mix_seed(seed, kNoiseStream));
  Rng rng(mix_seed(seed, kPolicyStream));
  RegretTrace trace;
  for (long long t = 0; t < T; ++t) {
    const int arm = static_cast<int>(rng.uniform() * fam.num_actions());
    trace.add(arm, env.pull(t, arm), env.gap(arm));
  }
  return trace;
}

}  // namespace

TEST_SUITE_BEGIN("lowerbound");

TEST_CASE("family constants at the reference configuration") {
  const AdversarialFamily fam = build_adversarial_family(2500, 0.0, 0.5, 50.0);
  CHECK(fam.K == 25);
  CHECK(fam.delta == doctest::Approx(0.015625).epsilon(1e-15));  // 2^-5 * 25 / 50
  CHECK(fam.rho_offset + 1 == 26);                               // rho(1)
  CHECK(fam.theta0_coord == 1);
  CHECK(fam.num_actions() == 26);

  // theta_i = theta_0 + delta * e_{rho(i)}.
  for (int i = 1; i <= fam.K; ++i) {
    const Eigen::VectorXd diff = fam.thetas[i] - fam.thetas[0];
    CHECK(diff.lpNorm<1>() == doctest::Approx(fam.delta).epsilon(1e-15));
    CHECK(diff[fam.rho_offset + i - 1] == doctest::Approx(fam.delta).epsilon(1e-15));
  }
  CHECK(fam.thetas[0].norm() == doctest::Approx(fam.delta / 2).epsilon(1e-12));
}

TEST_CASE("family norms respect the construction bound") {
  const AdversarialFamily fam = build_adversarial_family(2500, 0.0, 0.5, 50.0);
  for (const auto& theta : fam.thetas) {
    CHECK(theta.norm() <= std::sqrt(5.0) * fam.delta / 2.0 + 1e-15);
    CHECK(theta.norm() <= 1.0);
  }
  for (int a = 0; a < fam.num_actions(); ++a) {
    CHECK(fam.action_matrix.row(a).norm() <= 1.0 + 1e-12);
  }
  CHECK(fam.delta <= std::ldexp(1.0, -5));
}

TEST_CASE("each instance's best arm beats a_0 by delta/2 and e-arms by delta") {
  const AdversarialFamily fam = build_adversarial_family(1000, 0.0, 0.6, 70.0);
  const ActionSet actions = fam.actions();
  for (int i = 1; i <= std::min<long long>(fam.K, 8); ++i) {
    const BestArm best = best_arm_and_gap(actions, fam.model(i));
    CHECK(best.index == i);
    CHECK(best.gaps[0] == doctest::Approx(fam.delta / 2).epsilon(1e-12));
    for (int a = 1; a < fam.num_actions(); ++a) {
      if (a == i) {
        CHECK(best.gaps[a] == 0.0);
      } else if (a <= fam.K) {
        CHECK(best.gaps[a] == doctest::Approx(fam.delta).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("under theta_0 the planted arms are indistinguishable until pulled") {
  const AdversarialFamily fam = build_adversarial_family(1500, 0.2, 0.7, 200.0);
  const Eigen::VectorXd means = fam.action_matrix * fam.thetas[0];
  for (int i = 1; i <= fam.K; ++i) CHECK(means[i] == 0.0);
  CHECK(means[0] == doctest::Approx(fam.delta / 2).epsilon(1e-12));
}

TEST_CASE("expressive flag appends the all-zero action") {
  const AdversarialFamily fam = build_adversarial_family(2500, 0.0, 0.5, 50.0, true);
  CHECK(fam.num_actions() == 27);
  CHECK(fam.action_matrix.row(26).norm() == 0.0);
}

TEST_CASE("precondition violations name the failed inequality") {
  CHECK_THROWS_WITH_AS(build_adversarial_family(2500, 0.5, 0.5, 50.0),
                       "adversarial family precondition failed: alpha' < alpha",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_adversarial_family(2500, 0.0, 0.5, 49.0),
                       "adversarial family precondition failed: T^alpha <= B",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_adversarial_family(9, 0.0, 0.5, 50.0),
                       "adversarial family precondition failed: floor(T^alpha/2) >= 2",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_adversarial_family(2500, 0.0, 1.1, 1e5),
                       "adversarial family precondition failed: alpha <= 1",
                       std::invalid_argument);
  CHECK_THROWS_AS(build_adversarial_family(2500, 0.0, 0.5, 50.0, false, 2),
                  std::invalid_argument);  // theta_0 support above floor(T^alpha')
}

TEST_CASE("gaussian divergence closed form") {
  CHECK(gaussian_kl(0.3, 0.3) == 0.0);
  CHECK(gaussian_kl(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gaussian_kl(-0.25, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed form agrees with numerical quadrature") {
  const double sigma2 = 0.25;
  for (double mu1 : {-0.8, -0.2, 0.0, 0.4, 0.9}) {
    for (double mu2 : {-0.7, 0.0, 0.3, 1.0}) {
      const double lo = mu1 - 8.0;
      const double hi = mu1 + 8.0;
      const int n = 4000;
      const double h = (hi - lo) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double x = lo + h * i;
        const double p = std::exp(-(x - mu1) * (x - mu1) / (2 * sigma2)) /
                         std::sqrt(2 * M_PI * sigma2);
        const double log_ratio =
            (-(x - mu1) * (x - mu1) + (x - mu2) * (x - mu2)) / (2 * sigma2);
        acc += p * log_ratio * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
      }
      acc *= h / 3.0;
      CHECK(acc == doctest::Approx(gaussian_kl(mu1, mu2)).epsilon(1e-6));
    }
  }
}

TEST_CASE("divergence audit counts only separating pulls") {
  const AdversarialFamily fam = build_adversarial_family(400, 0.0, 0.6, 40.0);
  const Environment env(fam.actions(), fam.model(0), 7);

  // Never pulling a_i keeps both sides at zero.
  RegretTrace none;
  for (int t = 0; t < 50; ++t) none.add(0, env.pull(t, 0), env.gap(0));
  const KlAuditResult zero = kl_decomposition_audit(none, fam, 1);
  CHECK(zero.per_step_sum == 0.0);
  CHECK(zero.pull_count_form == 0.0);

  // n pulls of a_i contribute 2 n delta^2 to both sides.
  RegretTrace some;
  const int n = 17;
  for (int t = 0; t < n; ++t) some.add(2, env.pull(t, 2), env.gap(2));
  for (int t = n; t < n + 30; ++t) some.add(5, env.pull(t, 5), env.gap(5));
  const KlAuditResult out = kl_decomposition_audit(some, fam, 2);
  CHECK(out.pull_count_form == doctest::Approx(2.0 * n * fam.delta * fam.delta).epsilon(1e-15));
  CHECK(std::abs(out.per_step_sum - out.pull_count_form) <= 1e-12);
}

TEST_CASE("all-zero-arm pulls change neither audit side") {
  const AdversarialFamily fam = build_adversarial_family(400, 0.0, 0.6, 40.0, true);
  const Environment env(fam.actions(), fam.model(0), 11);
  const int zero_arm = fam.num_actions() - 1;

  RegretTrace trace;
  for (int t = 0; t < 10; ++t) trace.add(1, env.pull(t, 1), env.gap(1));
  const KlAuditResult before = kl_decomposition_audit(trace, fam, 1);
  for (int t = 10; t < 40; ++t) trace.add(zero_arm, env.pull(t, zero_arm), env.gap(zero_arm));
  const KlAuditResult after = kl_decomposition_audit(trace, fam, 1);
  CHECK(before.per_step_sum == after.per_step_sum);
  CHECK(before.pull_count_form == after.pull_count_form);
}

TEST_CASE("audit sides agree on simulated traces") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const AdversarialFamily fam = build_adversarial_family(600, 0.1, 0.65, 80.0, rep % 2 == 1);
    const RegretTrace trace = random_play_trace(fam, 300, 50 + rep);
    const int instance = 1 + static_cast<int>(rng.uniform() * fam.K);
    const KlAuditResult audit = kl_decomposition_audit(trace, fam, instance);
    CHECK(std::abs(audit.per_step_sum - audit.pull_count_form) <=
          1e-12 * std::max(1.0, audit.pull_count_form));
  }
}

TEST_CASE("regret floor formula and crossover") {
  const double floor = regret_floor(2500, 0.5, 50.0);
  CHECK(floor == doctest::Approx(std::pow(2500.0, 1.5) / (1024.0 * 50.0)).epsilon(1e-12));

  // Floor exceeds the budget exactly when T^{1+alpha} > 2^10 B^2.
  const double B = 40.0;
  for (double alpha : {0.5, 0.7}) {
    for (long long T : {900LL, 2500LL}) {
      if (std::pow(static_cast<double>(T), alpha) > B) continue;
      const double f = regret_floor(T, alpha, B);
      const bool exceeds = std::pow(static_cast<double>(T), 1.0 + alpha) > 1024.0 * B * B;
      CHECK((f > B) == exceeds);
    }
  }

  // Linear-regret corner: alpha = 1, B = T.
  CHECK(regret_floor(4096, 1.0, 4096.0) ==
        doctest::Approx(std::ldexp(4096.0, -10)).epsilon(1e-12));
  CHECK_THROWS_AS(regret_floor(2500, 0.5, 10.0), std::invalid_argument);
}

TEST_CASE("family round-trips through the structured-text export") {
  const AdversarialFamily fam = build_adversarial_family(800, 0.1, 0.55, 60.0, true, 1);
  std::stringstream buffer;
  export_family(fam, buffer);
  const AdversarialFamily back = import_family(buffer);

  CHECK(back.K == fam.K);
  CHECK(back.delta == fam.delta);
  CHECK(back.dim == fam.dim);
  CHECK(back.expressive == fam.expressive);
  REQUIRE(back.thetas.size() == fam.thetas.size());
  for (std::size_t i = 0; i < fam.thetas.size(); ++i) {
    CHECK(back.thetas[i] == fam.thetas[i]);
  }
  CHECK(back.action_matrix == fam.action_matrix);
}

TEST_SUITE_END();
