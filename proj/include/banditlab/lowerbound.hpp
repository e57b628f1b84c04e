#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "banditlab/core.hpp"

namespace banditlab {

/// Adversarial instance family over a fixed action set: theta_0 sits on a
/// single low coordinate with norm delta/2, and theta_i = theta_0 +
/// delta * e_{rho(i)} with rho(i) = K + i plants a better arm on a high
/// coordinate that only arm a_i can see. Rewards carry N(0, 1/4) noise.
struct AdversarialFamily {
  std::vector<Eigen::VectorXd> thetas;  // theta_0 .. theta_K
  Eigen::MatrixXd action_matrix;        // a_0, a_1..a_K (+ zero arm when expressive)
  double delta = 0.0;
  long long K = 0;
  long long rho_offset = 0;  // floor(T^alpha / 2)
  double alpha_prime = 0.0;
  double alpha = 0.0;
  double budget = 0.0;
  long long horizon = 0;
  int dim = 0;
  int theta0_coord = 1;  // 1-based support coordinate of theta_0
  bool expressive = false;

  static constexpr double kNoiseStd = 0.5;  // variance 1/4

  ActionSet actions() const { return ActionSet(action_matrix); }
  RewardModel model(int instance) const {
    return RewardModel(thetas.at(static_cast<std::size_t>(instance)), kNoiseStd);
  }
  int num_actions() const { return static_cast<int>(action_matrix.rows()); }
};

/// Builds the family with K = floor(T^alpha / 2) and delta = 2^-5 K / B,
/// rejecting any violated precondition with the failed inequality named.
/// With `expressive` set an all-zero action is appended.
AdversarialFamily build_adversarial_family(long long T, double alpha_prime, double alpha,
                                           double B, bool expressive = false,
                                           int theta0_coord = 1);

/// KL divergence between N(mu1, 1/4) and N(mu2, 1/4): 2 (mu1 - mu2)^2.
double gaussian_kl(double mu1, double mu2);

struct KlAuditResult {
  double per_step_sum;   // sum_t KL(N(<theta_0, A_t>, 1/4), N(<theta_i, A_t>, 1/4))
  double pull_count_form;  // 2 * N_i(T) * delta^2
};

/// Audits the divergence decomposition on a trace generated under theta_0:
/// only pulls of a_i separate the two instances, so both forms agree.
KlAuditResult kl_decomposition_audit(const RegretTrace& trace, const AdversarialFamily& family,
                                     int instance);

/// Guaranteed worst-case regret 2^-10 T^{1+alpha} / B for any algorithm whose
/// regret on the easier family stays within budget B.
double regret_floor(long long T, double alpha, double B);

void export_family(const AdversarialFamily& family, std::ostream& out);
AdversarialFamily import_family(std::istream& in);

}  // namespace banditlab
