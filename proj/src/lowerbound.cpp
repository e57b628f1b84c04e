#include "banditlab/lowerbound.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace banditlab {

namespace {

void require(bool ok, const std::string& inequality) {
  if (!ok) throw std::invalid_argument("adversarial family precondition failed: " + inequality);
}

void check_preconditions(long long T, double alpha_prime, double alpha, double B,
                         long long K) {
  require(T >= 2, "T >= 2");
  require(alpha_prime >= 0.0, "alpha' >= 0");
  require(alpha_prime < alpha, "alpha' < alpha");
  require(alpha <= 1.0, "alpha <= 1");
  const double t_alpha = std::pow(static_cast<double>(T), alpha);
  require(t_alpha <= B, "T^alpha <= B");
  require(static_cast<double>(K) >= t_alpha / 4.0, "floor(T^alpha/2) >= T^alpha/4");
  require(static_cast<double>(K) >= std::pow(static_cast<double>(T), alpha_prime),
          "floor(T^alpha/2) >= T^alpha'");
  require(K >= 2, "floor(T^alpha/2) >= 2");
}

}  // namespace

AdversarialFamily build_adversarial_family(long long T, double alpha_prime, double alpha,
                                           double B, bool expressive, int theta0_coord) {
  const double t_alpha = std::pow(static_cast<double>(T), alpha);
  const long long K = static_cast<long long>(std::floor(t_alpha / 2.0));
  check_preconditions(T, alpha_prime, alpha, B, K);

  const long long support_limit =
      static_cast<long long>(std::floor(std::pow(static_cast<double>(T), alpha_prime)));
  if (theta0_coord < 1 || theta0_coord > support_limit) {
    throw std::invalid_argument(
        "adversarial family precondition failed: 1 <= theta0_coord <= floor(T^alpha')");
  }

  AdversarialFamily fam;
  fam.horizon = T;
  fam.alpha_prime = alpha_prime;
  fam.alpha = alpha;
  fam.budget = B;
  fam.K = K;
  fam.rho_offset = K;
  fam.theta0_coord = theta0_coord;
  fam.expressive = expressive;
  fam.delta = std::ldexp(static_cast<double>(K) / B, -5);  // 2^-5 K / B
  fam.dim = static_cast<int>(std::ceil(t_alpha));
  if (fam.dim < static_cast<int>(2 * K)) fam.dim = static_cast<int>(2 * K);

  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(fam.dim);
  theta0[theta0_coord - 1] = fam.delta / 2.0;
  fam.thetas.push_back(theta0);
  for (long long i = 1; i <= K; ++i) {
    Eigen::VectorXd theta = theta0;
    theta[fam.rho_offset + i - 1] += fam.delta;  // rho(i) = K + i, 1-based
    fam.thetas.push_back(std::move(theta));
  }

  const int rows = static_cast<int>(K) + 1 + (expressive ? 1 : 0);
  fam.action_matrix = Eigen::MatrixXd::Zero(rows, fam.dim);
  fam.action_matrix(0, theta0_coord - 1) = 1.0;  // a_0 = theta_0 / ||theta_0||
  for (long long i = 1; i <= K; ++i) {
    fam.action_matrix(static_cast<int>(i), static_cast<int>(fam.rho_offset + i - 1)) = 1.0;
  }
  // When expressive, the trailing all-zero row makes the set closed under
  // truncate-and-pad; it has reward 0 under every instance.

  for (const auto& theta : fam.thetas) {
    if (theta.norm() > 1.0) {
      throw std::invalid_argument("adversarial family precondition failed: ||theta_i|| <= 1");
    }
  }
  return fam;
}

double gaussian_kl(double mu1, double mu2) {
  const double diff = mu1 - mu2;
  return 2.0 * diff * diff;
}

KlAuditResult kl_decomposition_audit(const RegretTrace& trace, const AdversarialFamily& family,
                                     int instance) {
  if (instance < 1 || instance > family.K) {
    throw std::invalid_argument("kl_decomposition_audit: instance index outside [1, K]");
  }
  const Eigen::VectorXd means0 = family.action_matrix * family.thetas[0];
  const Eigen::VectorXd meansI =
      family.action_matrix * family.thetas[static_cast<std::size_t>(instance)];

  double sum = 0.0;
  double comp = 0.0;  // Kahan correction
  long long pulls_of_ai = 0;
  for (const RegretStep& step : trace.steps()) {
    if (step.arm < 0 || step.arm >= family.num_actions()) {
      throw std::invalid_argument("kl_decomposition_audit: trace plays arms outside the family");
    }
    if (step.arm == instance) ++pulls_of_ai;
    const double term = gaussian_kl(means0[step.arm], meansI[step.arm]);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double rhs = 2.0 * static_cast<double>(pulls_of_ai) * family.delta * family.delta;
  return {sum, rhs};
}

double regret_floor(long long T, double alpha, double B) {
  const double t_alpha = std::pow(static_cast<double>(T), alpha);
  const long long K = static_cast<long long>(std::floor(t_alpha / 2.0));
  require(T >= 2, "T >= 2");
  require(alpha >= 0.0 && alpha <= 1.0, "0 <= alpha <= 1");
  require(t_alpha <= B, "T^alpha <= B");
  require(static_cast<double>(K) >= t_alpha / 4.0, "floor(T^alpha/2) >= T^alpha/4");
  require(K >= 2, "floor(T^alpha/2) >= 2");
  return std::ldexp(std::pow(static_cast<double>(T), 1.0 + alpha) / B, -10);
}

void export_family(const AdversarialFamily& family, std::ostream& out) {
  nlohmann::json j;
  j["kind"] = "adversarial-family";
  j["horizon"] = family.horizon;
  j["alpha_prime"] = family.alpha_prime;
  j["alpha"] = family.alpha;
  j["budget"] = family.budget;
  j["K"] = family.K;
  j["delta"] = family.delta;
  j["rho_offset"] = family.rho_offset;
  j["dim"] = family.dim;
  j["theta0_coord"] = family.theta0_coord;
  j["expressive"] = family.expressive;
  j["noise_std"] = AdversarialFamily::kNoiseStd;

  auto vec_to_json = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  nlohmann::json thetas = nlohmann::json::array();
  for (const auto& theta : family.thetas) thetas.push_back(vec_to_json(theta));
  j["thetas"] = std::move(thetas);

  nlohmann::json actions = nlohmann::json::array();
  for (Eigen::Index r = 0; r < family.action_matrix.rows(); ++r) {
    actions.push_back(vec_to_json(family.action_matrix.row(r).transpose()));
  }
  j["actions"] = std::move(actions);

  out << j.dump(2) << '\n';
}

AdversarialFamily import_family(std::istream& in) {
  nlohmann::json j;
  in >> j;
  if (j.value("kind", "") != "adversarial-family") {
    throw std::invalid_argument("import_family: not an adversarial-family document");
  }

  AdversarialFamily fam;
  fam.horizon = j.at("horizon").get<long long>();
  fam.alpha_prime = j.at("alpha_prime").get<double>();
  fam.alpha = j.at("alpha").get<double>();
  fam.budget = j.at("budget").get<double>();
  fam.K = j.at("K").get<long long>();
  fam.delta = j.at("delta").get<double>();
  fam.rho_offset = j.at("rho_offset").get<long long>();
  fam.dim = j.at("dim").get<int>();
  fam.theta0_coord = j.at("theta0_coord").get<int>();
  fam.expressive = j.at("expressive").get<bool>();

  for (const auto& row : j.at("thetas")) {
    const auto values = row.get<std::vector<double>>();
    fam.thetas.push_back(Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                           static_cast<Eigen::Index>(values.size())));
  }
  const auto& actions = j.at("actions");
  fam.action_matrix.resize(static_cast<Eigen::Index>(actions.size()), fam.dim);
  for (std::size_t r = 0; r < actions.size(); ++r) {
    const auto values = actions[r].get<std::vector<double>>();
    if (static_cast<int>(values.size()) != fam.dim) {
      throw std::invalid_argument("import_family: action row has wrong dimension");
    }
    fam.action_matrix.row(static_cast<Eigen::Index>(r)) =
        Eigen::Map<const Eigen::VectorXd>(values.data(), fam.dim).transpose();
  }
  return fam;
}

}  // namespace banditlab
