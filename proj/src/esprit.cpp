#include "msepred/esprit.hpp"

#include <algorithm>
#include <cmath>

#include "msepred/error.hpp"

namespace msepred {
namespace {

Complex lag1_sum(const CVec& x) {
  Complex s{0.0, 0.0};
  for (Eigen::Index n = 1; n < x.size(); ++n) s += std::conj(x[n - 1]) * x[n];
  return s;
}

}  // namespace

void EspritScenario::validate() const {
  if (n_sensors < 3) throw DomainError("EspritScenario: need N >= 3");
  if (!(phi_bar > 0.0 && phi_bar < kPi)) {
    throw DomainError("EspritScenario: phi_bar must lie in (0, pi)");
  }
  if (!(sigma_w2 > 0.0)) throw DomainError("EspritScenario: sigma_w2 must be positive");
}

double EspritScenario::omega_bar() const { return kPi * std::cos(phi_bar); }

ManifoldModel EspritScenario::model() const { return ula_manifold(n_sensors, alpha); }

EspritEstimate esprit_estimate(const CVec& x) {
  if (x.size() < 2) throw DomainError("esprit_estimate: need at least 2 samples");
  const Complex s = lag1_sum(x);
  if (s == Complex(0.0, 0.0)) throw DomainError("esprit_estimate: lag-1 sum is zero");
  const double omega = std::arg(s);
  return {omega, std::acos(std::clamp(omega / kPi, -1.0, 1.0))};
}

double esprit_cost(const CVec& x, double omega) {
  const Complex rot = std::polar(1.0, omega);
  double j = 0.0;
  for (Eigen::Index n = 1; n < x.size(); ++n) j += std::norm(x[n] - rot * x[n - 1]);
  return j;
}

Complex q_coefficient(double phi_bar, double epsilon) {
  return std::polar(1.0, kPi * std::cos(phi_bar)) -
         std::polar(1.0, kPi * std::cos(phi_bar + 2.0 * epsilon));
}

Eigen::MatrixXcd build_q_matrix(double phi_bar, double epsilon, int n) {
  if (n < 2) throw DomainError("build_q_matrix: need N >= 2");
  const Complex c = q_coefficient(phi_bar, epsilon);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  // A1^H A0 places x_{k-1} into row k: subdiagonal.
  for (int k = 1; k < n; ++k) {
    q(k, k - 1) = c;
    q(k - 1, k) = std::conj(c);
  }
  return q;
}

DeltaJMoments delta_j_moments(const EspritScenario& scenario, double epsilon) {
  scenario.validate();
  const int n = scenario.n_sensors;
  const Complex c = q_coefficient(scenario.phi_bar, epsilon);
  const CVec m = scenario.model().mean(scenario.phi_bar);

  // m^H Q m = 2 Re{c sum m_k^* m_{k-1}}
  Complex s{0.0, 0.0};
  for (int k = 1; k < n; ++k) s += std::conj(m[k]) * m[k - 1];
  const double mqm = 2.0 * (c * s).real();

  // (Q m)_k = c m_{k-1} + conj(c) m_{k+1}
  double qm2 = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex v{0.0, 0.0};
    if (k > 0) v += c * m[k - 1];
    if (k + 1 < n) v += std::conj(c) * m[k + 1];
    qm2 += std::norm(v);
  }
  const double tr_q2 = 2.0 * (n - 1) * std::norm(c);
  const double s2 = scenario.sigma_w2;
  return {mqm, s2 * s2 * tr_q2 + 2.0 * s2 * qm2};
}

PredictionResult mse_hat_esprit(const EspritScenario& scenario, const QuadOptions& options) {
  scenario.validate();
  auto below = [&](double eps) {
    const DeltaJMoments mom = delta_j_moments(scenario, eps);
    if (!(mom.sigma2_delta > 0.0)) return 1.0;
    return normal_cdf(0.0, mom.mu_delta, mom.sigma2_delta);
  };
  PredictionResult out = mse_hat_generic(below, scenario.phi_bar, {0.0, kPi}, options);
  out.method = "esprit";
  return out;
}

}  // namespace msepred
