#pragma once

// Single-source ESPRIT on a half-wavelength ULA and its Gaussian-fit MSE
// prediction. The cost is J(omega) = sum_{n>=1} |x_n - e^{j omega} x_{n-1}|^2,
// minimized in closed form by omega = arg(sum x_{n-1}^* x_n).

#include "msepred/models.hpp"
#include "msepred/numeric.hpp"
#include "msepred/predictor.hpp"

namespace msepred {

struct EspritScenario {
  int n_sensors = 15;
  Complex alpha{1.0, 0.0};
  double phi_bar = 35.0 * kPi / 180.0;
  double sigma_w2 = 1.0;

  /// Throws DomainError unless N >= 3, phi_bar in (0, pi) and sigma_w2 > 0.
  void validate() const;
  double omega_bar() const;
  ManifoldModel model() const;
};

struct EspritEstimate {
  double omega_hat;
  double phi_hat;
};

/// Throws DomainError when the lag-1 sum vanishes.
EspritEstimate esprit_estimate(const CVec& x);

/// J(omega) evaluated directly from its sum definition.
double esprit_cost(const CVec& x, double omega);

/// Q = c A1^H A0 + conj(c) A0^H A1 with c = e^{j w(phi_bar)} - e^{j w(phi_bar + 2 eps)},
/// so that J(phi_bar + 2 eps) - J(phi_bar) = x^H Q x.
Eigen::MatrixXcd build_q_matrix(double phi_bar, double epsilon, int n);

/// Coefficient c of the subdiagonal of Q.
Complex q_coefficient(double phi_bar, double epsilon);

struct DeltaJMoments {
  double mu_delta = 0.0;
  double sigma2_delta = 0.0;
};

/// Exact mean and variance of x^H Q x for x = m(phi_bar) + w, w ~ CN(0, sigma_w2 I),
/// from the bidiagonal structure of Q (tr Q = 0, tr Q^2 = 2 (N-1) |c|^2).
DeltaJMoments delta_j_moments(const EspritScenario& scenario, double epsilon);

/// 2 * integral |eps| Ncdf(0; mu_Delta, sigma2_Delta) over [-phi_bar/2, (pi - phi_bar)/2];
/// probability 1 at eps = 0.
PredictionResult mse_hat_esprit(const EspritScenario& scenario, const QuadOptions& options = {});

}  // namespace msepred
