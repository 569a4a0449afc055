#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msepred/models.hpp"
#include "msepred/numeric.hpp"
#include "msepred/predictor.hpp"

namespace msepred {

enum class BoundKind { kCrlb, kMcrlb, kHcrb, kZzb, kBcrlb };

const char* bound_name(BoundKind kind);

struct BoundValue {
  double value = 0.0;
  BoundKind kind = BoundKind::kCrlb;
  /// Maximizing test point (HCRB only).
  std::optional<double> test_point;
  QuadResult quad;
};

enum class DerivativeSource {
  /// Analytic derivative when the model carries one, central difference otherwise.
  kAuto,
  kFiniteDifference,
};

/// Fisher information of a J = 1 parametric mean model: 2 ||m'||^2 / sigma2
/// (||m'||^2 / sigma2 for real noise).
double fisher_information(const ManifoldModel& model, double theta_bar, double sigma2,
                          DerivativeSource source = DerivativeSource::kAuto);

/// 1 / I(theta_bar). Throws DomainError on a vanishing derivative.
BoundValue crlb_scalar(const ManifoldModel& model, double theta_bar, double sigma2,
                       DerivativeSource source = DerivativeSource::kAuto);

/// Diagonal of (2/sigma2 Re{D^H D})^{-1}, D the Jacobian of m at theta_bar.
RVec crlb_joint(const ManifoldModel& model, const RVec& theta_bar, double sigma2);

/// C^{-1} I C^{-1} at theta_bar with
///   I = 2 sigmabar2 ||m'||^2 / sigma2^2,
///   C = (2 / sigma2) (Re{m''^H mu} - ||m'||^2),
/// derivatives taken on the assumed model, mu = mbar - m. Reduces to 1/I = CRLB
/// when mu = 0 and sigmabar2 = sigma2.
BoundValue mcrlb_parametric_mean(const MismatchPair& pair, double theta_bar);

/// max over test points of (phi - theta_bar)^2 / (exp(2 ||m~||^2 / sigma2) - 1).
/// Test points equal to theta_bar are rejected.
BoundValue hcrb_single_test_point(const ManifoldModel& model, double theta_bar, double sigma2,
                                  const std::vector<double>& test_points);

/// Binary Bayes test error probability between phi1 and phi2 with priors pi1, pi2.
double p_min_e(const ManifoldModel& model, double phi1, double phi2, double pi1, double pi2,
               double sigma_w2);

/// 1/2 int_0^pi int_0^{pi-h} h (f(phi) + f(phi+h)) P_min^e(phi, phi+h) dphi dh.
/// `options` drives the outer integral; the inner one is 100x tighter.
BoundValue zzb(const ManifoldModel& model, const BetaPrior& prior, double sigma_w2,
               const QuadOptions& options = {});

/// Closed-form BCRLB for the half-wavelength ULA with an N-sensor array and
/// beta(a, a) prior; snr = |alpha|^2 / sigma_w2 (linear).
BoundValue bcrlb(const BetaPrior& prior, double snr, int n_sensors);

/// Options used by default for the ZZB double integral.
QuadOptions zzb_quad_options();

}  // namespace msepred
