#pragma once

// Predicted MSE of implicitly defined estimators:
//
//   MSE-hat(theta) = 2 * integral |eps| P(L(x; theta + 2 eps) >= L(x; theta)) d eps
//
// over the error range permitted by the parameter support.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "msepred/models.hpp"
#include "msepred/numeric.hpp"

namespace msepred {

struct PredictionResult {
  double mse = 0.0;
  QuadResult quad;
  std::string method;
  /// Monte Carlo standard error of `mse`; zero for deterministic forms.
  double stderr_ = 0.0;
};

/// Nuisance-parameter candidates. points[true_index] is the true value.
struct NuisanceGrid {
  std::vector<RVec> points;
  std::size_t true_index = 0;
};

/// Symmetric beta prior on [0, pi]:
/// f(phi) = (phi/pi)^(a-1) ((pi-phi)/pi)^(a-1) / (pi B(a, a)).
/// The flat prior (a = 1) is a separate uniform override.
class BetaPrior {
 public:
  /// Throws DomainError unless a > 2.
  static BetaPrior symmetric(double a);
  static BetaPrior flat();

  bool is_flat() const { return flat_; }
  double a() const { return a_; }
  Interval support() const { return {0.0, kPi}; }

  double density(double phi) const;
  /// -inf where the density is zero (endpoints, outside the support).
  double log_density(double phi) const;
  /// Draw phi ~ f.
  double sample(Rng& rng) const;

 private:
  BetaPrior(double a, bool flat);

  double a_;
  bool flat_;
  double log_norm_;
};

/// eps range [(lo - theta_bar)/2, (hi - theta_bar)/2] for a parameter on [lo, hi].
Interval epsilon_limits(double theta_bar, const Interval& support);

using ExceedProbability = std::function<double(double eps)>;

/// 2 * integral |eps| exceed(eps) over epsilon_limits(theta_bar, support).
/// Throws ContractError when exceed() leaves [0, 1] by more than 1e-9.
PredictionResult mse_hat_generic(const ExceedProbability& exceed, double theta_bar,
                                 const Interval& support, const QuadOptions& options = {});

/// ML on a J = 1 parametric mean model: P = ccdf(||m~||; 0, 2 sigma2), with
/// 4 sigma2 for real-valued noise.
PredictionResult mse_hat_ml_scalar(const ManifoldModel& model, double theta_bar, double sigma2,
                                   const QuadOptions& options = {});

/// Pairwise error probability used by mse_hat_ml_scalar.
double ml_exceed_probability(double mtilde_norm, double sigma2, NoiseKind noise);

/// [theta, theta - d, theta + d] with d = logspace(log10 lower_floor, log10 e_max, n_log).
/// Points outside `support` are dropped.
NuisanceGrid build_nuisance_grid(double theta_bar_nuis, double e_max, int n_log = 60,
                                 double lower_floor = 1e-7,
                                 Interval support = {-1e300, 1e300});

/// Nuisance-parameter ML prediction using the smallest ||m~|| over the grid.
/// `index` selects the estimated component of theta_bar; grid points hold the
/// remaining components in order.
PredictionResult mse_hat_ml_nuisance_min(const ManifoldModel& model, const RVec& theta_bar,
                                         int index, const NuisanceGrid& grid, double sigma2,
                                         const QuadOptions& options = {});

struct FullNuisanceOptions {
  int mc_samples = 2000;
  /// Independent batches used for the standard error.
  int batches = 10;
  int max_grid = 25;
  RngState rng{0x5eed};
};

/// Nuisance-parameter ML prediction with the exact union event: 1 minus a
/// K-variate normal lower-orthant probability, estimated with common random
/// numbers across eps. Throws DomainError when the grid exceeds max_grid.
PredictionResult mse_hat_ml_nuisance_full(const ManifoldModel& model, const RVec& theta_bar,
                                          int index, const NuisanceGrid& grid, double sigma2,
                                          const FullNuisanceOptions& mc = {},
                                          const QuadOptions& options = {});

/// Misspecified ML: m~ from the assumed model, mismatch mu(theta_bar), true noise variance.
PredictionResult mse_hat_mml(const MismatchPair& pair, double theta_bar,
                             const QuadOptions& options = {});

/// Per-phi MAP prediction on a J = 1 model over [0, pi].
PredictionResult mse_hat_map_at(const ManifoldModel& model, const BetaPrior& prior, double phi,
                                double sigma2, const QuadOptions& options = {});

/// integral f(phi) per_theta(phi) d phi by the trapezoid rule on 0, h, 2h, ..., pi.
/// Nodes with zero density contribute zero and are not evaluated.
double bayes_average(const BetaPrior& prior, const std::function<double(double)>& per_theta,
                     double grid_spacing = 0.01);

/// Tolerances used for the per-phi Bayesian integrals (AbsTol 1e-18, RelTol 1e-12).
QuadOptions bayesian_quad_options();

}  // namespace msepred
