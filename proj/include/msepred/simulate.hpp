#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msepred/models.hpp"
#include "msepred/numeric.hpp"
#include "msepred/predictor.hpp"

namespace msepred {

/// Estimator search grid: `size()` points of dimension `param_dim`, stored row-major.
struct SearchGrid {
  std::string tag;
  int param_dim = 1;
  std::vector<double> coords;

  std::size_t size() const { return coords.size() / static_cast<std::size_t>(param_dim); }
  RVec point(std::size_t i) const;
  double scalar(std::size_t i) const { return coords[i * param_dim]; }
};

/// n equally spaced points on [a, b], both endpoints included.
SearchGrid uniform_grid(double a, double b, int n);

/// Azimuth-elevation grid: n_elevation rings at linspace(0, pi), ring k carrying
/// max(1, ceil(density sin theta_k)) azimuths spaced uniformly over [-pi, pi).
/// Points are (phi, theta).
SearchGrid sphere_grid(int n_elevation = 200, double density = 100.0);

/// n uniform omega in [-pi, pi] mapped to phi = arccos(omega / pi).
SearchGrid omega_grid(int n = 8192);

enum class MlObjective {
  /// Constant-norm manifolds: Re{x^H m} when ||m|| is constant over the grid,
  /// the full Gaussian log-likelihood otherwise.
  kAuto,
  kRealPart,
  kNegativeDistance,
};

/// Grid-search ML/MAP estimator with the manifold precomputed over the grid.
/// Immutable after construction; estimate() is safe to call concurrently.
class GridSearchEstimator {
 public:
  GridSearchEstimator(const ManifoldModel& model, SearchGrid grid,
                      MlObjective objective = MlObjective::kAuto);

  /// argmax over the grid; ties go to the lowest index.
  RVec estimate(const CVec& x) const;
  std::size_t estimate_index(const CVec& x) const;

  /// argmax of -||x - m||^2 / sigma2 + ln f(phi) over grid points with positive
  /// prior density. A flat prior gives exactly estimate(x).
  double estimate_map(const CVec& x, const BetaPrior& prior, double sigma2) const;

  const SearchGrid& grid() const { return grid_; }
  bool uses_real_part() const { return real_part_; }

 private:
  SearchGrid grid_;
  std::size_t row_len_;
  std::vector<double> rows_;
  std::vector<double> norms2_;
  bool real_part_;
};

RVec ml_grid_estimate(const ManifoldModel& model, const CVec& x, const SearchGrid& grid);
double map_grid_estimate(const ManifoldModel& model, const BetaPrior& prior, const CVec& x,
                         const SearchGrid& grid, double sigma_w2);

struct McScenario {
  /// Data model m_true; estimators may assume something else.
  ManifoldModel true_model;
  RVec theta_bar;
  double sigma2 = 1.0;
  /// Component of the parameter vector whose error is accumulated.
  int component = 0;
  /// When set, theta[component] is drawn from the prior on every run.
  std::optional<BetaPrior> prior;
};

struct McResult {
  double mse = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_runs = 0;
  std::uint64_t seed = 0;
  double bias = 0.0;
  std::int64_t n_failed = 0;
};

/// Estimator callback: (measurement, true parameter) -> estimate. Throwing marks
/// the run as failed.
using McEstimator = std::function<RVec(const CVec& x, const RVec& truth)>;

/// Seeded Monte Carlo. Run r draws its noise (and prior sample) from
/// RngState{seed}.child(r); squared errors are summed in run order, so the
/// result is bit-identical for any thread count. Throws MonteCarloAbort when
/// more than 1% of the runs fail.
McResult run_monte_carlo(const McScenario& scenario, const McEstimator& estimator,
                         std::int64_t n_runs, std::uint64_t seed, int threads = 1);

/// One measurement x = m_true(theta) + v for a run.
CVec draw_measurement(const ManifoldModel& model, const RVec& theta, double sigma2, Rng& rng);

}  // namespace msepred
