#include "msepred/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "msepred/error.hpp"
#include "msepred/kernels.hpp"

namespace msepred {
namespace {

void append_interleaved(std::vector<double>& out, const CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i].real());
    out.push_back(v[i].imag());
  }
}

std::vector<double> interleave(const CVec& v) {
  std::vector<double> out;
  out.reserve(2 * v.size());
  append_interleaved(out, v);
  return out;
}

}  // namespace

RVec SearchGrid::point(std::size_t i) const {
  RVec p(param_dim);
  for (int k = 0; k < param_dim; ++k) p[k] = coords[i * param_dim + k];
  return p;
}

SearchGrid uniform_grid(double a, double b, int n) {
  if (!(a < b) || n < 2) throw DomainError("uniform_grid: need a < b and n >= 2");
  SearchGrid g{"uniform", 1, {}};
  g.coords.resize(n);
  for (int i = 0; i < n; ++i) g.coords[i] = a + (b - a) * i / (n - 1);
  g.coords.back() = b;
  return g;
}

SearchGrid sphere_grid(int n_elevation, double density) {
  if (n_elevation < 2 || !(density > 0.0)) {
    throw DomainError("sphere_grid: need >= 2 elevation rings and a positive density");
  }
  SearchGrid g{"sphere", 2, {}};
  for (int k = 0; k < n_elevation; ++k) {
    const double theta = k == n_elevation - 1 ? kPi : kPi * k / (n_elevation - 1);
    const int count = std::max(1, static_cast<int>(std::ceil(density * std::sin(theta))));
    for (int j = 0; j < count; ++j) {
      g.coords.push_back(-kPi + 2.0 * kPi * j / count);
      g.coords.push_back(theta);
    }
  }
  return g;
}

SearchGrid omega_grid(int n) {
  SearchGrid omega = uniform_grid(-kPi, kPi, n);
  SearchGrid g{"omega", 1, {}};
  g.coords.resize(omega.coords.size());
  for (std::size_t i = 0; i < omega.coords.size(); ++i) {
    g.coords[i] = std::acos(std::clamp(omega.coords[i] / kPi, -1.0, 1.0));
  }
  return g;
}

// ---------------------------------------------------------------------------

GridSearchEstimator::GridSearchEstimator(const ManifoldModel& model, SearchGrid grid,
                                         MlObjective objective)
    : grid_(std::move(grid)), row_len_(2 * static_cast<std::size_t>(model.size())) {
  if (grid_.size() == 0) throw DomainError("GridSearchEstimator: empty grid");
  if (grid_.param_dim != model.param_dim()) {
    throw DomainError("GridSearchEstimator: grid dimension does not match the model");
  }
  rows_.reserve(grid_.size() * row_len_);
  norms2_.reserve(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const CVec m = model.mean(grid_.point(i));
    append_interleaved(rows_, m);
    norms2_.push_back(m.squaredNorm());
  }
  const auto [lo, hi] = std::minmax_element(norms2_.begin(), norms2_.end());
  const bool constant_norm = *hi - *lo <= 1e-12 * std::max(1.0, *hi);
  real_part_ = objective == MlObjective::kRealPart ||
               (objective == MlObjective::kAuto && constant_norm);
}

std::size_t GridSearchEstimator::estimate_index(const CVec& x) const {
  if (static_cast<std::size_t>(2 * x.size()) != row_len_) {
    throw DomainError("GridSearchEstimator: measurement length does not match the model");
  }
  const auto xi = interleave(x);
  if (real_part_) return kernels::argmax_affine_dot(rows_, row_len_, xi, 1.0, {});
  // -||x - m||^2 = 2 Re{x^H m} - ||m||^2 - ||x||^2
  std::vector<double> bias(norms2_.size());
  for (std::size_t i = 0; i < bias.size(); ++i) bias[i] = -norms2_[i];
  return kernels::argmax_affine_dot(rows_, row_len_, xi, 2.0, bias);
}

RVec GridSearchEstimator::estimate(const CVec& x) const {
  return grid_.point(estimate_index(x));
}

double GridSearchEstimator::estimate_map(const CVec& x, const BetaPrior& prior,
                                         double sigma2) const {
  if (grid_.param_dim != 1) throw DomainError("estimate_map: scalar grids only");
  if (!(sigma2 > 0.0)) throw DomainError("estimate_map: sigma2 must be positive");
  if (prior.is_flat()) return grid_.scalar(estimate_index(x));
  if (static_cast<std::size_t>(2 * x.size()) != row_len_) {
    throw DomainError("estimate_map: measurement length does not match the model");
  }
  std::vector<double> bias(norms2_.size());
  bool any = false;
  for (std::size_t i = 0; i < bias.size(); ++i) {
    const double lf = prior.log_density(grid_.scalar(i));
    any = any || std::isfinite(lf);
    bias[i] = -norms2_[i] / sigma2 + lf;
  }
  if (!any) throw DomainError("estimate_map: prior density is zero on every grid point");
  const auto xi = interleave(x);
  return grid_.scalar(kernels::argmax_affine_dot(rows_, row_len_, xi, 2.0 / sigma2, bias));
}

RVec ml_grid_estimate(const ManifoldModel& model, const CVec& x, const SearchGrid& grid) {
  return GridSearchEstimator(model, grid).estimate(x);
}

double map_grid_estimate(const ManifoldModel& model, const BetaPrior& prior, const CVec& x,
                         const SearchGrid& grid, double sigma_w2) {
  return GridSearchEstimator(model, grid).estimate_map(x, prior, sigma_w2);
}

// ---------------------------------------------------------------------------

CVec draw_measurement(const ManifoldModel& model, const RVec& theta, double sigma2, Rng& rng) {
  CVec x = model.mean(theta);
  if (model.noise_kind() == NoiseKind::kReal) {
    const double sd = std::sqrt(sigma2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += sd * rng.normal();
  } else {
    x += sample_complex_gaussian(rng, static_cast<int>(x.size()), sigma2);
  }
  return x;
}

McResult run_monte_carlo(const McScenario& scenario, const McEstimator& estimator,
                         std::int64_t n_runs, std::uint64_t seed, int threads) {
  if (n_runs < 2) throw DomainError("run_monte_carlo: need at least 2 runs");
  if (!(scenario.sigma2 > 0.0)) throw DomainError("run_monte_carlo: sigma2 must be positive");
  const ManifoldModel& model = scenario.true_model;
  if (scenario.component < 0 || scenario.component >= model.param_dim()) {
    throw DomainError("run_monte_carlo: component index out of range");
  }
  if (!scenario.prior) model.require_in_support(scenario.theta_bar, "run_monte_carlo");
  threads = std::max(1, threads);

  const RngState root{seed};
  const std::size_t n = static_cast<std::size_t>(n_runs);
  std::vector<double> errors(n, 0.0);
  std::vector<char> failed(n, 0);
  std::vector<std::string> first_failure(static_cast<std::size_t>(threads));

  auto work = [&](std::size_t begin, std::size_t end, std::size_t worker) {
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(root.child(r));
      RVec theta = scenario.theta_bar;
      if (scenario.prior) theta[scenario.component] = scenario.prior->sample(rng);
      try {
        const CVec x = draw_measurement(model, theta, scenario.sigma2, rng);
        const RVec est = estimator(x, theta);
        const double e = est[scenario.component] - theta[scenario.component];
        if (!std::isfinite(e)) throw DomainError("non-finite estimate");
        errors[r] = e;
      } catch (const std::exception& ex) {
        failed[r] = 1;
        if (first_failure[worker].empty()) {
          first_failure[worker] = "run " + std::to_string(r) + ": " + ex.what();
        }
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    work(0, n, 0);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end, w);
    }
    for (auto& t : pool) t.join();
  }

  std::int64_t n_failed = 0;
  for (char f : failed) n_failed += f;
  if (n_failed * 100 > n_runs) {
    std::ostringstream os;
    os << "Monte Carlo aborted: " << n_failed << " of " << n_runs << " runs failed";
    for (const auto& msg : first_failure) {
      if (!msg.empty()) {
        os << " (first failure " << msg << ")";
        break;
      }
    }
    throw MonteCarloAbort(os.str());
  }
  const std::int64_t n_ok = n_runs - n_failed;
  if (n_ok < 2) throw MonteCarloAbort("Monte Carlo aborted: fewer than 2 successful runs");

  double sum_e = 0.0;
  double sum_e2 = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (failed[r]) continue;
    sum_e += errors[r];
    sum_e2 += errors[r] * errors[r];
  }
  McResult out;
  out.n_runs = n_runs;
  out.seed = seed;
  out.n_failed = n_failed;
  out.mse = sum_e2 / static_cast<double>(n_ok);
  out.bias = sum_e / static_cast<double>(n_ok);
  double ss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (failed[r]) continue;
    const double dev = errors[r] * errors[r] - out.mse;
    ss += dev * dev;
  }
  out.stderr_ = std::sqrt(ss / static_cast<double>(n_ok - 1)) / std::sqrt(static_cast<double>(n_ok));
  return out;
}

}  // namespace msepred
