#include "msepred/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msepred/error.hpp"

namespace msepred {
namespace {

constexpr int kGradedPanels = 24;

void require_scalar_model(const ManifoldModel& model, const char* who) {
  if (model.param_dim() != 1) {
    throw DomainError(std::string(who) + ": model must have a single parameter (use slice())");
  }
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

double clamp_to(const Interval& s, double theta) { return std::clamp(theta, s.lo, s.hi); }

// Variance of the ccdf in the pairwise error probability: complex circular
// noise gives 2 sigma2, real noise 4 sigma2.
double pep_variance(double sigma2, NoiseKind noise) {
  return noise == NoiseKind::kReal ? 4.0 * sigma2 : 2.0 * sigma2;
}

QuadOptions with_breakpoint(QuadOptions options, double at) {
  options.breakpoints.push_back(at);
  return options;
}

RVec embed(const RVec& theta_bar, int index, double value, const RVec& nuisance) {
  RVec full(theta_bar.size());
  int k = 0;
  for (int i = 0; i < theta_bar.size(); ++i) {
    full[i] = i == index ? value : nuisance[k++];
  }
  return full;
}

void check_nuisance_setup(const ManifoldModel& model, const RVec& theta_bar, int index,
                          const NuisanceGrid& grid, const char* who) {
  const int j = model.param_dim();
  if (j < 2) throw DomainError(std::string(who) + ": model has no nuisance parameters");
  if (index < 0 || index >= j) throw DomainError(std::string(who) + ": index out of range");
  model.require_in_support(theta_bar, who);
  if (grid.points.empty()) throw DomainError(std::string(who) + ": empty nuisance grid");
  if (grid.true_index >= grid.points.size()) {
    throw DomainError(std::string(who) + ": true_index outside the grid");
  }
  for (const auto& p : grid.points) {
    if (p.size() != j - 1) throw DomainError(std::string(who) + ": grid point has wrong length");
  }
  const RVec& truth = grid.points[grid.true_index];
  int k = 0;
  for (int i = 0; i < j; ++i) {
    if (i == index) continue;
    if (truth[k++] != theta_bar[i]) {
      throw DomainError(std::string(who) + ": grid does not contain the true nuisance value");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

BetaPrior::BetaPrior(double a, bool flat) : a_(a), flat_(flat) {
  if (flat_) {
    log_norm_ = -std::log(kPi);
  } else {
    // -ln(pi B(a, a))
    log_norm_ = -std::log(kPi) - (2.0 * std::lgamma(a) - std::lgamma(2.0 * a));
  }
}

BetaPrior BetaPrior::symmetric(double a) {
  if (!(a > 2.0) || !std::isfinite(a)) {
    throw DomainError("BetaPrior: shape a must exceed 2");
  }
  return BetaPrior(a, false);
}

BetaPrior BetaPrior::flat() { return BetaPrior(1.0, true); }

double BetaPrior::log_density(double phi) const {
  if (!(phi >= 0.0 && phi <= kPi)) return -std::numeric_limits<double>::infinity();
  if (flat_) return log_norm_;
  if (phi == 0.0 || phi == kPi) return -std::numeric_limits<double>::infinity();
  return log_norm_ + (a_ - 1.0) * (std::log(phi / kPi) + std::log((kPi - phi) / kPi));
}

double BetaPrior::density(double phi) const { return std::exp(log_density(phi)); }

double BetaPrior::sample(Rng& rng) const {
  return flat_ ? kPi * rng.uniform() : kPi * rng.beta(a_, a_);
}

// ---------------------------------------------------------------------------

Interval epsilon_limits(double theta_bar, const Interval& support) {
  return {(support.lo - theta_bar) / 2.0, (support.hi - theta_bar) / 2.0};
}

PredictionResult mse_hat_generic(const ExceedProbability& exceed, double theta_bar,
                                 const Interval& support, const QuadOptions& options) {
  if (!(support.lo < support.hi)) throw DomainError("mse_hat_generic: empty support");
  if (!support.contains(theta_bar)) {
    throw DomainError("mse_hat_generic: theta_bar outside the support");
  }
  const Interval lim = epsilon_limits(theta_bar, support);
  auto integrand = [&](double eps) {
    const double p = exceed(eps);
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
      throw ContractError("mse_hat_generic: exceedance probability " + std::to_string(p) +
                          " at eps = " + std::to_string(eps) + " is not in [0, 1]");
    }
    return std::abs(eps) * std::clamp(p, 0.0, 1.0);
  };
  PredictionResult out;
  out.method = "generic";
  if (lim.lo == lim.hi) return out;
  QuadOptions opts = options;
  if (lim.lo < 0.0 && lim.hi > 0.0) opts = with_breakpoint(opts, 0.0);
  // The probability falls off on a scale set by the noise level, which can be
  // many decades below the support width. Grade the initial panels toward
  // eps = 0 so the error estimate sees that scale.
  for (double edge : {lim.lo, lim.hi}) {
    for (int k = 1; k <= kGradedPanels; ++k) {
      const double at = std::ldexp(edge, -k);
      if (at != 0.0) opts = with_breakpoint(opts, at);
    }
  }
  out.quad = adaptive_quad(integrand, lim.lo, lim.hi, opts);
  out.quad.value *= 2.0;
  out.quad.abs_error_estimate *= 2.0;
  out.mse = std::max(0.0, out.quad.value);
  return out;
}

double ml_exceed_probability(double mtilde_norm, double sigma2, NoiseKind noise) {
  return normal_ccdf(mtilde_norm, 0.0, pep_variance(sigma2, noise));
}

PredictionResult mse_hat_ml_scalar(const ManifoldModel& model, double theta_bar, double sigma2,
                                   const QuadOptions& options) {
  require_scalar_model(model, "mse_hat_ml_scalar");
  require_positive(sigma2, "mse_hat_ml_scalar: sigma2");
  const CVec m0 = model.mean(theta_bar);
  const Interval& s = model.support(0);
  const NoiseKind noise = model.noise_kind();
  auto exceed = [&](double eps) {
    const double theta = clamp_to(s, theta_bar + 2.0 * eps);
    const double d = (model.mean_unchecked(scalar_param(theta)) - m0).norm();
    return ml_exceed_probability(d, sigma2, noise);
  };
  PredictionResult out = mse_hat_generic(exceed, theta_bar, s, options);
  out.method = "ml";
  return out;
}

// ---------------------------------------------------------------------------

NuisanceGrid build_nuisance_grid(double theta_bar_nuis, double e_max, int n_log,
                                 double lower_floor, Interval support) {
  if (!(lower_floor > 0.0) || !(e_max > lower_floor)) {
    throw DomainError("build_nuisance_grid: need e_max > lower_floor > 0");
  }
  if (n_log < 1) throw DomainError("build_nuisance_grid: n_log must be >= 1");
  std::vector<double> offsets(n_log);
  const double lo = std::log10(lower_floor);
  const double hi = std::log10(e_max);
  for (int k = 0; k < n_log; ++k) {
    offsets[k] = n_log == 1 ? e_max : std::pow(10.0, lo + k * (hi - lo) / (n_log - 1));
  }
  offsets.front() = n_log == 1 ? e_max : lower_floor;
  offsets.back() = e_max;

  NuisanceGrid grid;
  grid.points.push_back(scalar_param(theta_bar_nuis));
  grid.true_index = 0;
  for (int sign : {-1, 1}) {
    for (double d : offsets) {
      const double value = theta_bar_nuis + sign * d;
      if (support.contains(value)) grid.points.push_back(scalar_param(value));
    }
  }
  return grid;
}

PredictionResult mse_hat_ml_nuisance_min(const ManifoldModel& model, const RVec& theta_bar,
                                         int index, const NuisanceGrid& grid, double sigma2,
                                         const QuadOptions& options) {
  check_nuisance_setup(model, theta_bar, index, grid, "mse_hat_ml_nuisance_min");
  require_positive(sigma2, "mse_hat_ml_nuisance_min: sigma2");
  const CVec m0 = model.mean(theta_bar);
  const Interval& s = model.support(index);
  const NoiseKind noise = model.noise_kind();
  const double target = theta_bar[index];
  auto exceed = [&](double eps) {
    const double theta = clamp_to(s, target + 2.0 * eps);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& nuis : grid.points) {
      const CVec m = model.mean_unchecked(embed(theta_bar, index, theta, nuis));
      best = std::min(best, (m - m0).norm());
    }
    return ml_exceed_probability(best, sigma2, noise);
  };
  PredictionResult out = mse_hat_generic(exceed, target, s, options);
  out.method = "ml-nuisance-min";
  return out;
}

PredictionResult mse_hat_ml_nuisance_full(const ManifoldModel& model, const RVec& theta_bar,
                                          int index, const NuisanceGrid& grid, double sigma2,
                                          const FullNuisanceOptions& mc,
                                          const QuadOptions& options) {
  check_nuisance_setup(model, theta_bar, index, grid, "mse_hat_ml_nuisance_full");
  require_positive(sigma2, "mse_hat_ml_nuisance_full: sigma2");
  const int k = static_cast<int>(grid.points.size());
  if (k > mc.max_grid) {
    throw DomainError("mse_hat_ml_nuisance_full: grid has " + std::to_string(k) +
                      " points, above the cap of " + std::to_string(mc.max_grid) +
                      "; use the min-distance form for large grids");
  }
  if (mc.batches < 2 || mc.mc_samples < mc.batches) {
    throw DomainError("mse_hat_ml_nuisance_full: need >= 2 batches and >= 1 sample per batch");
  }
  const CVec m0 = model.mean(theta_bar);
  const Interval& s = model.support(index);
  const double target = theta_bar[index];
  const int n = model.size();
  const bool real_noise = model.noise_kind() == NoiseKind::kReal;
  const int per_batch = mc.mc_samples / mc.batches;

  std::vector<double> values;
  PredictionResult out;
  out.method = "ml-nuisance-full";
  for (int b = 0; b < mc.batches; ++b) {
    const OrthantSampler sampler(k, per_batch, mc.rng.child(static_cast<std::uint64_t>(b)),
                                 OrthantMethod::kSphericalRadial);
    auto exceed = [&](double eps) {
      const double theta = clamp_to(s, target + 2.0 * eps);
      Eigen::MatrixXcd diff(n, k);
      for (int i = 0; i < k; ++i) {
        diff.col(i) = model.mean_unchecked(embed(theta_bar, index, theta, grid.points[i])) - m0;
      }
      RVec mu(k);
      for (int i = 0; i < k; ++i) mu[i] = diff.col(i).squaredNorm();
      RMat cov;
      if (real_noise) {
        const RMat re = diff.real();
        cov = 4.0 * sigma2 * (re.transpose() * re);
      } else {
        cov = 2.0 * sigma2 * (diff.adjoint() * diff).real();
      }
      cov = 0.5 * (cov + cov.transpose());
      return sampler.upper_complement(mu, cov).probability;
    };
    const PredictionResult batch = mse_hat_generic(exceed, target, s, options);
    values.push_back(batch.mse);
    out.quad.n_evals += batch.quad.n_evals;
    out.quad.abs_error_estimate += batch.quad.abs_error_estimate / mc.batches;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  out.mse = mean;
  out.quad.value = mean;
  out.stderr_ = sd / std::sqrt(static_cast<double>(values.size()));
  return out;
}

// ---------------------------------------------------------------------------

PredictionResult mse_hat_mml(const MismatchPair& pair, double theta_bar,
                             const QuadOptions& options) {
  pair.validate();
  require_scalar_model(pair.assumed_model, "mse_hat_mml");
  const ManifoldModel& assumed = pair.assumed_model;
  const CVec m0 = assumed.mean(theta_bar);
  const CVec mu = pair.mismatch(scalar_param(theta_bar));
  const Interval& s = assumed.support(0);
  const double var = pep_variance(pair.true_noise_variance, assumed.noise_kind());
  auto exceed = [&](double eps) {
    const double theta = clamp_to(s, theta_bar + 2.0 * eps);
    const CVec mt = assumed.mean_unchecked(scalar_param(theta)) - m0;
    const double d = mt.norm();
    if (d == 0.0) return 0.5;
    const double shift = 2.0 * mt.dot(mu).real() / d;  // Eigen dot conjugates the first argument
    return normal_ccdf(d - shift, 0.0, var);
  };
  PredictionResult out = mse_hat_generic(exceed, theta_bar, s, options);
  out.method = "mml";
  return out;
}

PredictionResult mse_hat_map_at(const ManifoldModel& model, const BetaPrior& prior, double phi,
                                double sigma2, const QuadOptions& options) {
  require_scalar_model(model, "mse_hat_map_at");
  require_positive(sigma2, "mse_hat_map_at: sigma2");
  if (prior.is_flat()) {
    PredictionResult out = mse_hat_ml_scalar(model, phi, sigma2, options);
    out.method = "map";
    return out;
  }
  const double log_f0 = prior.log_density(phi);
  if (!std::isfinite(log_f0)) {
    throw DomainError("mse_hat_map_at: phi must lie strictly inside the prior support");
  }
  const CVec m0 = model.mean(phi);
  const Interval& ms = model.support(0);
  const Interval ps = prior.support();
  const Interval s{std::max(ms.lo, ps.lo), std::min(ms.hi, ps.hi)};
  if (!s.contains(phi)) throw DomainError("mse_hat_map_at: phi outside the model support");
  const bool real_noise = model.noise_kind() == NoiseKind::kReal;
  // Prior term weight: sigma2 for complex noise, 2 sigma2 for real noise.
  const double weight = real_noise ? 2.0 * sigma2 : sigma2;
  const double var = pep_variance(sigma2, model.noise_kind());

  auto exceed = [&](double eps) {
    const double theta = clamp_to(s, phi + 2.0 * eps);
    const double log_f1 = prior.log_density(theta);
    if (!std::isfinite(log_f1)) return 0.0;
    const double d = (model.mean_unchecked(scalar_param(theta)) - m0).norm();
    if (d == 0.0) return 0.5;
    return normal_ccdf(d + weight / d * (log_f0 - log_f1), 0.0, var);
  };
  // [-pi, pi] intersected with the support-derived limits.
  const Interval lim = epsilon_limits(phi, s);
  const Interval clipped{std::max(lim.lo, -kPi), std::min(lim.hi, kPi)};
  PredictionResult out =
      mse_hat_generic(exceed, phi, {phi + 2.0 * clipped.lo, phi + 2.0 * clipped.hi}, options);
  out.method = "map";
  return out;
}

double bayes_average(const BetaPrior& prior, const std::function<double(double)>& per_theta,
                     double grid_spacing) {
  if (!(grid_spacing > 0.0) || grid_spacing > kPi) {
    throw DomainError("bayes_average: grid spacing must be in (0, pi]");
  }
  std::vector<double> nodes;
  for (int k = 0;; ++k) {
    const double phi = k * grid_spacing;
    if (phi > kPi) break;
    nodes.push_back(phi);
  }
  if (kPi - nodes.back() > 1e-12) nodes.push_back(kPi);

  auto term = [&](double phi) {
    const double f = prior.density(phi);
    return f > 0.0 ? f * per_theta(phi) : 0.0;
  };
  double total = 0.0;
  double left = term(nodes[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double right = term(nodes[i]);
    total += 0.5 * (nodes[i] - nodes[i - 1]) * (left + right);
    left = right;
  }
  return total;
}

QuadOptions bayesian_quad_options() {
  QuadOptions o;
  o.abs_tol = 1e-18;
  o.rel_tol = 1e-12;
  o.max_evals = 2000000;
  return o;
}

}  // namespace msepred
