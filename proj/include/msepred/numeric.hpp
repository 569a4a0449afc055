#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msepred {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// ---------------------------------------------------------------------------
// Gaussian tail probabilities

/// P(Z >= x) for Z ~ Normal(mean, variance). Throws DomainError if variance <= 0.
double normal_ccdf(double x, double mean, double variance);

/// P(Z <= x) for Z ~ Normal(mean, variance). Throws DomainError if variance <= 0.
double normal_cdf(double x, double mean, double variance);

// ---------------------------------------------------------------------------
// Adaptive quadrature

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int n_evals = 0;
};

/// Tolerances default to AbsTol = RelTol = 1e-5.
struct QuadOptions {
  double abs_tol = 1e-5;
  double rel_tol = 1e-5;
  int max_evals = 200000;
  /// Interior points where the integrand may have a kink or jump; the initial
  /// partition is split there.
  std::vector<double> breakpoints;
};

/// Globally adaptive Gauss-Kronrod (7,15) quadrature of f over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate satisfies |err| <= max(abs_tol, rel_tol * |value|). Throws
/// ConvergenceError (carrying the best estimate) if the evaluation budget is
/// exhausted first.
QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         const QuadOptions& options = {});

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol);

// ---------------------------------------------------------------------------
// Random numbers

/// Seed plus generator tag. Equal states produce equal sample streams.
struct RngState {
  std::uint64_t seed = 0;
  std::string algorithm = "mt19937_64";

  /// Independent stream for sub-task `index` (run, shard, batch, ...).
  RngState child(std::uint64_t index) const;

  friend bool operator==(const RngState&, const RngState&) = default;
};

/// splitmix64 finalizer; used for seed splitting.
std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t index);

/// Engine bound to an RngState. Not thread-safe; give each worker its own.
class Rng {
 public:
  explicit Rng(const RngState& state);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Beta(a, b) variate on [0, 1].
  double beta(double a, double b);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// n i.i.d. CN(0, variance) entries: real and imaginary parts each carry
/// variance / 2.
CVec sample_complex_gaussian(Rng& rng, int n, double variance);
CVec sample_complex_gaussian(const RngState& state, int n, double variance);

// ---------------------------------------------------------------------------
// Multivariate normal orthant probabilities

struct ProbabilityEstimate {
  double probability = 0.0;
  double stderr_ = 0.0;
};

enum class OrthantMethod {
  /// Indicator average over Z = A g; binomial standard error.
  kIndicator,
  /// Conditional on a uniformly random direction u, the radius of Z = R A u is
  /// chi-distributed and the event is an interval in R, so each sample
  /// contributes an exact chi-cdf difference. Smooth in (mu, cov) under common
  /// random numbers.
  kSphericalRadial,
};

/// Monte Carlo estimator of P(Z <= mu) for Z ~ Normal(0, cov) that keeps its
/// random draws fixed across calls (common random numbers).
class OrthantSampler {
 public:
  OrthantSampler(int dim, int n_samples, const RngState& state,
                 OrthantMethod method = OrthantMethod::kIndicator);

  ProbabilityEstimate lower(const RVec& mu, const RMat& cov) const;
  /// 1 - lower(mu, cov), computed without cancellation for the radial method.
  ProbabilityEstimate upper_complement(const RVec& mu, const RMat& cov) const;

  int dim() const { return dim_; }
  int n_samples() const { return n_samples_; }

 private:
  ProbabilityEstimate evaluate(const RVec& mu, const RMat& cov, bool complement) const;

  int dim_;
  int n_samples_;
  OrthantMethod method_;
  RMat draws_;  // dim x n_samples
};

/// Square root factor A (cov = A A^T) from an eigendecomposition with small
/// negative eigenvalues clamped to zero. Throws NotPsdError when an eigenvalue
/// is below -1e-8 * max eigenvalue, DomainError when cov is not symmetric
/// within 1e-10.
RMat psd_factor(const RMat& cov);

/// Plain Monte Carlo estimate of P(Z <= mu), Z ~ Normal(0, cov).
ProbabilityEstimate mvn_lower_orthant_mc(const RVec& mu, const RMat& cov, int n_samples,
                                         const RngState& state);

}  // namespace msepred
