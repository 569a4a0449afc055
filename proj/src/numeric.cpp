#include "msepred/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "msepred/error.hpp"

namespace msepred {

double normal_ccdf(double x, double mean, double variance) {
  if (!(variance > 0.0)) throw DomainError("normal_ccdf: variance must be positive");
  // erfc keeps full relative accuracy in the upper tail, where 1 - cdf would cancel.
  const double z = (x - mean) / std::sqrt(2.0 * variance);
  return 0.5 * std::erfc(z);
}

double normal_cdf(double x, double mean, double variance) {
  if (!(variance > 0.0)) throw DomainError("normal_cdf: variance must be positive");
  const double z = (mean - x) / std::sqrt(2.0 * variance);
  return 0.5 * std::erfc(z);
}

// ---------------------------------------------------------------------------

namespace {

// Gauss-Kronrod 15-point abscissae (non-negative half) and weights; the odd
// indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked_eval(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "adaptive_quad: integrand is not finite at x = " << x;
    throw ContractError(os.str());
  }
  return y;
}

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked_eval(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = checked_eval(f, center - dx) + checked_eval(f, center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         const QuadOptions& options) {
  if (!(a < b)) throw DomainError("adaptive_quad: require a < b");
  if (!(options.abs_tol > 0.0) || !(options.rel_tol > 0.0)) {
    throw DomainError("adaptive_quad: tolerances must be positive");
  }

  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double p : options.breakpoints) {
    if (p > a && p < b) inner.push_back(p);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(b);

  constexpr int kEvalsPerSegment = 15;
  std::priority_queue<Segment> heap;
  int n_evals = 0;
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push(gauss_kronrod(f, cuts[i], cuts[i + 1]));
    n_evals += kEvalsPerSegment;
  }

  auto totals = [&]() {
    // Re-summed from scratch so that running updates cannot drift.
    auto copy = heap;
    double value = frozen_value;
    double error = frozen_error;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  int since_resum = 0;
  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(value))) {
    if (heap.empty()) {
      throw ConvergenceError("adaptive_quad: intervals cannot be refined further", value, error);
    }
    if (n_evals + 2 * kEvalsPerSegment > options.max_evals) {
      std::ostringstream os;
      os << "adaptive_quad: tolerance not reached within " << options.max_evals
         << " evaluations (estimate " << value << ", error " << error << ")";
      throw ConvergenceError(os.str(), value, error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval at floating-point resolution.
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.lo, mid);
    const Segment right = gauss_kronrod(f, mid, worst.hi);
    n_evals += 2 * kEvalsPerSegment;
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (++since_resum == 64) {
      std::tie(value, error) = totals();
      since_resum = 0;
    }
  }
  std::tie(value, error) = totals();
  return {value, error, n_evals};
}

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol) {
  QuadOptions options;
  options.abs_tol = abs_tol;
  options.rel_tol = rel_tol;
  return adaptive_quad(f, a, b, options);
}

// ---------------------------------------------------------------------------

std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngState RngState::child(std::uint64_t index) const {
  return RngState{mix_seed(seed, index), algorithm};
}

Rng::Rng(const RngState& state) {
  if (state.algorithm != "mt19937_64") {
    throw DomainError("Rng: unsupported algorithm '" + state.algorithm + "'");
  }
  engine_.seed(state.seed);
}

double Rng::beta(double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(engine_);
  const double y = gb(engine_);
  return x / (x + y);
}

CVec sample_complex_gaussian(Rng& rng, int n, double variance) {
  if (!(variance > 0.0)) throw DomainError("sample_complex_gaussian: variance must be positive");
  if (n <= 0) throw DomainError("sample_complex_gaussian: n must be positive");
  const double s = std::sqrt(0.5 * variance);
  CVec v(n);
  for (int k = 0; k < n; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[k] = Complex(s * re, s * im);
  }
  return v;
}

CVec sample_complex_gaussian(const RngState& state, int n, double variance) {
  Rng rng(state);
  return sample_complex_gaussian(rng, n, variance);
}

// ---------------------------------------------------------------------------

RMat psd_factor(const RMat& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw DomainError("psd_factor: covariance must be square and non-empty");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError("psd_factor: covariance is not symmetric");
  }
  const RMat sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> eig(sym);
  RVec lambda = eig.eigenvalues();
  const double max_lambda = lambda.maxCoeff();
  if (lambda.minCoeff() < -1e-8 * std::max(max_lambda, 0.0) || max_lambda < 0.0) {
    throw NotPsdError("psd_factor: covariance has a significantly negative eigenvalue");
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lambda.asDiagonal();
}

OrthantSampler::OrthantSampler(int dim, int n_samples, const RngState& state,
                               OrthantMethod method)
    : dim_(dim), n_samples_(n_samples), method_(method) {
  if (dim < 1) throw DomainError("OrthantSampler: dimension must be >= 1");
  if (n_samples < 2) throw DomainError("OrthantSampler: need at least 2 samples");
  Rng rng(state);
  draws_.resize(dim, n_samples);
  for (int s = 0; s < n_samples; ++s) {
    for (int i = 0; i < dim; ++i) draws_(i, s) = rng.normal();
    if (method_ == OrthantMethod::kSphericalRadial) {
      double norm = draws_.col(s).norm();
      while (norm == 0.0) {
        for (int i = 0; i < dim; ++i) draws_(i, s) = rng.normal();
        norm = draws_.col(s).norm();
      }
      draws_.col(s) /= norm;
    }
  }
}

ProbabilityEstimate OrthantSampler::lower(const RVec& mu, const RMat& cov) const {
  return evaluate(mu, cov, false);
}

ProbabilityEstimate OrthantSampler::upper_complement(const RVec& mu, const RMat& cov) const {
  return evaluate(mu, cov, true);
}

ProbabilityEstimate OrthantSampler::evaluate(const RVec& mu, const RMat& cov,
                                             bool complement) const {
  if (mu.size() != dim_ || cov.rows() != dim_) {
    throw DomainError("OrthantSampler: dimension mismatch");
  }
  const RMat factor = psd_factor(cov);
  const RMat w = factor * draws_;
  const double n = static_cast<double>(n_samples_);

  if (method_ == OrthantMethod::kIndicator) {
    long inside = 0;
    for (int s = 0; s < n_samples_; ++s) {
      bool ok = true;
      for (int i = 0; i < dim_ && ok; ++i) ok = w(i, s) <= mu[i];
      inside += ok ? 1 : 0;
    }
    double p = static_cast<double>(inside) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    if (complement) p = 1.0 - p;
    return {p, se};
  }

  const double half_dim = 0.5 * dim_;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < n_samples_; ++s) {
    double r_lo = 0.0;
    double r_hi = std::numeric_limits<double>::infinity();
    bool empty = false;
    for (int i = 0; i < dim_; ++i) {
      const double wi = w(i, s);
      if (wi > 0.0) {
        r_hi = std::min(r_hi, mu[i] / wi);
      } else if (wi < 0.0) {
        r_lo = std::max(r_lo, mu[i] / wi);
      } else if (mu[i] < 0.0) {
        empty = true;
      }
    }
    if (r_hi < 0.0) empty = true;
    double value;
    if (empty || r_hi <= r_lo) {
      value = complement ? 1.0 : 0.0;
    } else {
      const double f_lo = r_lo > 0.0 ? boost::math::gamma_p(half_dim, 0.5 * r_lo * r_lo) : 0.0;
      if (complement) {
        const double q_hi =
            std::isinf(r_hi) ? 0.0 : boost::math::gamma_q(half_dim, 0.5 * r_hi * r_hi);
        value = q_hi + f_lo;
      } else {
        const double f_hi =
            std::isinf(r_hi) ? 1.0 : boost::math::gamma_p(half_dim, 0.5 * r_hi * r_hi);
        value = f_hi - f_lo;
      }
    }
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

ProbabilityEstimate mvn_lower_orthant_mc(const RVec& mu, const RMat& cov, int n_samples,
                                         const RngState& state) {
  if (mu.size() < 1) throw DomainError("mvn_lower_orthant_mc: K must be >= 1");
  OrthantSampler sampler(static_cast<int>(mu.size()), n_samples, state,
                         OrthantMethod::kIndicator);
  return sampler.lower(mu, cov);
}

}  // namespace msepred
