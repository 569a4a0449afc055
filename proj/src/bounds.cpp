#include "msepred/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msepred/error.hpp"
#include "msepred/kernels.hpp"

namespace msepred {
namespace {

void require_scalar_model(const ManifoldModel& model, const char* who) {
  if (model.param_dim() != 1) {
    throw DomainError(std::string(who) + ": model must have a single parameter (use slice())");
  }
}

CVec derivative_of(const ManifoldModel& model, double theta, DerivativeSource source) {
  const RVec t = scalar_param(theta);
  if (source == DerivativeSource::kFiniteDifference) {
    return manifold_derivative(model, t, 0).value;
  }
  return first_derivative(model, t, 0);
}

std::vector<double> interleave(const CVec& v) {
  std::vector<double> out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

// Equal-prior-weighted two-term error probability; lr = ln(pi1 / pi2).
double pmin_terms(double d, double lr, double pi1, double pi2, double sigma_w2) {
  const double var = 2.0 * sigma_w2;
  return pi1 * normal_ccdf(d + sigma_w2 / d * lr, 0.0, var) +
         pi2 * normal_ccdf(d - sigma_w2 / d * lr, 0.0, var);
}

}  // namespace

const char* bound_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::kCrlb:
      return "crlb";
    case BoundKind::kMcrlb:
      return "mcrlb";
    case BoundKind::kHcrb:
      return "hcrb";
    case BoundKind::kZzb:
      return "zzb";
    case BoundKind::kBcrlb:
      return "bcrlb";
  }
  return "unknown";
}

double fisher_information(const ManifoldModel& model, double theta_bar, double sigma2,
                          DerivativeSource source) {
  require_scalar_model(model, "fisher_information");
  if (!(sigma2 > 0.0)) throw DomainError("fisher_information: sigma2 must be positive");
  model.require_in_support(scalar_param(theta_bar), "fisher_information");
  const CVec d = derivative_of(model, theta_bar, source);
  if (model.noise_kind() == NoiseKind::kReal) return d.real().squaredNorm() / sigma2;
  return 2.0 * d.squaredNorm() / sigma2;
}

BoundValue crlb_scalar(const ManifoldModel& model, double theta_bar, double sigma2,
                       DerivativeSource source) {
  const double info = fisher_information(model, theta_bar, sigma2, source);
  if (!(info > 0.0)) throw DomainError("crlb_scalar: singular Fisher information");
  return {1.0 / info, BoundKind::kCrlb, std::nullopt, {}};
}

RVec crlb_joint(const ManifoldModel& model, const RVec& theta_bar, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("crlb_joint: sigma2 must be positive");
  model.require_in_support(theta_bar, "crlb_joint");
  const int j = model.param_dim();
  Eigen::MatrixXcd jac(model.size(), j);
  for (int i = 0; i < j; ++i) jac.col(i) = first_derivative(model, theta_bar, i);
  RMat fim;
  if (model.noise_kind() == NoiseKind::kReal) {
    const RMat re = jac.real();
    fim = re.transpose() * re / sigma2;
  } else {
    fim = 2.0 / sigma2 * (jac.adjoint() * jac).real();
  }
  Eigen::FullPivLU<RMat> lu(fim);
  if (!lu.isInvertible()) throw DomainError("crlb_joint: singular Fisher information matrix");
  return lu.inverse().diagonal();
}

BoundValue mcrlb_parametric_mean(const MismatchPair& pair, double theta_bar) {
  pair.validate();
  const ManifoldModel& m = pair.assumed_model;
  require_scalar_model(m, "mcrlb_parametric_mean");
  const RVec t = scalar_param(theta_bar);
  m.require_in_support(t, "mcrlb_parametric_mean");
  const CVec d1 = first_derivative(m, t, 0);
  const CVec d2 = second_derivative(m, t, 0);
  const CVec mu = pair.mismatch(t);
  const double s2 = pair.assumed_noise_variance;
  const double sbar2 = pair.true_noise_variance;
  const double g = d1.squaredNorm();
  const double info = 2.0 * sbar2 * g / (s2 * s2);
  const double curv = 2.0 / s2 * (d2.dot(mu).real() - g);
  if (!(std::abs(curv) >= 1e-12 * info)) {
    throw DomainError("mcrlb_parametric_mean: degenerate curvature term");
  }
  return {info / (curv * curv), BoundKind::kMcrlb, std::nullopt, {}};
}

BoundValue hcrb_single_test_point(const ManifoldModel& model, double theta_bar, double sigma2,
                                  const std::vector<double>& test_points) {
  require_scalar_model(model, "hcrb_single_test_point");
  if (!(sigma2 > 0.0)) throw DomainError("hcrb_single_test_point: sigma2 must be positive");
  if (test_points.empty()) throw DomainError("hcrb_single_test_point: empty test-point grid");
  const CVec m0 = model.mean(theta_bar);
  const std::size_t row_len = 2 * static_cast<std::size_t>(model.size());
  std::vector<double> rows;
  rows.reserve(test_points.size() * row_len);
  for (double phi : test_points) {
    if (phi == theta_bar) {
      throw DomainError("hcrb_single_test_point: test point equals theta_bar");
    }
    const auto r = interleave(model.mean(phi));
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const auto y = interleave(m0);
  std::vector<double> dist2(test_points.size());
  kernels::sq_distances(rows, row_len, y, dist2);

  const double scale = model.noise_kind() == NoiseKind::kReal ? 1.0 / sigma2 : 2.0 / sigma2;
  BoundValue out{0.0, BoundKind::kHcrb, std::nullopt, {}};
  double best = -1.0;
  for (std::size_t i = 0; i < test_points.size(); ++i) {
    const double delta2 = (test_points[i] - theta_bar) * (test_points[i] - theta_bar);
    const double x = scale * dist2[i];
    double term;
    if (x > 700.0) {
      term = delta2 * std::exp(-x);
    } else if (x > 0.0) {
      term = delta2 / std::expm1(x);
    } else {
      // m(phi) = m(theta_bar): the parameter is unidentifiable at this test point.
      term = std::numeric_limits<double>::infinity();
    }
    if (term > best) {
      best = term;
      out.test_point = test_points[i];
    }
  }
  out.value = best;
  return out;
}

double p_min_e(const ManifoldModel& model, double phi1, double phi2, double pi1, double pi2,
               double sigma_w2) {
  if (!(pi1 >= 0.0 && pi2 >= 0.0) || std::abs(pi1 + pi2 - 1.0) > 1e-12) {
    throw DomainError("p_min_e: priors must be nonnegative and sum to 1");
  }
  if (!(sigma_w2 > 0.0)) throw DomainError("p_min_e: sigma_w2 must be positive");
  if (pi1 == 0.0 || pi2 == 0.0) return 0.0;
  const double d = mtilde(model, phi2, phi1).norm();
  if (!(d > 0.0)) throw DomainError("p_min_e: hypotheses have identical means");
  return pmin_terms(d, std::log(pi1 / pi2), pi1, pi2, sigma_w2);
}

BoundValue zzb(const ManifoldModel& model, const BetaPrior& prior, double sigma_w2,
               const QuadOptions& options) {
  require_scalar_model(model, "zzb");
  if (!(sigma_w2 > 0.0)) throw DomainError("zzb: sigma_w2 must be positive");
  const Interval ps = prior.support();
  const Interval& ms = model.support(0);
  const double lo = std::max(ps.lo, ms.lo);
  const double hi = std::min(ps.hi, ms.hi);

  QuadOptions inner_opts = options;
  inner_opts.abs_tol = options.abs_tol / 100.0;
  inner_opts.rel_tol = options.rel_tol / 100.0;
  inner_opts.breakpoints.clear();

  auto inner = [&](double h) {
    if (h <= 0.0 || h >= hi - lo) return 0.0;
    auto g = [&](double phi) {
      const double lf1 = prior.log_density(phi);
      const double lf2 = prior.log_density(phi + h);
      const double f1 = std::exp(lf1);
      const double f2 = std::exp(lf2);
      const double sum = f1 + f2;
      if (!(f1 > 0.0) || !(f2 > 0.0)) return 0.0;  // one hypothesis is certain
      const double d =
          (model.mean_unchecked(scalar_param(phi + h)) - model.mean_unchecked(scalar_param(phi)))
              .norm();
      if (!(d > 0.0)) return 0.0;
      return sum * pmin_terms(d, lf1 - lf2, f1 / sum, f2 / sum, sigma_w2);
    };
    return h * adaptive_quad(g, lo, hi - h, inner_opts).value;
  };
  // At high SNR the h-integrand lives far below the support width; grade the
  // initial panels toward h = 0.
  QuadOptions outer_opts = options;
  for (int k = 1; k <= 24; ++k) outer_opts.breakpoints.push_back(std::ldexp(hi - lo, -k));
  const QuadResult q = adaptive_quad(inner, 0.0, hi - lo, outer_opts);
  BoundValue out{0.5 * q.value, BoundKind::kZzb, std::nullopt, q};
  out.quad.value = out.value;
  return out;
}

BoundValue bcrlb(const BetaPrior& prior, double snr, int n_sensors) {
  if (prior.is_flat() || !(prior.a() > 2.0)) {
    throw DomainError("bcrlb: the prior shape a must exceed 2");
  }
  if (!(snr >= 0.0)) throw DomainError("bcrlb: SNR must be nonnegative");
  if (n_sensors < 2) throw DomainError("bcrlb: need N >= 2");
  const double a = prior.a();
  const double n = n_sensors;
  double data = 0.0;
  if (snr > 0.0) {
    const double sin2 = bayes_average(prior, [](double phi) { return std::sin(phi) * std::sin(phi); });
    data = kPi * kPi * snr * n * (n - 1.0) * (2.0 * n - 1.0) / 3.0 * sin2;
  }
  const double prior_info = 4.0 * (a - 1.0) * (2.0 * a - 1.0) / (kPi * kPi * (a - 2.0));
  return {1.0 / (data + prior_info), BoundKind::kBcrlb, std::nullopt, {}};
}

QuadOptions zzb_quad_options() {
  QuadOptions o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-8;
  o.max_evals = 2000000;
  return o;
}

}  // namespace msepred
