#include "msepred/models.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "msepred/error.hpp"

namespace msepred {
namespace {

constexpr Complex kJ{0.0, 1.0};

double support_slack(const Interval& s) {
  return 1e-12 * std::max({1.0, std::abs(s.lo), std::abs(s.hi)});
}

double default_step(const ManifoldModel& model, int index, double relative) {
  const double width = model.support(index).width();
  return relative * (std::isfinite(width) && width > 0.0 ? width : 1.0);
}

}  // namespace

void ArrayGeometry::validate() const {
  if (positions.size() < 2) throw DomainError("ArrayGeometry: need at least 2 sensors");
  for (const auto& p : positions) {
    for (double c : p) {
      if (!std::isfinite(c)) throw DomainError("ArrayGeometry: non-finite sensor position");
    }
  }
}

// ---------------------------------------------------------------------------

ManifoldModel::ManifoldModel(std::string name, int param_dim, int size,
                             std::vector<Interval> supports, MeanFn mean, NoiseKind noise)
    : name_(std::move(name)),
      param_dim_(param_dim),
      size_(size),
      supports_(std::move(supports)),
      mean_(std::move(mean)),
      noise_(noise) {
  if (param_dim_ < 1 || size_ < 1) throw DomainError("ManifoldModel: J and N must be >= 1");
  if (static_cast<int>(supports_.size()) != param_dim_) {
    throw DomainError("ManifoldModel: one support interval per parameter required");
  }
  for (const auto& s : supports_) {
    if (!(s.lo < s.hi)) throw DomainError("ManifoldModel: empty support interval");
  }
}

bool ManifoldModel::in_support(const RVec& theta) const {
  if (theta.size() != param_dim_) return false;
  for (int i = 0; i < param_dim_; ++i) {
    const auto& s = supports_[i];
    const double slack = support_slack(s);
    if (!(theta[i] >= s.lo - slack && theta[i] <= s.hi + slack)) return false;
  }
  return true;
}

void ManifoldModel::require_in_support(const RVec& theta, const char* who) const {
  if (theta.size() != param_dim_) {
    throw DomainError(std::string(who) + ": parameter vector has wrong length for model '" +
                      name_ + "'");
  }
  if (!in_support(theta)) {
    std::ostringstream os;
    os << who << ": parameter (" << theta.transpose() << ") outside the support of '" << name_
       << "'";
    throw DomainError(os.str());
  }
}

CVec ManifoldModel::mean(const RVec& theta) const {
  require_in_support(theta, "ManifoldModel::mean");
  return mean_(theta);
}

CVec ManifoldModel::mean(double theta) const { return mean(scalar_param(theta)); }

CVec ManifoldModel::mean_unchecked(const RVec& theta) const { return mean_(theta); }

ManifoldModel ManifoldModel::with_noise(NoiseKind noise) const {
  ManifoldModel copy = *this;
  copy.noise_ = noise;
  return copy;
}

ManifoldModel ManifoldModel::with_analytic_derivative(DerivativeFn derivative) const {
  ManifoldModel copy = *this;
  copy.derivative_ = std::move(derivative);
  return copy;
}

CVec ManifoldModel::analytic_derivative(const RVec& theta, int index) const {
  if (!derivative_) throw DomainError("ManifoldModel: no analytic derivative for '" + name_ + "'");
  return derivative_(theta, index);
}

RVec scalar_param(double value) {
  RVec v(1);
  v[0] = value;
  return v;
}

ManifoldModel slice(const ManifoldModel& model, const RVec& fixed, int index) {
  if (fixed.size() != model.param_dim() || index < 0 || index >= model.param_dim()) {
    throw DomainError("slice: parameter index or fixed vector does not match the model");
  }
  auto embed = [fixed, index](const RVec& t) {
    RVec full = fixed;
    full[index] = t[0];
    return full;
  };
  ManifoldModel sliced(
      model.name() + "[" + std::to_string(index) + "]", 1, model.size(), {model.support(index)},
      [model, embed](const RVec& t) { return model.mean_unchecked(embed(t)); },
      model.noise_kind());
  if (model.has_analytic_derivative()) {
    sliced = sliced.with_analytic_derivative(
        [model, embed, index](const RVec& t, int) { return model.analytic_derivative(embed(t), index); });
  }
  return sliced;
}

void MismatchPair::validate() const {
  if (true_model.size() != assumed_model.size()) {
    throw DomainError("MismatchPair: true and assumed models have different N");
  }
  if (true_model.param_dim() != assumed_model.param_dim()) {
    throw DomainError("MismatchPair: true and assumed models have different J");
  }
  for (int i = 0; i < true_model.param_dim(); ++i) {
    const auto& a = true_model.support(i);
    const auto& b = assumed_model.support(i);
    if (a.lo != b.lo || a.hi != b.hi) {
      throw DomainError("MismatchPair: models must share their supports");
    }
  }
  if (!(true_noise_variance > 0.0) || !(assumed_noise_variance > 0.0)) {
    throw DomainError("MismatchPair: noise variances must be positive");
  }
}

CVec MismatchPair::mismatch(const RVec& theta) const {
  return true_model.mean(theta) - assumed_model.mean(theta);
}

// ---------------------------------------------------------------------------

ManifoldModel far_field_manifold(const ArrayGeometry& geometry, double amplitude) {
  geometry.validate();
  const auto positions = geometry.positions;
  const int n = static_cast<int>(positions.size());
  auto steering = [positions, amplitude, n](const RVec& psi) {
    const double az = psi[0];
    const double el = psi[1];
    const double ux = std::cos(az) * std::sin(el);
    const double uy = std::sin(az) * std::sin(el);
    const double uz = std::cos(el);
    CVec a(n);
    for (int k = 0; k < n; ++k) {
      const auto& p = positions[k];
      a[k] = amplitude * std::exp(kJ * (2.0 * kPi * (p[0] * ux + p[1] * uy + p[2] * uz)));
    }
    return a;
  };
  auto derivative = [positions, steering, n](const RVec& psi, int index) {
    const double az = psi[0];
    const double el = psi[1];
    double dx, dy, dz;
    if (index == 0) {
      dx = -std::sin(az) * std::sin(el);
      dy = std::cos(az) * std::sin(el);
      dz = 0.0;
    } else {
      dx = std::cos(az) * std::cos(el);
      dy = std::sin(az) * std::cos(el);
      dz = -std::sin(el);
    }
    CVec a = steering(psi);
    for (int k = 0; k < n; ++k) {
      const auto& p = positions[k];
      a[k] *= kJ * (2.0 * kPi * (p[0] * dx + p[1] * dy + p[2] * dz));
    }
    return a;
  };
  return ManifoldModel("far-field", 2, n, {{-kPi, kPi}, {0.0, kPi}}, steering)
      .with_analytic_derivative(derivative);
}

ManifoldModel planar_far_field_manifold(const ArrayGeometry& geometry, double amplitude) {
  RVec fixed(2);
  fixed << 0.0, kPi / 2.0;
  ManifoldModel azimuth = slice(far_field_manifold(geometry, amplitude), fixed, 0);
  return azimuth;
}

ManifoldModel near_field_manifold(const ArrayGeometry& geometry, double range, double amplitude) {
  geometry.validate();
  if (!(range > 0.0)) throw DomainError("near_field_manifold: range must be positive");
  for (const auto& p : geometry.positions) {
    if (p[2] != 0.0) throw DomainError("near_field_manifold: geometry must be planar (z = 0)");
  }
  const auto positions = geometry.positions;
  const int n = static_cast<int>(positions.size());
  auto mean = [positions, range, amplitude, n](const RVec& t) {
    const double sx = range * std::cos(t[0]);
    const double sy = range * std::sin(t[0]);
    CVec a(n);
    for (int k = 0; k < n; ++k) {
      const double d = std::hypot(positions[k][0] - sx, positions[k][1] - sy);
      a[k] = amplitude * std::exp(-kJ * (2.0 * kPi * d));
    }
    return a;
  };
  return ManifoldModel("near-field", 1, n, {{-kPi, kPi}}, mean);
}

ManifoldModel ula_manifold(int n_sensors, Complex amplitude) {
  if (n_sensors < 2) throw DomainError("ula_manifold: need N >= 2");
  auto mean = [n_sensors, amplitude](const RVec& t) {
    const double omega = kPi * std::cos(t[0]);
    CVec m(n_sensors);
    for (int k = 0; k < n_sensors; ++k) m[k] = amplitude * std::exp(kJ * (omega * k));
    return m;
  };
  auto derivative = [n_sensors, amplitude](const RVec& t, int) {
    const double omega = kPi * std::cos(t[0]);
    const double domega = -kPi * std::sin(t[0]);
    CVec d(n_sensors);
    for (int k = 0; k < n_sensors; ++k) {
      d[k] = amplitude * (kJ * (domega * k)) * std::exp(kJ * (omega * k));
    }
    return d;
  };
  return ManifoldModel("ula", 1, n_sensors, {{0.0, kPi}}, mean)
      .with_analytic_derivative(derivative);
}

ManifoldModel frequency_manifold(int n_samples, Complex amplitude) {
  if (n_samples < 1) throw DomainError("frequency_manifold: need N >= 1");
  auto mean = [n_samples, amplitude](const RVec& t) {
    CVec m(n_samples);
    for (int k = 0; k < n_samples; ++k) m[k] = amplitude * std::exp(kJ * (t[0] * k));
    return m;
  };
  auto derivative = [n_samples, amplitude](const RVec& t, int) {
    CVec d(n_samples);
    for (int k = 0; k < n_samples; ++k) {
      d[k] = amplitude * (kJ * static_cast<double>(k)) * std::exp(kJ * (t[0] * k));
    }
    return d;
  };
  return ManifoldModel("frequency", 1, n_samples, {{-kPi, kPi}}, mean)
      .with_analytic_derivative(derivative);
}

ManifoldModel identity_manifold(Interval support, NoiseKind noise) {
  auto mean = [](const RVec& t) {
    CVec m(1);
    m[0] = Complex(t[0], 0.0);
    return m;
  };
  auto derivative = [](const RVec&, int) {
    CVec d(1);
    d[0] = Complex(1.0, 0.0);
    return d;
  };
  return ManifoldModel("identity", 1, 1, {support}, mean, noise)
      .with_analytic_derivative(derivative);
}

// ---------------------------------------------------------------------------

CVec mtilde(const ManifoldModel& model, const RVec& theta1, const RVec& theta2) {
  return model.mean(theta1) - model.mean(theta2);
}

CVec mtilde(const ManifoldModel& model, double theta1, double theta2) {
  return mtilde(model, scalar_param(theta1), scalar_param(theta2));
}

Derivative manifold_derivative(const ManifoldModel& model, const RVec& theta, int index,
                               double step) {
  model.require_in_support(theta, "manifold_derivative");
  if (index < 0 || index >= model.param_dim()) {
    throw DomainError("manifold_derivative: parameter index out of range");
  }
  const double h = step > 0.0 ? step : default_step(model, index, 1e-6);
  const Interval& s = model.support(index);
  RVec plus = theta;
  RVec minus = theta;
  plus[index] += h;
  minus[index] -= h;
  const bool up = plus[index] <= s.hi;
  const bool down = minus[index] >= s.lo;
  if (up && down) {
    return {(model.mean_unchecked(plus) - model.mean_unchecked(minus)) / (2.0 * h), false};
  }
  if (up) return {(model.mean_unchecked(plus) - model.mean_unchecked(theta)) / h, true};
  if (down) return {(model.mean_unchecked(theta) - model.mean_unchecked(minus)) / h, true};
  throw DomainError("manifold_derivative: step larger than the support");
}

CVec first_derivative(const ManifoldModel& model, const RVec& theta, int index) {
  if (model.has_analytic_derivative()) {
    model.require_in_support(theta, "first_derivative");
    return model.analytic_derivative(theta, index);
  }
  return manifold_derivative(model, theta, index).value;
}

CVec second_derivative(const ManifoldModel& model, const RVec& theta, int index, double step) {
  model.require_in_support(theta, "second_derivative");
  const double h = step > 0.0 ? step : default_step(model, index, 1e-4);
  const Interval& s = model.support(index);
  RVec center = theta;
  if (center[index] - h < s.lo) center[index] = s.lo + h;
  if (center[index] + h > s.hi) center[index] = s.hi - h;
  RVec plus = center;
  RVec minus = center;
  plus[index] += h;
  minus[index] -= h;
  return (model.mean_unchecked(plus) - 2.0 * model.mean_unchecked(center) +
          model.mean_unchecked(minus)) /
         (h * h);
}

double beampattern(const ManifoldModel& model, const RVec& steer, const RVec& eval) {
  const CVec w = model.mean(steer);
  const CVec a = model.mean(eval);
  const double ratio = std::abs(w.dot(a)) / w.squaredNorm();
  return 20.0 * std::log10(ratio);
}

// ---------------------------------------------------------------------------

ArrayGeometry table1_array() {
  constexpr double kA = 1.6667;
  constexpr double kB = 1.1785;
  return ArrayGeometry{{{kA, 0.0, 0.0},
                        {kB, kB, kB},
                        {0.0, kA, kA},
                        {-kB, kB, kB},
                        {-kA, 0.0, 0.0},
                        {-kB, -kB, -kB},
                        {0.0, -kA, -kA},
                        {kB, -kB, -kB},
                        {0.0, 0.0, 0.0},
                        {0.0, 0.0, kA},
                        {0.0, 0.0, -kA}}};
}

ArrayGeometry uniform_circular_array(int count, double radius) {
  if (count < 2 || !(radius > 0.0)) {
    throw DomainError("uniform_circular_array: need >= 2 sensors and a positive radius");
  }
  ArrayGeometry g;
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * kPi * k / count;
    g.positions.push_back({radius * std::cos(angle), radius * std::sin(angle), 0.0});
  }
  return g;
}

ArrayGeometry parse_geometry(std::istream& in) {
  ArrayGeometry g;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::array<double, 3> p{};
    if (!(fields >> p[0])) continue;  // blank or comment-only
    std::string extra;
    if (!(fields >> p[1] >> p[2]) || (fields >> extra)) {
      throw DomainError("geometry line " + std::to_string(line_no) +
                        ": expected three numbers (x y z in wavelengths)");
    }
    g.positions.push_back(p);
  }
  g.validate();
  return g;
}

ArrayGeometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open geometry file '" + path + "'");
  return parse_geometry(in);
}

}  // namespace msepred
