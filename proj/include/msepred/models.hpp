#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msepred/numeric.hpp"

namespace msepred {

enum class NoiseKind { kComplexCircular, kReal };

/// Sensor positions in wavelength units.
struct ArrayGeometry {
  std::vector<std::array<double, 3>> positions;

  std::size_t size() const { return positions.size(); }
  /// Throws DomainError unless there are >= 2 finite positions.
  void validate() const;
};

/// Parametric mean m: R^J -> C^N with a box support.
class ManifoldModel {
 public:
  using MeanFn = std::function<CVec(const RVec&)>;
  using DerivativeFn = std::function<CVec(const RVec&, int)>;

  ManifoldModel(std::string name, int param_dim, int size, std::vector<Interval> supports,
                MeanFn mean, NoiseKind noise = NoiseKind::kComplexCircular);

  const std::string& name() const { return name_; }
  int param_dim() const { return param_dim_; }
  int size() const { return size_; }
  NoiseKind noise_kind() const { return noise_; }
  const std::vector<Interval>& supports() const { return supports_; }
  const Interval& support(int index) const { return supports_.at(index); }

  bool in_support(const RVec& theta) const;
  /// Throws DomainError when theta is off the support box.
  void require_in_support(const RVec& theta, const char* who) const;

  /// m(theta); support-checked.
  CVec mean(const RVec& theta) const;
  CVec mean(double theta) const;
  /// m(theta) without the support check (finite-difference stencils).
  CVec mean_unchecked(const RVec& theta) const;

  ManifoldModel with_noise(NoiseKind noise) const;
  ManifoldModel with_analytic_derivative(DerivativeFn derivative) const;
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  CVec analytic_derivative(const RVec& theta, int index) const;

 private:
  std::string name_;
  int param_dim_;
  int size_;
  std::vector<Interval> supports_;
  MeanFn mean_;
  NoiseKind noise_;
  DerivativeFn derivative_;
};

/// Model with every parameter except `index` frozen at `fixed`; J = 1.
ManifoldModel slice(const ManifoldModel& model, const RVec& fixed, int index);

RVec scalar_param(double value);

/// True and assumed parametric means sharing N, J and supports.
struct MismatchPair {
  ManifoldModel true_model;
  ManifoldModel assumed_model;
  double true_noise_variance = 1.0;
  double assumed_noise_variance = 1.0;

  /// Throws DomainError on incompatible models or non-positive variances.
  void validate() const;
  /// mu(theta) = m_true(theta) - m_assumed(theta)
  CVec mismatch(const RVec& theta) const;
};

// ---------------------------------------------------------------------------
// Manifold factories

/// beta * exp(j 2pi p_n . u(phi, theta)), u = (cos phi sin theta, sin phi sin theta, cos theta).
/// Parameters (azimuth, elevation) on [-pi, pi] x [0, pi].
ManifoldModel far_field_manifold(const ArrayGeometry& geometry, double amplitude);

/// Planar far-field model over azimuth (elevation fixed at pi/2).
ManifoldModel planar_far_field_manifold(const ArrayGeometry& geometry, double amplitude = 1.0);

/// Spherical wavefront from a source at range r (wavelengths):
/// amplitude * exp(-j 2pi ||p_n - r u_phi||), azimuth on [-pi, pi]. Geometry is planar.
ManifoldModel near_field_manifold(const ArrayGeometry& geometry, double range,
                                  double amplitude = 1.0);

/// alpha * exp(j pi cos(phi) n), n = 0..N-1, phi in [0, pi].
ManifoldModel ula_manifold(int n_sensors, Complex amplitude);

/// A * exp(j omega n), n = 0..N-1, omega in [-pi, pi].
ManifoldModel frequency_manifold(int n_samples, Complex amplitude);

/// m(theta) = theta as a length-1 vector.
ManifoldModel identity_manifold(Interval support, NoiseKind noise = NoiseKind::kComplexCircular);

/// m(theta1) - m(theta2); both must lie in the support.
CVec mtilde(const ManifoldModel& model, const RVec& theta1, const RVec& theta2);
CVec mtilde(const ManifoldModel& model, double theta1, double theta2);

struct Derivative {
  CVec value;
  bool one_sided = false;
};

/// Central difference (m(theta + h e_i) - m(theta - h e_i)) / 2h; falls back to
/// a one-sided difference when the stencil leaves the support. h <= 0 selects
/// 1e-6 * support width.
Derivative manifold_derivative(const ManifoldModel& model, const RVec& theta, int index,
                               double step = 0.0);

/// Analytic override when the model carries one, finite difference otherwise.
CVec first_derivative(const ManifoldModel& model, const RVec& theta, int index);

/// Second central difference; h <= 0 selects 1e-4 * support width.
CVec second_derivative(const ManifoldModel& model, const RVec& theta, int index,
                       double step = 0.0);

/// Bartlett response 20 log10(|m(steer)^H m(eval)| / ||m(steer)||^2) in dB.
double beampattern(const ManifoldModel& model, const RVec& steer, const RVec& eval);

// ---------------------------------------------------------------------------
// Geometries

/// 11-sensor 3D array used in the DOA experiments (values as tabulated, in wavelengths).
ArrayGeometry table1_array();

/// `count` sensors equally spaced on a circle of `radius` wavelengths, z = 0,
/// first sensor on the +x axis.
ArrayGeometry uniform_circular_array(int count, double radius);

/// One sensor per line: "x y z" in wavelengths. '#' starts a comment.
ArrayGeometry parse_geometry(std::istream& in);
ArrayGeometry load_geometry(const std::string& path);

}  // namespace msepred
