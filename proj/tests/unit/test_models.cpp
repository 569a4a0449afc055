#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gen.hpp"
#include "msepred/error.hpp"
#include "msepred/models.hpp"

using namespace msepred;

namespace {

RVec angles(double az, double el) {
  RVec t(2);
  t << az, el;
  return t;
}

CVec central_difference(const ManifoldModel& m, const RVec& t, int index, double h = 1e-6) {
  RVec a = t, b = t;
  a[index] += h;
  b[index] -= h;
  return (m.mean_unchecked(a) - m.mean_unchecked(b)) / (2.0 * h);
}

}  // namespace

TEST_CASE("far-field steering vectors have constant norm") {
  const ManifoldModel m = far_field_manifold(table1_array(), 2.0);
  testgen::Gen g(1);
  for (int i = 0; i < 50; ++i) {
    const RVec t = angles(g.uniform(-kPi, kPi), g.uniform(0.0, kPi));
    CHECK(m.mean(t).squaredNorm() == doctest::Approx(4.0 * 11.0).epsilon(1e-12));
  }
}

TEST_CASE("analytic derivatives match central differences") {
  testgen::Gen g(2);
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  const ManifoldModel ula = ula_manifold(15, Complex(1.0, 0.5));
  const ManifoldModel freq = frequency_manifold(16, Complex(1.0, 0.0));
  for (int i = 0; i < 30; ++i) {
    const RVec t = angles(g.uniform(-3.0, 3.0), g.uniform(0.2, 2.9));
    for (int k = 0; k < 2; ++k) {
      const CVec a = ff.analytic_derivative(t, k);
      CHECK((a - central_difference(ff, t, k)).norm() <= 1e-6 * (1.0 + a.norm()));
    }
    const RVec p = scalar_param(g.uniform(0.1, 3.0));
    CHECK((ula.analytic_derivative(p, 0) - central_difference(ula, p, 0)).norm() <= 1e-5);
    const RVec w = scalar_param(g.uniform(-3.0, 3.0));
    CHECK((freq.analytic_derivative(w, 0) - central_difference(freq, w, 0)).norm() <= 1e-5);
  }
}

TEST_CASE("numerical derivatives fall back to one-sided stencils at the support edge") {
  const ManifoldModel ula = ula_manifold(8, Complex(1.0, 0.0));
  const ManifoldModel no_analytic("ula-numeric", 1, 8, {{0.0, kPi}},
                                  [&ula](const RVec& t) { return ula.mean_unchecked(t); });
  const Derivative inside = manifold_derivative(no_analytic, scalar_param(1.0), 0);
  CHECK_FALSE(inside.one_sided);
  CHECK((inside.value - ula.analytic_derivative(scalar_param(1.0), 0)).norm() < 1e-6);
  const Derivative edge = manifold_derivative(no_analytic, scalar_param(kPi), 0);
  CHECK(edge.one_sided);
  CHECK(edge.value.norm() < 1e-4);  // d/dphi vanishes at phi = pi
}

TEST_CASE("second derivative of the frequency model") {
  const ManifoldModel freq = frequency_manifold(10, Complex(1.0, 0.0));
  const double w = 0.7;
  const CVec d2 = second_derivative(freq, scalar_param(w), 0);
  for (int k = 0; k < 10; ++k) {
    const Complex expected = -double(k * k) * std::exp(Complex(0.0, w * k));
    CHECK(std::abs(d2[k] - expected) <= 1e-4 * (1.0 + k * k));
  }
}

TEST_CASE("slice fixes the other components") {
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  const RVec t = angles(0.4, 1.1);
  const ManifoldModel az = slice(ff, t, 0);
  const ManifoldModel el = slice(ff, t, 1);
  CHECK(az.param_dim() == 1);
  CHECK((az.mean(0.9) - ff.mean(angles(0.9, 1.1))).norm() == 0.0);
  CHECK((el.mean(0.3) - ff.mean(angles(0.4, 0.3))).norm() == 0.0);
  CHECK(el.support(0).lo == 0.0);
  CHECK(el.support(0).hi == doctest::Approx(kPi));
  CHECK(az.has_analytic_derivative());
}

TEST_CASE("support checks") {
  const ManifoldModel ula = ula_manifold(4, Complex(1.0, 0.0));
  CHECK_THROWS_AS(ula.mean(-0.1), DomainError);
  CHECK_THROWS_AS(ula.mean(kPi + 0.1), DomainError);
  CHECK_NOTHROW(ula.mean(kPi + 1e-14));
}

TEST_CASE("mismatch of identical models is zero") {
  const ManifoldModel m = frequency_manifold(8, Complex(1.0, 0.0));
  const MismatchPair pair{m, m, 1.0, 1.0};
  CHECK(pair.mismatch(scalar_param(0.3)).norm() == 0.0);
}

TEST_CASE("UCA layout and near-field limit") {
  const ArrayGeometry uca = uniform_circular_array(12, 5.0 / 3.0);
  CHECK(uca.positions[0][0] == doctest::Approx(5.0 / 3.0));
  CHECK(uca.positions[0][1] == 0.0);
  CHECK(uca.positions[3][1] == doctest::Approx(5.0 / 3.0));
  // Far away, the near-field response matches the far-field one up to a
  // common phase.
  const ManifoldModel nf = near_field_manifold(uca, 1e6);
  const ManifoldModel ff = planar_far_field_manifold(uca);
  const CVec a = nf.mean(0.5);
  const CVec b = ff.mean(0.5);
  const Complex phase = a[0] / b[0];
  CHECK((a - phase * b).norm() < 1e-4);
  ArrayGeometry tilted = uca;
  tilted.positions[0][2] = 0.1;
  CHECK_THROWS_AS(near_field_manifold(tilted, 5.0), DomainError);
}

TEST_CASE("beampattern peaks at 0 dB on the steering direction") {
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  const RVec t = angles(0.4, 1.0);
  CHECK(beampattern(ff, t, t) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  testgen::Gen g(4);
  for (int i = 0; i < 50; ++i) {
    CHECK(beampattern(ff, t, angles(g.uniform(-kPi, kPi), g.uniform(0.0, kPi))) <= 1e-12);
  }
}

TEST_CASE("geometry parsing") {
  std::istringstream ok("# comment\n0 0 0\n0.5 0 0  # trailing\n\n1 2 3\n");
  CHECK(parse_geometry(ok).size() == 3);
  std::istringstream two("0 0\n");
  CHECK_THROWS(parse_geometry(two));
  std::istringstream four("0 0 0 1\n");
  CHECK_THROWS(parse_geometry(four));
  std::istringstream text("a b c\n");
  CHECK_THROWS(parse_geometry(text));
  std::istringstream empty("# nothing\n");
  CHECK_THROWS(parse_geometry(empty));
}

TEST_CASE("table-1 array") {
  const ArrayGeometry g = table1_array();
  CHECK(g.size() == 11);
  CHECK(g.positions[1][0] == 1.1785);
  CHECK(g.positions[9][2] == 1.6667);
}
