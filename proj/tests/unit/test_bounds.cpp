#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "msepred/bounds.hpp"
#include "msepred/error.hpp"

using namespace msepred;

TEST_CASE("CRLB closed forms") {
  testgen::Gen g(41);
  for (int i = 0; i < 20; ++i) {
    const double s2 = g.log_uniform(1e-3, 10.0);
    CHECK(crlb_scalar(identity_manifold({-10.0, 10.0}), 0.5, s2).value == doctest::Approx(s2 / 2.0).epsilon(1e-12));
    CHECK(crlb_scalar(identity_manifold({-10.0, 10.0}, NoiseKind::kReal), 0.5, s2).value ==
          doctest::Approx(s2).epsilon(1e-12));
    // frequency: sigma2 / (2 |A|^2 sum k^2)
    const int n = g.integer(2, 30);
    double k2 = 0.0;
    for (int k = 0; k < n; ++k) k2 += double(k) * k;
    CHECK(crlb_scalar(frequency_manifold(n, Complex(1.5, 0.0)), 0.2, s2).value ==
          doctest::Approx(s2 / (2.0 * 2.25 * k2)).epsilon(1e-12));
    // ULA: extra chain-rule factor (pi sin phi)^2
    const double phi = g.uniform(0.2, 2.9);
    const double ps = kPi * std::sin(phi);
    CHECK(crlb_scalar(ula_manifold(n, Complex(1.0, 0.0)), phi, s2).value ==
          doctest::Approx(s2 / (2.0 * k2 * ps * ps)).epsilon(1e-10));
  }
}

TEST_CASE("finite-difference Fisher information agrees with the analytic one") {
  const ManifoldModel ula = ula_manifold(10, Complex(1.0, 0.0));
  const double a = fisher_information(ula, 1.0, 0.3);
  const double b = fisher_information(ula, 1.0, 0.3, DerivativeSource::kFiniteDifference);
  CHECK(b == doctest::Approx(a).epsilon(1e-6));
}

TEST_CASE("joint CRLB exceeds the known-nuisance CRLB and matches a finite-difference FIM") {
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  RVec t(2);
  t << 0.436, 1.047;
  const double s2 = 0.1;
  const RVec diag = crlb_joint(ff, t, s2);
  CHECK(diag[0] >= crlb_scalar(slice(ff, t, 0), t[0], s2).value);
  CHECK(diag[1] >= crlb_scalar(slice(ff, t, 1), t[1], s2).value);

  const double h = 1e-6;
  Eigen::MatrixXcd d(ff.size(), 2);
  for (int k = 0; k < 2; ++k) {
    RVec a = t, b = t;
    a[k] += h;
    b[k] -= h;
    d.col(k) = (ff.mean(a) - ff.mean(b)) / (2.0 * h);
  }
  const RMat fim = (2.0 / s2) * (d.adjoint() * d).real();
  const RMat inv = fim.inverse();
  CHECK(diag[0] == doctest::Approx(inv(0, 0)).epsilon(1e-6));
  CHECK(diag[1] == doctest::Approx(inv(1, 1)).epsilon(1e-6));
}

TEST_CASE("MCRLB without mismatch equals the CRLB") {
  for (double s2 : {0.01, 0.3, 2.0}) {
    const ManifoldModel ula = ula_manifold(12, Complex(1.0, 0.0));
    const MismatchPair pair{ula, ula, s2, s2};
    CHECK(mcrlb_parametric_mean(pair, 1.1).value ==
          doctest::Approx(crlb_scalar(ula, 1.1, s2).value).epsilon(1e-10));
  }
}

TEST_CASE("MCRLB grows with the noise ratio") {
  const ManifoldModel ula = ula_manifold(12, Complex(1.0, 0.0));
  const MismatchPair a{ula, ula, 0.1, 0.1};
  const MismatchPair b{ula, ula, 0.2, 0.1};
  CHECK(mcrlb_parametric_mean(b, 1.1).value == doctest::Approx(2.0 * mcrlb_parametric_mean(a, 1.1).value));
}

TEST_CASE("HCRB on the identity model") {
  const ManifoldModel m = identity_manifold({-10.0, 10.0});
  const double s2 = 0.5;
  // term(delta) = delta^2 / expm1(2 delta^2 / s2) is largest as delta -> 0
  const std::vector<double> pts{-1.0, 0.5, 0.9, 2.0};
  const BoundValue b = hcrb_single_test_point(m, 0.0, s2, pts);
  CHECK(b.value == doctest::Approx(0.25 / std::expm1(2.0 * 0.25 / s2)).epsilon(1e-12));
  REQUIRE(b.test_point.has_value());
  CHECK(*b.test_point == 0.5);
  std::vector<double> fine;
  for (int i = 1; i <= 100; ++i) fine.push_back(i * 1e-4);
  CHECK(hcrb_single_test_point(m, 0.0, s2, fine).value == doctest::Approx(s2 / 2.0).epsilon(1e-6));
  CHECK_THROWS_AS(hcrb_single_test_point(m, 0.0, s2, {0.0}), DomainError);
  // far test points underflow to zero rather than overflowing expm1
  const double far = hcrb_single_test_point(m, 0.0, s2, {9.0}).value;
  CHECK(std::isfinite(far));
  CHECK(far >= 0.0);
}

TEST_CASE("minimum error probability of a binary test") {
  const ManifoldModel m = identity_manifold({-10.0, 10.0});
  const double s2 = 0.3;
  const double d = 0.8;
  CHECK(p_min_e(m, 0.0, d, 0.5, 0.5, s2) == doctest::Approx(normal_ccdf(d, 0.0, 2.0 * s2)).epsilon(1e-14));
  CHECK(p_min_e(m, 0.0, d, 1.0, 0.0, s2) == 0.0);
  // unequal priors lower the error probability
  CHECK(p_min_e(m, 0.0, d, 0.8, 0.2, s2) < p_min_e(m, 0.0, d, 0.5, 0.5, s2));
  CHECK_THROWS_AS(p_min_e(m, 0.0, d, 0.6, 0.6, s2), DomainError);
}

TEST_CASE("BCRLB closed form") {
  const BetaPrior p = BetaPrior::symmetric(10.0);
  CHECK(bcrlb(p, 0.0, 15).value == doctest::Approx(8.0 * kPi * kPi / 684.0).epsilon(1e-12));
  CHECK(bcrlb(p, 10.0, 15).value < bcrlb(p, 1.0, 15).value);
  CHECK_THROWS_AS(bcrlb(BetaPrior::flat(), 1.0, 15), DomainError);
}

TEST_CASE("ZZB equals the prior-averaged MAP prediction") {
  const ManifoldModel ula = ula_manifold(15, Complex(1.0, 0.0));
  const BetaPrior p = BetaPrior::symmetric(10.0);
  const double s2 = std::pow(10.0, -0.5);
  const double z = zzb(ula, p, s2, zzb_quad_options()).value;
  const double map = bayes_average(p, [&](double phi) {
    return mse_hat_map_at(ula, p, phi, s2, bayesian_quad_options()).mse;
  });
  CHECK(map == doctest::Approx(z).epsilon(1e-4));
  CHECK(z >= bcrlb(p, 1.0 / s2, 15).value);
}

TEST_CASE("near-field mismatch: MCRLB exceeds the matched CRLB and is continuous in the mismatch size") {
  const ArrayGeometry uca = uniform_circular_array(12, 5.0 / 3.0);
  const ManifoldModel nf = near_field_manifold(uca, 5.0);
  const ManifoldModel ff = planar_far_field_manifold(uca);
  const double phi = 25.0 * kPi / 180.0;
  const double s2 = 0.01;
  const double crlb = crlb_scalar(ff, phi, s2).value;
  CHECK(mcrlb_parametric_mean(MismatchPair{nf, ff, s2, s2}, phi).value > crlb);

  // true mean = far-field + t * (near-field - far-field)
  auto blended = [&](double t) {
    return ManifoldModel("blend", 1, 12, {ff.support(0)}, [&, t](const RVec& p) {
      return CVec(ff.mean_unchecked(p) + t * (nf.mean_unchecked(p) - ff.mean_unchecked(p)));
    });
  };
  double last = mcrlb_parametric_mean(MismatchPair{blended(0.0), ff, s2, s2}, phi).value;
  CHECK(last == doctest::Approx(crlb).epsilon(1e-10));
  for (int i = 1; i <= 50; ++i) {
    const double t = i * 2e-4;
    const double v = mcrlb_parametric_mean(MismatchPair{blended(t), ff, s2, s2}, phi).value;
    CHECK(std::abs(v - last) <= 0.05 * last);
    last = v;
  }
}
