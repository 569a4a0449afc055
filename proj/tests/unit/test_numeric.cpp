#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "msepred/error.hpp"
#include "msepred/numeric.hpp"

using namespace msepred;

TEST_CASE("normal tails match frozen values") {
  // Q(x) to 17 digits, computed independently with mpmath at 50 digits.
  CHECK(normal_ccdf(1.0, 0.0, 1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-15));
  CHECK(normal_ccdf(3.0, 0.0, 1.0) == doctest::Approx(1.3498980316300946e-3).epsilon(1e-14));
  CHECK(normal_ccdf(10.0, 0.0, 1.0) == doctest::Approx(7.619853024160526e-24).epsilon(1e-12));
  CHECK(normal_ccdf(-2.0, 0.0, 1.0) == doctest::Approx(0.97724986805182079).epsilon(1e-15));
  CHECK(normal_ccdf(5.0, 1.0, 4.0) == doctest::Approx(2.2750131948179209e-2).epsilon(1e-14));
  CHECK(normal_cdf(0.0, 0.0, 3.0) == doctest::Approx(0.5));
}

TEST_CASE("normal tails: cdf + ccdf = 1 and symmetry") {
  testgen::Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const double x = g.uniform(-8.0, 8.0);
    const double m = g.uniform(-3.0, 3.0);
    const double v = g.log_uniform(1e-3, 1e3);
    CHECK(normal_cdf(x, m, v) + normal_ccdf(x, m, v) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_ccdf(m + (x - m), m, v) == doctest::Approx(normal_cdf(m - (x - m), m, v)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(normal_ccdf(0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(normal_cdf(0.0, 0.0, -1.0), DomainError);
}

TEST_CASE("adaptive quadrature on closed-form integrals") {
  CHECK(adaptive_quad([](double x) { return x * x; }, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(adaptive_quad([](double x) { return std::sin(x); }, 0.0, kPi, 1e-14, 1e-13).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  // kink at 0.3
  QuadOptions o{1e-12, 1e-12, 200000, {0.3}};
  CHECK(adaptive_quad([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, o).value ==
        doctest::Approx(0.045 + 0.245).epsilon(1e-12));
  // sharp peak found only through graded breakpoints
  const double s = 1e-6;
  QuadOptions graded{1e-20, 1e-10, 200000, {}};
  for (int k = 1; k <= 30; ++k) graded.breakpoints.push_back(std::ldexp(1.0, -k));
  const double v = adaptive_quad([s](double x) { return std::exp(-x / s) / s; }, 0.0, 1.0, graded).value;
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adaptive quadrature: argument checks and budget") {
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, 0.0, 1e-5), DomainError);
  QuadOptions tight{1e-300, 1e-300, 200, {}};
  CHECK_THROWS_AS(adaptive_quad([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight), ConvergenceError);
}

TEST_CASE("rng streams are reproducible and children are independent") {
  RngState root{42};
  Rng a(root), b(root);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  CHECK(root.child(0).seed != root.child(1).seed);
  CHECK(root.child(3) == RngState{42}.child(3));
  Rng c(root.child(0)), d(root.child(1));
  CHECK(c.uniform() != d.uniform());
}

TEST_CASE("complex gaussian samples carry the requested variance") {
  Rng rng(RngState{5});
  const CVec v = sample_complex_gaussian(rng, 200000, 3.0);
  double re2 = 0.0, im2 = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    re2 += v[i].real() * v[i].real();
    im2 += v[i].imag() * v[i].imag();
  }
  CHECK(re2 / v.size() == doctest::Approx(1.5).epsilon(0.02));
  CHECK(im2 / v.size() == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("beta variates have the beta mean and variance") {
  Rng rng(RngState{8});
  const double a = 10.0;
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.beta(a, a);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.005));
  CHECK(s2 / n - mean * mean == doctest::Approx(1.0 / (4.0 * (2.0 * a + 1.0))).epsilon(0.03));
}

TEST_CASE("psd factor reproduces the covariance and rejects indefinite input") {
  testgen::Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(1, 6);
    RMat b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = g.normal();
    const RMat cov = b * b.transpose();
    const RMat a = psd_factor(cov);
    CHECK((a * a.transpose() - cov).norm() <= 1e-10 * (1.0 + cov.norm()));
  }
  RMat bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(psd_factor(bad), NotPsdError);
  RMat asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(psd_factor(asym), DomainError);
}

TEST_CASE("orthant probabilities: independent case factorizes") {
  RVec mu(3);
  mu << 0.3, -0.5, 1.2;
  RMat cov = RMat::Identity(3, 3);
  cov(1, 1) = 2.0;
  double exact = 1.0;
  for (int i = 0; i < 3; ++i) exact *= normal_cdf(mu[i], 0.0, cov(i, i));

  const auto plain = mvn_lower_orthant_mc(mu, cov, 200000, RngState{1});
  CHECK(std::abs(plain.probability - exact) <= 4.0 * plain.stderr_);

  for (auto method : {OrthantMethod::kIndicator, OrthantMethod::kSphericalRadial}) {
    const OrthantSampler s(3, 20000, RngState{2}, method);
    const auto lo = s.lower(mu, cov);
    const auto up = s.upper_complement(mu, cov);
    CHECK(std::abs(lo.probability - exact) <= 4.0 * lo.stderr_ + 1e-12);
    CHECK(lo.probability + up.probability == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("orthant probability: bivariate correlated case against closed form") {
  // P(Z1 <= 0, Z2 <= 0) = 1/4 + asin(rho) / (2 pi)
  const double rho = 0.6;
  RMat cov(2, 2);
  cov << 1.0, rho, rho, 1.0;
  const RVec mu = RVec::Zero(2);
  const double exact = 0.25 + std::asin(rho) / (2.0 * kPi);
  const OrthantSampler s(2, 50000, RngState{9}, OrthantMethod::kSphericalRadial);
  const auto r = s.lower(mu, cov);
  CHECK(std::abs(r.probability - exact) <= 4.0 * r.stderr_ + 1e-12);
}
