#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "msepred/error.hpp"
#include "msepred/predictor.hpp"

using namespace msepred;

namespace {

QuadOptions tight() { return QuadOptions{1e-14, 1e-11, 2000000, {}}; }

}  // namespace

TEST_CASE("identity model gives sigma2 / 2 for complex noise and sigma2 for real noise") {
  testgen::Gen g(21);
  for (int i = 0; i < 25; ++i) {
    const double s2 = g.log_uniform(1e-3, 10.0);
    const double theta = g.uniform(-5.0, 5.0);
    const ManifoldModel c = identity_manifold({-200.0, 200.0});
    const ManifoldModel r = identity_manifold({-200.0, 200.0}, NoiseKind::kReal);
    CHECK(mse_hat_ml_scalar(c, theta, s2, tight()).mse == doctest::Approx(s2 / 2.0).epsilon(1e-7));
    CHECK(mse_hat_ml_scalar(r, theta, s2, tight()).mse == doctest::Approx(s2).epsilon(1e-7));
  }
}

TEST_CASE("frequency example at the default tolerances") {
  // Independent SciPy evaluation of the same integral: 6.948888913e-4.
  const ManifoldModel m = frequency_manifold(16, Complex(1.0, 0.0));
  const double v = mse_hat_ml_scalar(m, kPi / 2.0, 1.0).mse;
  CHECK(v == doctest::Approx(6.948888913e-4).epsilon(1e-5));
  // The frequency error only depends on eps, so theta_bar = 0 gives the
  // symmetric-limit value 6.417035138e-4 (SciPy).
  CHECK(mse_hat_ml_scalar(m, 0.0, 1.0, tight()).mse == doctest::Approx(6.417035138e-4).epsilon(1e-7));
}

TEST_CASE("high-SNR prediction approaches the CRLB (frequency)") {
  const ManifoldModel m = frequency_manifold(16, Complex(1.0, 0.0));
  for (double s2 : {1e-2, 1e-3, 1e-4}) {
    const double crlb = s2 / (2.0 * 1240.0);
    const double v = mse_hat_ml_scalar(m, 0.3, s2).mse;
    CHECK(v / crlb == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("epsilon limits") {
  const Interval e = epsilon_limits(1.0, {0.0, 4.0});
  CHECK(e.lo == -0.5);
  CHECK(e.hi == 1.5);
}

TEST_CASE("generic predictor: exceed = 1 gives the second moment of the uniform range") {
  // 2 * integral |eps| over [-a, b] = a^2 + b^2
  const auto r = mse_hat_generic([](double) { return 1.0; }, 0.0, {-2.0, 4.0}, tight());
  CHECK(r.mse == doctest::Approx(1.0 + 4.0).epsilon(1e-10));
  CHECK_THROWS_AS(mse_hat_generic([](double) { return 1.1; }, 0.0, {-1.0, 1.0}), ContractError);
}

TEST_CASE("nuisance grid layout") {
  const NuisanceGrid g = build_nuisance_grid(1.0, 0.5, 5, 1e-3);
  CHECK(g.points.size() == 11);
  CHECK(g.true_index == 0);
  CHECK(g.points[0][0] == 1.0);
  CHECK(g.points[1][0] == doctest::Approx(1.0 - 1e-3));
  CHECK(g.points[5][0] == doctest::Approx(0.5));
  CHECK(g.points[10][0] == doctest::Approx(1.5));
  const NuisanceGrid clipped = build_nuisance_grid(0.2, 0.5, 5, 1e-3, {0.0, kPi});
  for (const auto& p : clipped.points) CHECK(p[0] >= 0.0);
  CHECK(clipped.points.size() < 11);
}

TEST_CASE("nuisance forms are ordered: scalar <= min-form, and a single-point grid reduces to scalar") {
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  RVec t(2);
  t << 25.0 * kPi / 180.0, 60.0 * kPi / 180.0;
  const NuisanceGrid grid = build_nuisance_grid(t[1], kPi / 2.0, 30, 1e-6, ff.support(1));
  NuisanceGrid only_truth;
  only_truth.points = {scalar_param(t[1])};
  const ManifoldModel az = slice(ff, t, 0);
  for (double s2 : {1.0, 0.1, 0.01}) {
    const double scalar = mse_hat_ml_scalar(az, t[0], s2, tight()).mse;
    const double min_form = mse_hat_ml_nuisance_min(ff, t, 0, grid, s2, tight()).mse;
    CHECK(scalar <= min_form * (1.0 + 1e-9));
    CHECK(mse_hat_ml_nuisance_min(ff, t, 0, only_truth, s2, tight()).mse ==
          doctest::Approx(scalar).epsilon(1e-9));
  }
}

TEST_CASE("full nuisance form with one grid point reduces to the scalar form") {
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  RVec t(2);
  t << 0.4, 1.0;
  NuisanceGrid only_truth;
  only_truth.points = {scalar_param(t[1])};
  const double s2 = 0.1;
  const auto full = mse_hat_ml_nuisance_full(ff, t, 0, only_truth, s2, {}, tight());
  const double scalar = mse_hat_ml_scalar(slice(ff, t, 0), t[0], s2, tight()).mse;
  CHECK(std::abs(full.mse - scalar) <= 4.0 * full.stderr_ + 1e-3 * scalar);
}

TEST_CASE("full nuisance form sits above the min form") {
  const ManifoldModel ff = far_field_manifold(table1_array(), 1.0);
  RVec t(2);
  t << 0.4, 1.0;
  const NuisanceGrid grid = build_nuisance_grid(t[1], kPi / 2.0, 6, 1e-3, ff.support(1));
  const double s2 = 0.3;
  const auto full = mse_hat_ml_nuisance_full(ff, t, 0, grid, s2, {}, QuadOptions{1e-8, 1e-5, 200000, {}});
  const auto min_form = mse_hat_ml_nuisance_min(ff, t, 0, grid, s2, tight());
  CHECK(full.mse + 3.0 * full.stderr_ >= min_form.mse);
  CHECK(full.stderr_ > 0.0);
  FullNuisanceOptions small;
  small.max_grid = 3;
  CHECK_THROWS_AS(mse_hat_ml_nuisance_full(ff, t, 0, grid, s2, small), DomainError);
}

TEST_CASE("misspecified prediction without mismatch equals the ML prediction") {
  const ManifoldModel m = frequency_manifold(12, Complex(1.0, 0.0));
  const MismatchPair pair{m, m, 0.5, 0.5};
  CHECK(mse_hat_mml(pair, 0.4, tight()).mse ==
        doctest::Approx(mse_hat_ml_scalar(m, 0.4, 0.5, tight()).mse).epsilon(1e-10));
}

TEST_CASE("beta prior") {
  const BetaPrior p = BetaPrior::symmetric(10.0);
  const QuadResult mass = adaptive_quad([&](double x) { return p.density(x); }, 0.0, kPi, 1e-13, 1e-12);
  CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.density(0.0) == 0.0);
  CHECK(std::isinf(p.log_density(kPi)));
  CHECK(p.density(1.0) == doctest::Approx(std::exp(p.log_density(1.0))).epsilon(1e-13));
  CHECK_THROWS_AS(BetaPrior::symmetric(2.0), DomainError);
  CHECK(BetaPrior::flat().density(1.0) == doctest::Approx(1.0 / kPi));
  Rng rng(RngState{3});
  double s = 0.0;
  for (int i = 0; i < 20000; ++i) s += p.sample(rng);
  CHECK(s / 20000 == doctest::Approx(kPi / 2.0).epsilon(0.01));
}

TEST_CASE("bayes average integrates the prior against a function") {
  const BetaPrior p = BetaPrior::symmetric(10.0);
  CHECK(bayes_average(p, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-6));
  // E[phi] = pi / 2 and Var[phi] = pi^2 / (4 (2a + 1))
  CHECK(bayes_average(p, [](double x) { return x; }) == doctest::Approx(kPi / 2.0).epsilon(1e-6));
  const double var = bayes_average(p, [](double x) { return (x - kPi / 2.0) * (x - kPi / 2.0); });
  CHECK(var == doctest::Approx(kPi * kPi / 84.0).epsilon(1e-5));
}

TEST_CASE("MAP with a flat prior is ML; an informative prior lowers the MSE") {
  const ManifoldModel ula = ula_manifold(15, Complex(1.0, 0.0));
  const double phi = 1.2;
  const double s2 = 3.0;
  CHECK(mse_hat_map_at(ula, BetaPrior::flat(), phi, s2, tight()).mse ==
        mse_hat_ml_scalar(ula, phi, s2, tight()).mse);
  CHECK(mse_hat_map_at(ula, BetaPrior::symmetric(10.0), phi, s2, tight()).mse <
        mse_hat_ml_scalar(ula, phi, s2, tight()).mse);
  CHECK_THROWS_AS(mse_hat_map_at(ula, BetaPrior::symmetric(10.0), 0.0, s2), DomainError);
}
