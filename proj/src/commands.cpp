#include "msepred/commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "msepred/bounds.hpp"
#include "msepred/error.hpp"
#include "msepred/esprit.hpp"
#include "msepred/predictor.hpp"
#include "msepred/simulate.hpp"

namespace msepred {
namespace {

constexpr double kDeg = kPi / 180.0;

struct Cell {
  std::string name;
  double value;
  bool is_mse;
};

using Row = std::vector<Cell>;

struct Wanted {
  bool prediction = false;
  bool crlb = false;
  bool mcrlb = false;
  bool hcrb = false;
  bool zzb = false;
  bool bcrlb = false;
  bool montecarlo = false;
};

Wanted select(const ScenarioConfig& c, Command command) {
  const bool pred = command == Command::kPredict || command == Command::kSweep;
  const bool bnd = command == Command::kBounds || command == Command::kSweep;
  const bool mc = command == Command::kMonteCarlo || command == Command::kSweep;
  Wanted w;
  w.prediction = pred && c.wants("prediction");
  w.crlb = bnd && c.wants("crlb");
  w.mcrlb = bnd && c.wants("mcrlb");
  w.hcrb = bnd && c.wants("hcrb");
  w.zzb = bnd && c.wants("zzb");
  w.bcrlb = bnd && c.wants("bcrlb");
  w.montecarlo = mc && c.wants("montecarlo");
  return w;
}

std::vector<double> without(const SearchGrid& grid, double theta_bar) {
  std::vector<double> points;
  points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.scalar(i) != theta_bar) points.push_back(grid.scalar(i));
  }
  return points;
}

void add_mc(Row& row, const McResult& mc, const std::string& suffix) {
  row.push_back({"mc_mse" + suffix, mc.mse, true});
  row.push_back({"mc_stderr" + suffix, mc.stderr_, false});
  row.push_back({"n_runs" + suffix, static_cast<double>(mc.n_runs), false});
}

std::uint64_t row_seed(const ScenarioConfig& c, std::size_t row) {
  return RngState{c.seed}.child(row).seed;
}

ArrayGeometry resolve_geometry(const std::string& name) {
  if (name == "table1") return table1_array();
  return load_geometry(name);
}

// ---------------------------------------------------------------------------
// Scalar-parameter scenarios: frequency, doa3d-{azimuth,elevation} without
// nuisance, custom geometry, custom identity.

struct ScalarSetup {
  ManifoldModel model;
  double theta_bar;
  SearchGrid ml_grid;
  bool closed_form_identity = false;
};

Row scalar_row(const ScenarioConfig& c, const ScalarSetup& s, double sigma2, std::size_t index,
               const Wanted& w) {
  Row row;
  if (w.prediction) {
    row.push_back({"mse_pred", mse_hat_ml_scalar(s.model, s.theta_bar, sigma2, c.quad).mse, true});
  }
  if (w.crlb) row.push_back({"crlb", crlb_scalar(s.model, s.theta_bar, sigma2).value, true});
  if (w.hcrb) {
    row.push_back({"hcrb",
                   hcrb_single_test_point(s.model, s.theta_bar, sigma2, without(s.ml_grid, s.theta_bar))
                       .value,
                   true});
  }
  if (w.montecarlo) {
    McScenario scenario{s.model, scalar_param(s.theta_bar), sigma2, 0, std::nullopt};
    McResult mc;
    if (s.closed_form_identity) {
      const Interval support = s.model.support(0);
      mc = run_monte_carlo(
          scenario,
          [support](const CVec& x, const RVec&) {
            return scalar_param(std::clamp(x[0].real(), support.lo, support.hi));
          },
          c.runs, row_seed(c, index), c.threads);
    } else {
      const GridSearchEstimator est(s.model, s.ml_grid);
      mc = run_monte_carlo(
          scenario, [&est](const CVec& x, const RVec&) { return est.estimate(x); }, c.runs,
          row_seed(c, index), c.threads);
    }
    add_mc(row, mc, "");
  }
  return row;
}

// ---------------------------------------------------------------------------
// DOA with an unknown nuisance angle.

struct NuisanceSetup {
  ManifoldModel model;  // J = 2 far-field
  RVec theta_bar;
  std::vector<int> components;  // estimated components, 0 = azimuth, 1 = elevation
  SearchGrid sphere;
};

NuisanceGrid nuisance_grid_for(const ScenarioConfig& c, const NuisanceSetup& s, int component) {
  const int other = 1 - component;
  const double e_max = c.e_max > 0.0 ? c.e_max : (other == 1 ? kPi / 2.0 : kPi);
  return build_nuisance_grid(s.theta_bar[other], e_max, c.n_log, c.lower_floor,
                             s.model.support(other));
}

Row nuisance_row(const ScenarioConfig& c, const NuisanceSetup& s, double sigma2,
                 std::size_t index, const Wanted& w) {
  Row row;
  const bool both = s.components.size() > 1;
  auto suffix = [both](int comp) { return both ? (comp == 0 ? "_az" : "_el") : ""; };
  for (int comp : s.components) {
    if (w.prediction) {
      const NuisanceGrid grid = nuisance_grid_for(c, s, comp);
      if (c.nuisance_form == "full") {
        FullNuisanceOptions mc;
        mc.mc_samples = c.full_samples;
        mc.rng = RngState{c.seed}.child(1000003 + index);
        const auto r = mse_hat_ml_nuisance_full(s.model, s.theta_bar, comp, grid, sigma2, mc, c.quad);
        row.push_back({std::string("mse_pred") + suffix(comp), r.mse, true});
        row.push_back({std::string("mse_pred_stderr") + suffix(comp), r.stderr_, false});
      } else {
        const auto r = mse_hat_ml_nuisance_min(s.model, s.theta_bar, comp, grid, sigma2, c.quad);
        row.push_back({std::string("mse_pred") + suffix(comp), r.mse, true});
      }
    }
  }
  if (w.crlb) {
    const RVec diag = crlb_joint(s.model, s.theta_bar, sigma2);
    for (int comp : s.components) {
      row.push_back({std::string("crlb") + suffix(comp), diag[comp], true});
    }
  }
  if (w.montecarlo) {
    const GridSearchEstimator est(s.model, s.sphere);
    for (int comp : s.components) {
      McScenario scenario{s.model, s.theta_bar, sigma2, comp, std::nullopt};
      const McResult mc = run_monte_carlo(
          scenario, [&est](const CVec& x, const RVec&) { return est.estimate(x); }, c.runs,
          row_seed(c, index), c.threads);
      add_mc(row, mc, suffix(comp));
    }
  }
  return row;
}

// ---------------------------------------------------------------------------

struct MismatchSetup {
  ManifoldModel truth;
  ManifoldModel assumed;
  double theta_bar;
  SearchGrid ml_grid;
};

Row mismatch_row(const ScenarioConfig& c, const MismatchSetup& s, double sigma2,
                 std::size_t index, const Wanted& w) {
  Row row;
  const MismatchPair pair{s.truth, s.assumed, sigma2, sigma2};
  if (w.prediction) row.push_back({"mse_pred", mse_hat_mml(pair, s.theta_bar, c.quad).mse, true});
  if (w.crlb) row.push_back({"crlb", crlb_scalar(s.assumed, s.theta_bar, sigma2).value, true});
  if (w.mcrlb) row.push_back({"mcrlb", mcrlb_parametric_mean(pair, s.theta_bar).value, true});
  if (w.hcrb) {
    row.push_back({"hcrb",
                   hcrb_single_test_point(s.assumed, s.theta_bar, sigma2,
                                          without(s.ml_grid, s.theta_bar))
                       .value,
                   true});
  }
  if (w.montecarlo) {
    const GridSearchEstimator est(s.assumed, s.ml_grid);
    McScenario scenario{s.truth, scalar_param(s.theta_bar), sigma2, 0, std::nullopt};
    add_mc(row,
           run_monte_carlo(
               scenario, [&est](const CVec& x, const RVec&) { return est.estimate(x); }, c.runs,
               row_seed(c, index), c.threads),
           "");
  }
  return row;
}

Row esprit_row(const ScenarioConfig& c, const EspritScenario& base, const SearchGrid& hcrb_grid,
               double sigma2, std::size_t index, const Wanted& w) {
  Row row;
  EspritScenario s = base;
  s.sigma_w2 = sigma2;
  const ManifoldModel model = s.model();
  if (w.prediction) row.push_back({"mse_pred", mse_hat_esprit(s, c.quad).mse, true});
  if (w.crlb) row.push_back({"crlb", crlb_scalar(model, s.phi_bar, sigma2).value, true});
  if (w.hcrb) {
    row.push_back(
        {"hcrb",
         hcrb_single_test_point(model, s.phi_bar, sigma2, without(hcrb_grid, s.phi_bar)).value,
         true});
  }
  if (w.montecarlo) {
    McScenario scenario{model, scalar_param(s.phi_bar), sigma2, 0, std::nullopt};
    add_mc(row,
           run_monte_carlo(
               scenario,
               [](const CVec& x, const RVec&) { return scalar_param(esprit_estimate(x).phi_hat); },
               c.runs, row_seed(c, index), c.threads),
           "");
  }
  return row;
}

Row bayesian_row(const ScenarioConfig& c, const ManifoldModel& model, const BetaPrior& prior,
                 const GridSearchEstimator& est, double sigma2, std::size_t index,
                 const Wanted& w) {
  Row row;
  const QuadOptions per_phi = c.quad_explicit ? c.quad : bayesian_quad_options();
  if (w.prediction) {
    const double map = bayes_average(
        prior, [&](double phi) { return mse_hat_map_at(model, prior, phi, sigma2, per_phi).mse; });
    const double ml = bayes_average(
        prior, [&](double phi) { return mse_hat_ml_scalar(model, phi, sigma2, per_phi).mse; });
    row.push_back({"mse_pred", map, true});
    row.push_back({"mse_pred_ml", ml, true});
  }
  if (w.zzb) {
    const QuadOptions outer = c.quad_explicit ? c.quad : zzb_quad_options();
    row.push_back({"zzb", zzb(model, prior, sigma2, outer).value, true});
  }
  if (w.bcrlb) {
    row.push_back({"bcrlb", bcrlb(prior, c.amplitude * c.amplitude / sigma2, c.n_sensors).value,
                   true});
  }
  if (w.montecarlo) {
    McScenario scenario{model, scalar_param(kPi / 2.0), sigma2, 0, prior};
    const auto seed = row_seed(c, index);
    add_mc(row,
           run_monte_carlo(
               scenario,
               [&](const CVec& x, const RVec&) {
                 return scalar_param(est.estimate_map(x, prior, sigma2));
               },
               c.runs, seed, c.threads),
           "");
    add_mc(row,
           run_monte_carlo(
               scenario, [&](const CVec& x, const RVec&) { return est.estimate(x); }, c.runs,
               seed, c.threads),
           "_ml");
  }
  return row;
}

bool is_angle_kind(const ScenarioConfig& c) {
  return c.kind != "frequency" && !(c.kind == "custom" && c.custom_model == "identity");
}

}  // namespace

Table run_command(const ScenarioConfig& c, Command command) {
  const Wanted w = select(c, command);
  const auto sigmas = c.noise_variances();
  const auto snrs = c.snr_values();
  std::vector<Row> rows;

  auto for_each_row = [&](const auto& make) {
    for (std::size_t i = 0; i < sigmas.size(); ++i) rows.push_back(make(sigmas[i], i));
  };

  if (c.kind == "frequency") {
    ScalarSetup s{frequency_manifold(c.n_sensors, Complex(c.amplitude, 0.0)), c.omega,
                  uniform_grid(-kPi, kPi, c.ml_points)};
    for_each_row([&](double s2, std::size_t i) { return scalar_row(c, s, s2, i, w); });
  } else if (c.kind.rfind("doa3d", 0) == 0 ||
             (c.kind == "custom" && c.custom_model == "geometry")) {
    const ManifoldModel ff = far_field_manifold(resolve_geometry(c.geometry), c.amplitude);
    RVec theta(2);
    theta << c.azimuth_deg * kDeg, c.elevation_deg * kDeg;
    const bool elevation = c.kind == "doa3d-elevation" ||
                           (c.kind == "custom" && c.estimate == "elevation");
    if (c.nuisance) {
      NuisanceSetup s{ff, theta, {}, sphere_grid(c.sphere_rings, c.sphere_density)};
      if (c.kind == "doa3d-joint") {
        s.components = {0, 1};
      } else {
        s.components = {elevation ? 1 : 0};
      }
      for_each_row([&](double s2, std::size_t i) { return nuisance_row(c, s, s2, i, w); });
    } else {
      const int comp = elevation ? 1 : 0;
      ScalarSetup s{slice(ff, theta, comp), theta[comp],
                    elevation ? uniform_grid(0.0, kPi, c.ml_points)
                              : uniform_grid(-kPi, kPi, c.ml_points)};
      for_each_row([&](double s2, std::size_t i) { return scalar_row(c, s, s2, i, w); });
    }
  } else if (c.kind == "custom") {
    ScalarSetup s{identity_manifold(c.support, c.noise), c.theta,
                  uniform_grid(c.support.lo, c.support.hi, c.ml_points), true};
    for_each_row([&](double s2, std::size_t i) { return scalar_row(c, s, s2, i, w); });
  } else if (c.kind == "nearfield-mismatch") {
    const ArrayGeometry uca = uniform_circular_array(c.n_sensors, c.radius);
    MismatchSetup s{near_field_manifold(uca, c.range, c.amplitude),
                    planar_far_field_manifold(uca, c.amplitude), c.azimuth_deg * kDeg,
                    uniform_grid(-kPi, kPi, c.ml_points)};
    for_each_row([&](double s2, std::size_t i) { return mismatch_row(c, s, s2, i, w); });
  } else if (c.kind == "esprit-ula") {
    EspritScenario base;
    base.n_sensors = c.n_sensors;
    base.alpha = Complex(c.amplitude, 0.0);
    base.phi_bar = c.azimuth_deg * kDeg;
    const SearchGrid grid = uniform_grid(0.0, kPi, c.ml_points);
    for_each_row([&](double s2, std::size_t i) { return esprit_row(c, base, grid, s2, i, w); });
  } else if (c.kind == "bayesian-ula") {
    const ManifoldModel model = ula_manifold(c.n_sensors, Complex(c.amplitude, 0.0));
    const BetaPrior prior = BetaPrior::symmetric(c.prior_a);
    std::optional<GridSearchEstimator> est;
    if (w.montecarlo) est.emplace(model, omega_grid(c.omega_points));
    for_each_row(
        [&](double s2, std::size_t i) { return bayesian_row(c, model, prior, *est, s2, i, w); });
  } else {
    throw ConfigError("unsupported scenario kind '" + c.kind + "'");
  }

  Table table;
  const bool degrees = is_angle_kind(c);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> names{"snr_db", "sigma2"};
    std::vector<double> values{snrs[r], sigmas[r]};
    for (const auto& cell : rows[r]) {
      names.push_back(cell.name);
      values.push_back(cell.value);
      if (degrees && cell.is_mse) {
        names.push_back(cell.name + "_rmse_deg");
        values.push_back(std::sqrt(std::max(0.0, cell.value)) / kDeg);
      }
    }
    if (r == 0) table.columns = names;
    table.rows.push_back(std::move(values));
  }
  if (rows.empty()) table.columns = {"snr_db", "sigma2"};
  return table;
}

}  // namespace msepred
