#pragma once

// Scenario files: a TOML subset with `key = value` lines, `[section]` headers,
// `#` comments, and values that are numbers, "strings", booleans or
// single-line [arrays]. One scenario per file.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "msepred/models.hpp"
#include "msepred/numeric.hpp"

namespace msepred {

struct ScenarioConfig {
  std::string kind;
  std::string name;

  // [model]
  int n_sensors = 0;  // frequency samples, ULA sensors, UCA elements
  double amplitude = 1.0;
  double omega = kPi / 2.0;
  std::string geometry = "table1";
  double azimuth_deg = 25.0;
  double elevation_deg = 60.0;
  double radius = 5.0 / 3.0;
  double range = 5.0;
  double prior_a = 10.0;
  bool nuisance = false;
  std::string custom_model = "identity";
  double theta = 0.0;
  Interval support{-100.0, 100.0};
  NoiseKind noise = NoiseKind::kComplexCircular;
  std::string estimate = "azimuth";

  // noise levels; exactly one of the two lists is given in the file
  std::vector<double> snr_db;
  std::vector<double> sigma2;

  // [quadrature]
  QuadOptions quad;

  // [grid]
  int ml_points = 3600;
  int omega_points = 8192;
  int sphere_rings = 200;
  double sphere_density = 100.0;

  // [nuisance]
  double e_max = 0.0;  // 0 selects pi/2 for elevation, pi for azimuth
  int n_log = 60;
  double lower_floor = 1e-7;
  std::string nuisance_form = "min";
  int full_samples = 2000;

  // [montecarlo]
  std::int64_t runs = 10000;
  std::uint64_t seed = 1;
  int threads = 1;

  std::vector<std::string> outputs;

  /// Tolerances came from the file or the command line rather than defaults.
  bool quad_explicit = false;

  bool wants(const std::string& output) const;
  /// |amplitude|^2 / 10^(snr/10) per row, rows sorted by SNR ascending.
  std::vector<double> noise_variances() const;
  std::vector<double> snr_values() const;
};

struct KindInfo {
  std::string kind;
  std::string description;
  std::vector<std::string> outputs;
};

const std::vector<KindInfo>& scenario_kinds();

/// Throws ConfigError with line numbers and, for unknown keys, the nearest valid key.
ScenarioConfig parse_config(std::istream& in, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Resolved settings, one `key = value` line each.
std::string describe(const ScenarioConfig& config);

/// Levenshtein edit distance.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace msepred
