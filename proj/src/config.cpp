#include "msepred/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "msepred/error.hpp"

namespace msepred {
namespace {

struct Value {
  enum class Type { kNumber, kString, kBool, kNumberList, kStringList } type;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<double> numbers;
  std::vector<std::string> texts;
  int line = 0;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  std::ostringstream os;
  os << origin;
  if (line > 0) os << ":" << line;
  os << ": " << message;
  throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing '#' comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& token, double& out) {
  std::string t = token;
  t.erase(std::remove(t.begin(), t.end(), '_'), t.end());
  if (t.empty()) return false;
  if (t == "inf" || t == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (t == "-inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  const char* begin = t.data() + (t[0] == '+' ? 1 : 0);
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

bool parse_string(const std::string& token, std::string& out) {
  if (token.size() < 2 || token.front() != '"' || token.back() != '"') return false;
  out = token.substr(1, token.size() - 2);
  return out.find('"') == std::string::npos;
}

std::vector<std::string> split_array(const std::string& body) {
  std::vector<std::string> items;
  std::string current;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty()) items.push_back(trim(current));
  return items;
}

Value parse_value(const std::string& raw, const std::string& origin, int line) {
  Value v{};
  v.line = line;
  const std::string token = trim(raw);
  if (token.empty()) fail(origin, line, "missing value");
  if (token == "true" || token == "false") {
    v.type = Value::Type::kBool;
    v.flag = token == "true";
    return v;
  }
  if (token.front() == '[') {
    if (token.back() != ']') fail(origin, line, "unterminated array (arrays must fit on one line)");
    const auto items = split_array(token.substr(1, token.size() - 2));
    bool all_numbers = true;
    bool all_strings = true;
    for (const auto& item : items) {
      double d;
      std::string s;
      all_numbers = all_numbers && parse_number(item, d);
      all_strings = all_strings && parse_string(item, s);
    }
    if (items.empty() || all_numbers) {
      v.type = Value::Type::kNumberList;
      for (const auto& item : items) {
        double d = 0.0;
        parse_number(item, d);
        v.numbers.push_back(d);
      }
      return v;
    }
    if (all_strings) {
      v.type = Value::Type::kStringList;
      for (const auto& item : items) {
        std::string s;
        parse_string(item, s);
        v.texts.push_back(s);
      }
      return v;
    }
    fail(origin, line, "arrays must hold only numbers or only strings");
  }
  if (token.front() == '"') {
    if (!parse_string(token, v.text)) fail(origin, line, "malformed string " + token);
    v.type = Value::Type::kString;
    return v;
  }
  if (!parse_number(token, v.number)) fail(origin, line, "cannot parse value '" + token + "'");
  v.type = Value::Type::kNumber;
  return v;
}

// ---------------------------------------------------------------------------
// Typed accessors

double as_number(const Value& v, const std::string& key, const std::string& origin) {
  if (v.type != Value::Type::kNumber) fail(origin, v.line, "'" + key + "' must be a number");
  return v.number;
}

int as_int(const Value& v, const std::string& key, const std::string& origin) {
  const double d = as_number(v, key, origin);
  if (d != std::floor(d) || std::abs(d) > 2e9) {
    fail(origin, v.line, "'" + key + "' must be an integer");
  }
  return static_cast<int>(d);
}

std::string as_string(const Value& v, const std::string& key, const std::string& origin) {
  if (v.type != Value::Type::kString) fail(origin, v.line, "'" + key + "' must be a string");
  return v.text;
}

bool as_bool(const Value& v, const std::string& key, const std::string& origin) {
  if (v.type != Value::Type::kBool) fail(origin, v.line, "'" + key + "' must be true or false");
  return v.flag;
}

std::vector<double> as_numbers(const Value& v, const std::string& key, const std::string& origin) {
  if (v.type == Value::Type::kNumber) return {v.number};
  if (v.type != Value::Type::kNumberList) {
    fail(origin, v.line, "'" + key + "' must be a list of numbers");
  }
  return v.numbers;
}

std::vector<std::string> as_strings(const Value& v, const std::string& key,
                                    const std::string& origin) {
  if (v.type == Value::Type::kString) return {v.text};
  if (v.type == Value::Type::kNumberList && v.numbers.empty()) return {};
  if (v.type != Value::Type::kStringList) {
    fail(origin, v.line, "'" + key + "' must be a list of strings");
  }
  return v.texts;
}

using Setter =
    std::function<void(const Value&, ScenarioConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> keys = [] {
    std::map<std::string, Setter> k;
    auto number = [](double ScenarioConfig::*field) {
      return Setter([field](const Value& v, ScenarioConfig& c, const std::string& o,
                            const std::string& key) {
        c.*field = as_number(v, key, o);
      });
    };
    auto integer = [](int ScenarioConfig::*field) {
      return Setter([field](const Value& v, ScenarioConfig& c, const std::string& o,
                            const std::string& key) {
        c.*field = as_int(v, key, o);
      });
    };
    auto text = [](std::string ScenarioConfig::*field) {
      return Setter([field](const Value& v, ScenarioConfig& c, const std::string& o,
                            const std::string& key) {
        c.*field = as_string(v, key, o);
      });
    };

    k["kind"] = text(&ScenarioConfig::kind);
    k["name"] = text(&ScenarioConfig::name);
    k["snr_db"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.snr_db = as_numbers(v, "snr_db", o);
      if (c.snr_db.empty()) fail(o, v.line, "'snr_db' must not be empty");
    };
    k["sigma2"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.sigma2 = as_numbers(v, "sigma2", o);
      if (c.sigma2.empty()) fail(o, v.line, "'sigma2' must not be empty");
    };
    k["outputs"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.outputs = as_strings(v, "outputs", o);
    };

    k["model.n_sensors"] = integer(&ScenarioConfig::n_sensors);
    k["model.amplitude"] = number(&ScenarioConfig::amplitude);
    k["model.omega"] = number(&ScenarioConfig::omega);
    k["model.geometry"] = text(&ScenarioConfig::geometry);
    k["model.azimuth_deg"] = number(&ScenarioConfig::azimuth_deg);
    k["model.elevation_deg"] = number(&ScenarioConfig::elevation_deg);
    k["model.radius"] = number(&ScenarioConfig::radius);
    k["model.range"] = number(&ScenarioConfig::range);
    k["model.prior_a"] = number(&ScenarioConfig::prior_a);
    k["model.nuisance"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.nuisance = as_bool(v, "model.nuisance", o);
    };
    k["model.custom_model"] = text(&ScenarioConfig::custom_model);
    k["model.theta"] = number(&ScenarioConfig::theta);
    k["model.support"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      const auto s = as_numbers(v, "model.support", o);
      if (s.size() != 2 || !(s[0] < s[1])) {
        fail(o, v.line, "'model.support' must be [lo, hi] with lo < hi");
      }
      c.support = {s[0], s[1]};
    };
    k["model.noise"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      const auto s = as_string(v, "model.noise", o);
      if (s == "complex") {
        c.noise = NoiseKind::kComplexCircular;
      } else if (s == "real") {
        c.noise = NoiseKind::kReal;
      } else {
        fail(o, v.line, "'model.noise' must be \"complex\" or \"real\"");
      }
    };
    k["model.estimate"] = text(&ScenarioConfig::estimate);

    k["quadrature.abs_tol"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.quad.abs_tol = as_number(v, "quadrature.abs_tol", o);
      c.quad_explicit = true;
    };
    k["quadrature.rel_tol"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.quad.rel_tol = as_number(v, "quadrature.rel_tol", o);
      c.quad_explicit = true;
    };
    k["quadrature.max_evals"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      c.quad.max_evals = as_int(v, "quadrature.max_evals", o);
    };

    k["grid.ml_points"] = integer(&ScenarioConfig::ml_points);
    k["grid.omega_points"] = integer(&ScenarioConfig::omega_points);
    k["grid.sphere_rings"] = integer(&ScenarioConfig::sphere_rings);
    k["grid.sphere_density"] = number(&ScenarioConfig::sphere_density);

    k["nuisance.e_max"] = number(&ScenarioConfig::e_max);
    k["nuisance.n_log"] = integer(&ScenarioConfig::n_log);
    k["nuisance.lower_floor"] = number(&ScenarioConfig::lower_floor);
    k["nuisance.form"] = text(&ScenarioConfig::nuisance_form);
    k["nuisance.full_samples"] = integer(&ScenarioConfig::full_samples);

    k["montecarlo.runs"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      const double d = as_number(v, "montecarlo.runs", o);
      if (d != std::floor(d) || d < 2 || d > 1e12) {
        fail(o, v.line, "'montecarlo.runs' must be an integer >= 2");
      }
      c.runs = static_cast<std::int64_t>(d);
    };
    k["montecarlo.seed"] = [](const Value& v, ScenarioConfig& c, const std::string& o, const std::string&) {
      const double d = as_number(v, "montecarlo.seed", o);
      if (d != std::floor(d) || d < 0 || d > 9.007199254740992e15) {
        fail(o, v.line, "'montecarlo.seed' must be a nonnegative integer below 2^53");
      }
      c.seed = static_cast<std::uint64_t>(d);
    };
    k["montecarlo.threads"] = integer(&ScenarioConfig::threads);
    return k;
  }();
  return keys;
}

std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  const auto bare = [](const std::string& k) {
    const auto dot = k.rfind('.');
    return dot == std::string::npos ? k : k.substr(dot + 1);
  };
  for (const auto& [candidate, setter] : schema()) {
    const std::size_t d =
        std::min(edit_distance(key, candidate), edit_distance(bare(key), bare(candidate)) + 1);
    if (d < best_distance) {
      best_distance = d;
      best = candidate;
    }
  }
  return best;
}

std::string nearest_of(const std::string& word, const std::vector<std::string>& options) {
  std::string best;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& o : options) {
    const std::size_t d = edit_distance(word, o);
    if (d < best_distance) {
      best_distance = d;
      best = o;
    }
  }
  return best;
}

const KindInfo* find_kind(const std::string& kind) {
  for (const auto& k : scenario_kinds()) {
    if (k.kind == kind) return &k;
  }
  return nullptr;
}

void validate(ScenarioConfig& c, const std::string& origin,
              const std::map<std::string, int>& seen_lines) {
  auto line_of = [&](const std::string& key) {
    const auto it = seen_lines.find(key);
    return it == seen_lines.end() ? 0 : it->second;
  };
  if (c.kind.empty()) fail(origin, 0, "missing required key 'kind'");
  const KindInfo* info = find_kind(c.kind);
  if (info == nullptr) {
    std::vector<std::string> names;
    for (const auto& k : scenario_kinds()) names.push_back(k.kind);
    fail(origin, line_of("kind"),
         "unknown kind '" + c.kind + "'; did you mean '" + nearest_of(c.kind, names) + "'?");
  }

  const bool has_snr = seen_lines.count("snr_db") > 0;
  const bool has_sigma = seen_lines.count("sigma2") > 0;
  if (has_snr == has_sigma) {
    fail(origin, 0, "give exactly one of 'snr_db' or 'sigma2' (a nonempty list)");
  }
  for (double s : c.sigma2) {
    if (!(s > 0.0) || !std::isfinite(s)) fail(origin, line_of("sigma2"), "sigma2 values must be positive");
  }
  for (double s : c.snr_db) {
    if (!std::isfinite(s)) fail(origin, line_of("snr_db"), "snr_db values must be finite");
  }

  if (seen_lines.count("outputs") == 0) {
    for (const auto& out : info->outputs) {
      if (!(out == "hcrb" && c.nuisance)) c.outputs.push_back(out);
    }
  }
  if (c.outputs.empty()) fail(origin, line_of("outputs"), "'outputs' must not be empty");
  std::set<std::string> unique;
  for (const auto& o : c.outputs) {
    if (std::find(info->outputs.begin(), info->outputs.end(), o) == info->outputs.end()) {
      fail(origin, line_of("outputs"),
           "output '" + o + "' is not available for kind '" + c.kind + "'; did you mean '" +
               nearest_of(o, info->outputs) + "'?");
    }
    if (!unique.insert(o).second) fail(origin, line_of("outputs"), "duplicate output '" + o + "'");
  }

  if (c.n_sensors == 0) {
    if (c.kind == "frequency") c.n_sensors = 16;
    if (c.kind == "esprit-ula" || c.kind == "bayesian-ula") c.n_sensors = 15;
    if (c.kind == "nearfield-mismatch") c.n_sensors = 12;
  }
  if (c.kind == "esprit-ula" && seen_lines.count("model.azimuth_deg") == 0) c.azimuth_deg = 35.0;

  auto require = [&](bool ok, const std::string& key, const std::string& message) {
    if (!ok) fail(origin, line_of(key), message);
  };
  require(c.quad.abs_tol > 0.0 && c.quad.rel_tol > 0.0, "quadrature.abs_tol",
          "quadrature tolerances must be positive");
  require(c.quad.max_evals >= 15, "quadrature.max_evals", "'quadrature.max_evals' must be >= 15");
  require(c.amplitude > 0.0 && std::isfinite(c.amplitude), "model.amplitude",
          "'model.amplitude' must be positive");
  require(c.ml_points >= 2, "grid.ml_points", "'grid.ml_points' must be >= 2");
  require(c.omega_points >= 2, "grid.omega_points", "'grid.omega_points' must be >= 2");
  require(c.sphere_rings >= 2, "grid.sphere_rings", "'grid.sphere_rings' must be >= 2");
  require(c.sphere_density > 0.0, "grid.sphere_density", "'grid.sphere_density' must be positive");
  require(c.n_log >= 1, "nuisance.n_log", "'nuisance.n_log' must be >= 1");
  require(c.lower_floor > 0.0, "nuisance.lower_floor", "'nuisance.lower_floor' must be positive");
  require(c.e_max == 0.0 || c.e_max > c.lower_floor, "nuisance.e_max",
          "'nuisance.e_max' must exceed 'nuisance.lower_floor'");
  require(c.nuisance_form == "min" || c.nuisance_form == "full", "nuisance.form",
          "'nuisance.form' must be \"min\" or \"full\"");
  require(c.full_samples >= 20, "nuisance.full_samples", "'nuisance.full_samples' must be >= 20");
  require(c.threads >= 1, "montecarlo.threads", "'montecarlo.threads' must be >= 1");
  require(c.estimate == "azimuth" || c.estimate == "elevation", "model.estimate",
          "'model.estimate' must be \"azimuth\" or \"elevation\"");

  const bool doa = c.kind.rfind("doa3d", 0) == 0 ||
                   (c.kind == "custom" && c.custom_model == "geometry");
  if (doa) {
    require(c.azimuth_deg >= -180.0 && c.azimuth_deg <= 180.0, "model.azimuth_deg",
            "'model.azimuth_deg' must be in [-180, 180]");
    require(c.elevation_deg >= 0.0 && c.elevation_deg <= 180.0, "model.elevation_deg",
            "'model.elevation_deg' must be in [0, 180]");
  }
  if (c.kind == "frequency") {
    require(c.n_sensors >= 1, "model.n_sensors", "'model.n_sensors' must be >= 1");
    require(c.omega >= -kPi && c.omega <= kPi, "model.omega", "'model.omega' must be in [-pi, pi]");
  }
  if (c.kind == "nearfield-mismatch") {
    require(c.n_sensors >= 2, "model.n_sensors", "'model.n_sensors' must be >= 2");
    require(c.radius > 0.0 && c.range > 0.0, "model.range", "radius and range must be positive");
    require(c.azimuth_deg >= -180.0 && c.azimuth_deg <= 180.0, "model.azimuth_deg",
            "'model.azimuth_deg' must be in [-180, 180]");
  }
  if (c.kind == "esprit-ula") {
    require(c.n_sensors >= 3, "model.n_sensors", "'model.n_sensors' must be >= 3");
    require(c.azimuth_deg > 0.0 && c.azimuth_deg < 180.0, "model.azimuth_deg",
            "'model.azimuth_deg' must be in (0, 180)");
  }
  if (c.kind == "bayesian-ula") {
    require(c.n_sensors >= 2, "model.n_sensors", "'model.n_sensors' must be >= 2");
    require(c.prior_a > 2.0, "model.prior_a", "'model.prior_a' must exceed 2");
  }
  if (c.kind == "custom") {
    require(c.custom_model == "identity" || c.custom_model == "geometry", "model.custom_model",
            "'model.custom_model' must be \"identity\" or \"geometry\"");
    if (c.custom_model == "identity") {
      require(c.support.contains(c.theta), "model.theta", "'model.theta' must lie in 'model.support'");
    } else {
      require(c.geometry != "table1" || seen_lines.count("model.geometry") > 0, "model.geometry",
              "custom geometry scenarios need 'model.geometry' (a geometry file path)");
    }
  }
  if (c.kind == "doa3d-joint") c.nuisance = true;
  if (c.nuisance && c.wants("hcrb")) {
    fail(origin, line_of("outputs"), "'hcrb' is only available without nuisance parameters");
  }
}

std::string format_list(const std::vector<double>& values) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << (i ? ", " : "") << values[i];
  }
  os << "]";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

bool ScenarioConfig::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

std::vector<double> ScenarioConfig::snr_values() const {
  std::vector<double> snr;
  if (!snr_db.empty()) {
    snr = snr_db;
  } else {
    for (double s2 : sigma2) snr.push_back(10.0 * std::log10(amplitude * amplitude / s2));
  }
  std::sort(snr.begin(), snr.end());
  return snr;
}

std::vector<double> ScenarioConfig::noise_variances() const {
  std::vector<double> out;
  if (!snr_db.empty()) {
    for (double db : snr_values()) out.push_back(amplitude * amplitude * std::pow(10.0, -db / 10.0));
  } else {
    out = sigma2;
    std::sort(out.begin(), out.end(), std::greater<>());
  }
  return out;
}

const std::vector<KindInfo>& scenario_kinds() {
  static const std::vector<KindInfo> kinds = {
      {"frequency", "complex exponential frequency estimation, x_n = A e^{j omega n} + v_n",
       {"prediction", "crlb", "hcrb", "montecarlo"}},
      {"doa3d-azimuth", "azimuth DOA on a 3D array (Table 1 geometry by default)",
       {"prediction", "crlb", "hcrb", "montecarlo"}},
      {"doa3d-elevation", "elevation DOA on a 3D array",
       {"prediction", "crlb", "hcrb", "montecarlo"}},
      {"doa3d-joint", "azimuth and elevation both unknown; per-angle columns",
       {"prediction", "crlb", "montecarlo"}},
      {"nearfield-mismatch", "near-field source, far-field estimator on a UCA",
       {"prediction", "crlb", "mcrlb", "hcrb", "montecarlo"}},
      {"esprit-ula", "single-source ESPRIT on a half-wavelength ULA",
       {"prediction", "crlb", "hcrb", "montecarlo"}},
      {"bayesian-ula", "ML and MAP DOA with a symmetric beta prior on a ULA",
       {"prediction", "zzb", "bcrlb", "montecarlo"}},
      {"custom", "identity model or a user geometry file (azimuth or elevation)",
       {"prediction", "crlb", "hcrb", "montecarlo"}},
  };
  return kinds;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
  ScenarioConfig config;
  std::map<std::string, int> seen;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail(origin, line, "malformed section header");
      section = trim(text.substr(1, text.size() - 2));
      static const std::set<std::string> sections = {"model", "quadrature", "grid", "nuisance",
                                                     "montecarlo"};
      if (!sections.count(section)) {
        fail(origin, line,
             "unknown section [" + section + "]; did you mean [" +
                 nearest_of(section, {sections.begin(), sections.end()}) + "]?");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
    const std::string name = trim(text.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    const auto it = schema().find(key);
    if (it == schema().end()) {
      fail(origin, line, "unknown key '" + key + "'; did you mean '" + nearest_key(key) + "'?");
    }
    if (seen.count(key)) fail(origin, line, "duplicate key '" + key + "'");
    seen[key] = line;
    const Value value = parse_value(text.substr(eq + 1), origin, line);
    it->second(value, config, origin, key);
  }
  validate(config, origin, seen);
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ScenarioConfig c = parse_config(in, path);
  // geometry files are looked up next to the scenario file
  if (c.geometry != "table1") {
    const std::filesystem::path g(c.geometry);
    if (g.is_relative()) c.geometry = (std::filesystem::path(path).parent_path() / g).string();
  }
  return c;
}

std::string describe(const ScenarioConfig& c) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "kind = " << c.kind << "\n";
  if (!c.name.empty()) os << "name = " << c.name << "\n";
  os << "snr_db = " << format_list(c.snr_values()) << "\n";
  os << "sigma2 = " << format_list(c.noise_variances()) << "\n";
  os << "outputs = [";
  for (std::size_t i = 0; i < c.outputs.size(); ++i) os << (i ? ", " : "") << c.outputs[i];
  os << "]\n";
  os << "model.amplitude = " << c.amplitude << "\n";
  if (c.kind == "frequency") {
    os << "model.n_sensors = " << c.n_sensors << "\nmodel.omega = " << c.omega << "\n";
  } else if (c.kind.rfind("doa3d", 0) == 0) {
    os << "model.geometry = " << c.geometry << "\nmodel.azimuth_deg = " << c.azimuth_deg
       << "\nmodel.elevation_deg = " << c.elevation_deg << "\nmodel.nuisance = "
       << (c.nuisance ? "true" : "false") << "\n";
  } else if (c.kind == "nearfield-mismatch") {
    os << "model.n_sensors = " << c.n_sensors << "\nmodel.radius = " << c.radius
       << "\nmodel.range = " << c.range << "\nmodel.azimuth_deg = " << c.azimuth_deg << "\n";
  } else if (c.kind == "esprit-ula") {
    os << "model.n_sensors = " << c.n_sensors << "\nmodel.azimuth_deg = " << c.azimuth_deg
       << "\n";
  } else if (c.kind == "bayesian-ula") {
    os << "model.n_sensors = " << c.n_sensors << "\nmodel.prior_a = " << c.prior_a << "\n";
  } else if (c.kind == "custom") {
    os << "model.custom_model = " << c.custom_model << "\n";
    if (c.custom_model == "identity") {
      os << "model.theta = " << c.theta << "\nmodel.support = [" << c.support.lo << ", "
         << c.support.hi << "]\nmodel.noise = "
         << (c.noise == NoiseKind::kReal ? "real" : "complex") << "\n";
    } else {
      os << "model.geometry = " << c.geometry << "\nmodel.estimate = " << c.estimate
         << "\nmodel.azimuth_deg = " << c.azimuth_deg
         << "\nmodel.elevation_deg = " << c.elevation_deg << "\n";
    }
  }
  os << "quadrature.abs_tol = " << c.quad.abs_tol << "\nquadrature.rel_tol = " << c.quad.rel_tol
     << "\nquadrature.max_evals = " << c.quad.max_evals << "\n";
  os << "grid.ml_points = " << c.ml_points << "\ngrid.omega_points = " << c.omega_points
     << "\ngrid.sphere_rings = " << c.sphere_rings << "\ngrid.sphere_density = "
     << c.sphere_density << "\n";
  os << "nuisance.e_max = " << c.e_max << (c.e_max == 0.0 ? " (pi/2 elevation, pi azimuth)" : "")
     << "\nnuisance.n_log = " << c.n_log << "\nnuisance.lower_floor = " << c.lower_floor
     << "\nnuisance.form = " << c.nuisance_form << "\nnuisance.full_samples = "
     << c.full_samples << "\n";
  os << "montecarlo.runs = " << c.runs << "\nmontecarlo.seed = " << c.seed
     << "\nmontecarlo.threads = " << c.threads << "\n";
  return os.str();
}

}  // namespace msepred
