#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "msepred/commands.hpp"
#include "msepred/config.hpp"
#include "msepred/csv.hpp"
#include "msepred/error.hpp"

using namespace msepred;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.toml");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("edit distance") {
  CHECK(edit_distance("sigma2", "sigm2") == 1);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
}

TEST_CASE("config defaults resolve per kind") {
  const ScenarioConfig c = parse("kind = \"frequency\"\nsnr_db = [0]\n");
  CHECK(c.n_sensors == 16);
  CHECK(c.quad.abs_tol == 1e-5);
  CHECK(c.quad.rel_tol == 1e-5);
  CHECK(c.runs == 10000);
  CHECK(c.ml_points == 3600);
  CHECK(c.omega_points == 8192);
  CHECK(c.wants("prediction"));
  CHECK(c.wants("hcrb"));
  CHECK_FALSE(c.wants("zzb"));
  CHECK(parse("kind = \"esprit-ula\"\nsnr_db = [0]\n").azimuth_deg == 35.0);
  CHECK(parse("kind = \"bayesian-ula\"\nsnr_db = [0]\n").n_sensors == 15);
  CHECK(parse("kind = \"nearfield-mismatch\"\nsnr_db = [0]\n").n_sensors == 12);
  const ScenarioConfig j = parse("kind = \"doa3d-joint\"\nsnr_db = [0]\n");
  CHECK(j.nuisance);
  CHECK_FALSE(j.wants("hcrb"));
  CHECK_FALSE(parse("kind = \"doa3d-azimuth\"\nsnr_db = [0]\n[model]\nnuisance = true\n").wants("hcrb"));
}

TEST_CASE("unknown keys name the nearest valid key") {
  const std::string e = error_of("kind = \"frequency\"\nsigm2 = [1]\n");
  CHECK(e.find("'sigm2'") != std::string::npos);
  CHECK(e.find("'sigma2'") != std::string::npos);
  const std::string m = error_of("kind = \"frequency\"\nsnr_db = [0]\n[model]\nn_sensor = 4\n");
  CHECK(m.find("n_sensors") != std::string::npos);
}

TEST_CASE("config validation errors") {
  CHECK(error_of("kind = \"frequency\"\nsnr_db = []\n") != "");
  CHECK(error_of("kind = \"frequency\"\n") != "");
  CHECK(error_of("kind = \"frequency\"\nsnr_db = [0]\nsigma2 = [1]\n") != "");
  CHECK(error_of("kind = \"frequency\"\nsnr_db = [0]\nsnr_db = [1]\n") != "");
  CHECK(error_of("kind = \"nope\"\nsnr_db = [0]\n") != "");
  CHECK(error_of("kind = \"frequency\"\nsnr_db = [0]\noutputs = [\"zzb\"]\n") != "");
  CHECK(error_of("kind = \"frequency\"\nsnr_db = [0]\n[bogus]\nx = 1\n") != "");
  CHECK(error_of("kind = \"bayesian-ula\"\nsnr_db = [0]\n[model]\nprior_a = 2\n") != "");
  CHECK(error_of("kind = \"frequency\"\nsnr_db = [0]\n[montecarlo]\nruns = 1\n") != "");
  CHECK(error_of("kind = \"doa3d-azimuth\"\nsnr_db = [0]\noutputs = [\"hcrb\"]\n[model]\nnuisance = true\n") != "");
  CHECK(error_of("kind = \"frequency\"\nsnr_db = [0\n") != "");
}

TEST_CASE("noise levels sort by ascending SNR") {
  const ScenarioConfig c = parse("kind = \"custom\"\nsigma2 = [0.1, 10, 1]\n");
  const auto s = c.snr_values();
  REQUIRE(s.size() == 3);
  CHECK(s[0] < s[1]);
  CHECK(s[1] < s[2]);
  CHECK(c.noise_variances()[0] == doctest::Approx(10.0));
  const ScenarioConfig d = parse("kind = \"frequency\"\nsnr_db = [20, -10, 0]\n[model]\namplitude = 2\n");
  CHECK(d.noise_variances()[0] == doctest::Approx(40.0));
}

TEST_CASE("describe echoes resolved settings") {
  const std::string s = describe(parse("kind = \"frequency\"\nsnr_db = [0]\n"));
  CHECK(s.find("kind = frequency") != std::string::npos);
  CHECK(s.find("quadrature.abs_tol") != std::string::npos);
  CHECK(s.find("montecarlo.seed = 1") != std::string::npos);
}

TEST_CASE("built-in scenario files validate") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(MSEPRED_CONFIG_DIR)) {
    if (entry.path().extension() != ".toml") continue;
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++count;
  }
  CHECK(count >= 8);
}

TEST_CASE("CSV format and round trip") {
  Table t{{"snr_db", "mse"}, {{-10.0, 0.5}, {3.0, 1.25e-7}}};
  const std::string text = format_csv(t);
  CHECK(text == "snr_db,mse\n-1.0000000000e+01,5.0000000000e-01\n3.0000000000e+00,1.2500000000e-07\n");
  std::istringstream in(text);
  const Table back = parse_csv(in);
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  CHECK(format_csv(back) == text);
  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(parse_csv(ragged), DomainError);
  std::istringstream text_cell("a\nx\n");
  CHECK_THROWS_AS(parse_csv(text_cell), DomainError);
  CHECK(back.at(1, "mse") == 1.25e-7);
  CHECK_THROWS_AS(back.column("nope"), DomainError);
}

TEST_CASE("predict on the identity model") {
  const ScenarioConfig c = parse(
      "kind = \"custom\"\nsigma2 = [10, 0.1, 1]\n[model]\ncustom_model = \"identity\"\n"
      "[quadrature]\nabs_tol = 1e-12\nrel_tol = 1e-10\n");
  const Table t = run_command(c, Command::kPredict);
  CHECK(t.columns == std::vector<std::string>{"snr_db", "sigma2", "mse_pred"});
  REQUIRE(t.rows.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(t.at(r, "mse_pred") == doctest::Approx(t.at(r, "sigma2") / 2.0).epsilon(1e-8));
    if (r > 0) CHECK(t.at(r, "snr_db") > t.at(r - 1, "snr_db"));
  }
  // round trip through text
  std::istringstream in(format_csv(t));
  CHECK(format_csv(parse_csv(in)) == format_csv(t));
}

TEST_CASE("columns follow the requested outputs") {
  const ScenarioConfig c = parse(
      "kind = \"doa3d-azimuth\"\nsnr_db = [20]\noutputs = [\"prediction\", \"crlb\", \"montecarlo\"]\n"
      "[montecarlo]\nruns = 50\n");
  const Table b = run_command(c, Command::kBounds);
  CHECK(b.columns == std::vector<std::string>{"snr_db", "sigma2", "crlb", "crlb_rmse_deg"});
  const Table s = run_command(c, Command::kSweep);
  CHECK(s.has_column("mse_pred"));
  CHECK(s.has_column("mse_pred_rmse_deg"));
  CHECK(s.has_column("mc_mse"));
  CHECK(s.has_column("mc_stderr"));
  CHECK(s.has_column("n_runs"));
  CHECK_FALSE(s.has_column("hcrb"));
  CHECK(s.at(0, "crlb_rmse_deg") == doctest::Approx(std::sqrt(s.at(0, "crlb")) * 180.0 / 3.14159265358979323846));
  for (double v : s.rows[0]) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("montecarlo command is reproducible") {
  const ScenarioConfig c = parse(
      "kind = \"esprit-ula\"\nsnr_db = [0, 10]\n[montecarlo]\nruns = 300\nseed = 5\n");
  const std::string a = format_csv(run_command(c, Command::kMonteCarlo));
  ScenarioConfig threaded = c;
  threaded.threads = 4;
  CHECK(format_csv(run_command(threaded, Command::kMonteCarlo)) == a);
  ScenarioConfig other = c;
  other.seed = 6;
  CHECK(format_csv(run_command(other, Command::kMonteCarlo)) != a);
}
