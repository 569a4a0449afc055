// msepred: predict, bound and simulate estimator MSE for configured scenarios.
//
//   msepred validate   --config FILE
//   msepred predict    --config FILE [--out FILE]
//   msepred bounds     --config FILE [--out FILE]
//   msepred montecarlo --config FILE [--out FILE] [--seed N] [--runs N] [--threads N]
//   msepred sweep      --config FILE [--out FILE] [...]
//   msepred list-scenarios
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 numerical convergence failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "msepred/commands.hpp"
#include "msepred/config.hpp"
#include "msepred/csv.hpp"
#include "msepred/error.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::optional<int> threads;
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
};

void add_common(CLI::App* sub, Overrides& o, bool montecarlo) {
  sub->add_option("-c,--config", o.config, "Scenario file")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--out", o.out, "CSV output path (default: stdout)");
  sub->add_option("--tol-abs", o.tol_abs, "Absolute quadrature tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol-rel", o.tol_rel, "Relative quadrature tolerance")
      ->check(CLI::PositiveNumber);
  if (montecarlo) {
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--runs", o.runs, "Monte Carlo runs per SNR")->check(CLI::Range(2, 1 << 30));
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024));
  }
}

msepred::ScenarioConfig load(const Overrides& o) {
  msepred::ScenarioConfig c = msepred::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.runs) c.runs = *o.runs;
  if (o.threads) c.threads = *o.threads;
  if (o.tol_abs) {
    c.quad.abs_tol = *o.tol_abs;
    c.quad_explicit = true;
  }
  if (o.tol_rel) {
    c.quad.rel_tol = *o.tol_rel;
    c.quad_explicit = true;
  }
  return c;
}

void emit(const msepred::Table& table, const std::string& out) {
  if (out.empty()) {
    std::cout << msepred::format_csv(table);
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + out + "' for writing");
    msepred::write_csv(file, table);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict the MSE of implicitly defined estimators"};
  app.require_subcommand(1);

  Overrides o;
  auto* validate = app.add_subcommand("validate", "Check a scenario file and print resolved settings");
  validate->add_option("-c,--config", o.config, "Scenario file")->required()->check(CLI::ExistingFile);
  auto* predict = app.add_subcommand("predict", "Predicted MSE per SNR");
  add_common(predict, o, false);
  auto* bounds = app.add_subcommand("bounds", "Lower bounds per SNR");
  add_common(bounds, o, false);
  auto* montecarlo = app.add_subcommand("montecarlo", "Seeded Monte Carlo MSE per SNR");
  add_common(montecarlo, o, true);
  auto* sweep = app.add_subcommand("sweep", "Prediction, bounds and Monte Carlo per SNR");
  add_common(sweep, o, true);
  auto* list = app.add_subcommand("list-scenarios", "Scenario kinds and their outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& k : msepred::scenario_kinds()) {
        std::cout << k.kind << "\n  " << k.description << "\n  outputs:";
        for (const auto& out : k.outputs) std::cout << ' ' << out;
        std::cout << "\n";
      }
      return 0;
    }
    if (validate->parsed()) {
      std::cout << msepred::describe(load(o));
      return 0;
    }
    msepred::Command command = msepred::Command::kSweep;
    if (predict->parsed()) command = msepred::Command::kPredict;
    if (bounds->parsed()) command = msepred::Command::kBounds;
    if (montecarlo->parsed()) command = msepred::Command::kMonteCarlo;
    emit(msepred::run_command(load(o), command), o.out);
    return 0;
  } catch (const msepred::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const msepred::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
