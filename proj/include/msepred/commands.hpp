#pragma once

#include "msepred/config.hpp"
#include "msepred/csv.hpp"

namespace msepred {

enum class Command { kPredict, kBounds, kMonteCarlo, kSweep };

/// One row per SNR (ascending). Columns: snr_db, sigma2, then the requested
/// prediction, bound and Monte Carlo columns for the command. DOA kinds add a
/// `<column>_rmse_deg` companion for every MSE-valued column.
Table run_command(const ScenarioConfig& config, Command command);

}  // namespace msepred
