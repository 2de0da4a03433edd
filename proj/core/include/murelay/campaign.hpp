// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <utility>
#include <vector>

#include "murelay/model.hpp"
#include "murelay/optimizer.hpp"
#include "murelay/types.hpp"

namespace murelay {

/// Per-realization outcome for one scheme.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  Scheme scheme = Scheme::kJds;
  double capacity_bits = 0.0;
  double sum_mse = 0.0;
  int outer_iters = 0;
  bool converged = true;
  double alpha_final = 0.0;
  double power_residual = 0.0;
};

enum class SweepKind { kNone, kPowerDb, kLsr };

struct SweepSpec {
  SweepKind kind = SweepKind::kNone;
  std::vector<double> values;  ///< ignored for kNone
};

/// Ensemble statistics for one (scheme, sweep point) cell. capacity_sorted
/// is the ECDF sample vector; records preserve per-trial pairing across
/// schemes (all schemes in a trial see the same ChannelSet).
struct CellStats {
  double mean_capacity = 0.0;
  double stderr_capacity = 0.0;
  double mean_mse = 0.0;
  double stderr_mse = 0.0;
  std::vector<double> capacity_sorted;
  std::vector<TrialRecord> records;
};

struct CampaignResult {
  NetworkConfig base_config;
  SweepSpec sweep;
  std::vector<Scheme> schemes;
  int trials = 0;
  std::vector<double> sweep_points;            ///< one entry even for kNone
  std::vector<std::vector<CellStats>> cells;   ///< [point][scheme]
};

/// Called after each completed (point, trial) task with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs trials for every (sweep point, scheme) pair, optionally across a
/// worker pool (threads = 0 picks the hardware count). Deterministic given
/// config.seed regardless of thread count or execution order.
/// Throws ConfigError on an invalid sweep range or trials < 1.
CampaignResult run_campaign(const NetworkConfig& config,
                            const std::vector<Scheme>& schemes,
                            const SweepSpec& sweep, int trials, int threads = 0,
                            const ProgressFn& progress = {});

/// Empirical CDF: sorted sample values with step heights k/n, last = 1.
/// Throws ConfigError on empty input.
std::vector<std::pair<double, double>> ecdf(std::vector<double> samples);

/// Writes the campaign CSVs and the campaign.json manifest into out_dir
/// (created if missing). Formatting is locale-independent shortest
/// round-trip, UTF-8, '\n' line endings; identical campaigns produce
/// byte-identical files. Returns the paths written.
std::vector<std::filesystem::path> write_results(const CampaignResult& result,
                                                 const std::filesystem::path& out_dir);

}  // namespace murelay
