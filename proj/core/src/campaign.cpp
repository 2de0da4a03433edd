// SPDX-License-Identifier: Apache-2.0
#include "murelay/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <thread>

#ifndef MURELAY_GIT_DESCRIBE
#define MURELAY_GIT_DESCRIBE "unknown"
#endif

namespace murelay {

namespace {

// Shortest round-trip formatting; locale-independent, so outputs are
// byte-stable across runs and machines.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr ms;
  const std::size_t n = xs.size();
  if (n == 0) return ms;
  ms.mean = pairwise_sum(xs.data(), n) / static_cast<double>(n);
  if (n < 2) return ms;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (xs[i] - ms.mean) * (xs[i] - ms.mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  ms.stderr_of_mean = std::sqrt(var / static_cast<double>(n));
  return ms;
}

NetworkConfig config_at(const NetworkConfig& base, SweepKind kind, double value) {
  NetworkConfig cfg = base;
  switch (kind) {
    case SweepKind::kNone:
      break;
    case SweepKind::kPowerDb: {
      const double p = std::pow(10.0, value / 10.0);
      cfg.p1 = cfg.p2 = cfg.p_r = p;
      break;
    }
    case SweepKind::kLsr: {
      const double l_sd = base.l_sd();
      cfg.l_sr = value;
      cfg.l_rd = l_sd - value;
      break;
    }
  }
  return cfg;
}

void validate_sweep(const NetworkConfig& config, const SweepSpec& sweep) {
  switch (sweep.kind) {
    case SweepKind::kNone:
      if (!sweep.values.empty())
        throw ConfigError("sweep 'none' takes no sweep values");
      return;
    case SweepKind::kPowerDb:
      if (sweep.values.empty()) throw ConfigError("power sweep needs values");
      for (double v : sweep.values)
        if (!std::isfinite(v)) throw ConfigError("power sweep values must be finite");
      return;
    case SweepKind::kLsr: {
      if (sweep.values.empty()) throw ConfigError("l_sr sweep needs values");
      const double l_sd = config.l_sd();
      for (double v : sweep.values)
        if (!(v > 0.0) || !(v < l_sd))
          throw ConfigError("l_sr sweep values must lie strictly inside (0, l_sd)");
      return;
    }
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

CampaignResult run_campaign(const NetworkConfig& config,
                            const std::vector<Scheme>& schemes,
                            const SweepSpec& sweep, int trials, int threads,
                            const ProgressFn& progress) {
  config.validate();
  if (trials < 1) throw ConfigError("run_campaign: trials must be >= 1");
  validate_sweep(config, sweep);

  CampaignResult result;
  result.base_config = config;
  result.sweep = sweep;
  result.schemes = schemes;
  result.trials = trials;
  if (sweep.kind == SweepKind::kNone) {
    result.sweep_points = {config.p1 > 0.0 ? 10.0 * std::log10(config.p1) : 0.0};
  } else {
    result.sweep_points = sweep.values;
  }

  const std::size_t n_points = result.sweep_points.size();
  const std::size_t n_schemes = schemes.size();
  result.cells.assign(n_points, std::vector<CellStats>(n_schemes));
  for (auto& point : result.cells)
    for (auto& cell : point) cell.records.resize(static_cast<std::size_t>(trials));
  if (n_schemes == 0) return result;

  const std::size_t total = n_points * static_cast<std::size_t>(trials);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      try {
        const std::size_t point = task / static_cast<std::size_t>(trials);
        const std::uint64_t trial = task % static_cast<std::size_t>(trials);
        const NetworkConfig cfg =
            config_at(config, sweep.kind, result.sweep_points[point]);
        const ChannelSet channels = generate_channels(cfg, trial);
        for (std::size_t s = 0; s < n_schemes; ++s) {
          const Design design = schemes[s] == Scheme::kJds
                                    ? jds_optimize(channels, cfg)
                                    : baseline_design(channels, cfg, schemes[s]);
          const Evaluation ev = evaluate_design(channels, design);
          TrialRecord& rec = result.cells[point][s].records[trial];
          rec.trial_index = trial;
          rec.scheme = schemes[s];
          rec.capacity_bits = ev.capacity_bits;
          rec.sum_mse = ev.sum_mse;
          rec.outer_iters = design.outer_iters;
          rec.converged = design.converged;
          rec.alpha_final = design.alpha_final;
          rec.power_residual = design.power_residual;
        }
        if (progress) {
          const std::size_t finished = done.fetch_add(1) + 1;
          std::lock_guard<std::mutex> lock(progress_mutex);
          progress(finished, total);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(total);  // stop handing out tasks
        return;
      }
    }
  };

  std::size_t n_threads = threads > 0
                              ? static_cast<std::size_t>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, total);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  // Aggregation runs in fixed trial order, so the statistics do not depend
  // on how tasks were scheduled.
  for (auto& point : result.cells) {
    for (auto& cell : point) {
      std::vector<double> caps(cell.records.size()), mses(cell.records.size());
      for (std::size_t i = 0; i < cell.records.size(); ++i) {
        caps[i] = cell.records[i].capacity_bits;
        mses[i] = cell.records[i].sum_mse;
      }
      const auto cap_stats = mean_stderr(caps);
      const auto mse_stats = mean_stderr(mses);
      cell.mean_capacity = cap_stats.mean;
      cell.stderr_capacity = cap_stats.stderr_of_mean;
      cell.mean_mse = mse_stats.mean;
      cell.stderr_mse = mse_stats.stderr_of_mean;
      std::sort(caps.begin(), caps.end());
      cell.capacity_sorted = std::move(caps);
    }
  }
  return result;
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("ecdf: empty sample set");
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> table(samples.size());
  const double n = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k)
    table[k] = {samples[k], static_cast<double>(k + 1) / n};
  return table;
}

std::vector<std::filesystem::path> write_results(const CampaignResult& result,
                                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + out_dir.string() +
                             ": " + ec.message());

  std::vector<std::filesystem::path> written;

  const char* sweep_name = result.sweep.kind == SweepKind::kPowerDb ? "power_db"
                           : result.sweep.kind == SweepKind::kLsr   ? "lsr"
                                                                    : "none";
  nlohmann::json manifest;
  manifest["config"] = {
      {"n_s", result.base_config.n_s},
      {"n_r", result.base_config.n_r},
      {"n_d", result.base_config.n_d},
      {"p1", result.base_config.p1},
      {"p2", result.base_config.p2},
      {"p_r", result.base_config.p_r},
      {"l_sr", result.base_config.l_sr},
      {"l_rd", result.base_config.l_rd},
      {"l_sd", result.base_config.l_sd()},
      {"tau", result.base_config.tau},
      {"mode", to_string(result.base_config.mode)},
      {"outer_max_iters", result.base_config.outer_max_iters},
      {"inner_max_iters", result.base_config.inner_max_iters},
      {"outer_tol", result.base_config.outer_tol},
      {"inner_tol", result.base_config.inner_tol},
      {"seed", result.base_config.seed},
  };
  {
    auto names = nlohmann::json::array();
    for (Scheme s : result.schemes) names.push_back(to_string(s));
    manifest["schemes"] = names;
  }
  manifest["sweep"] = {{"kind", sweep_name}, {"values", result.sweep.values}};
  manifest["trials"] = result.trials;
  manifest["git_describe"] = MURELAY_GIT_DESCRIBE;

  {
    const auto path = out_dir / "campaign.json";
    auto out = open_output(path);
    out << manifest.dump(2) << '\n';
    finish_output(out, path);
    written.push_back(path);
  }
  if (result.schemes.empty()) return written;

  const bool power_axis = result.sweep.kind != SweepKind::kLsr;
  const char* axis = power_axis ? "power_db" : "lsr";

  {
    const auto path =
        out_dir / (power_axis ? "capacity_vs_power.csv" : "capacity_vs_lsr.csv");
    auto out = open_output(path);
    out << axis << ",scheme,ergodic_capacity,stderr,trials\n";
    for (std::size_t p = 0; p < result.sweep_points.size(); ++p)
      for (std::size_t s = 0; s < result.schemes.size(); ++s) {
        const CellStats& cell = result.cells[p][s];
        out << format_double(result.sweep_points[p]) << ','
            << to_string(result.schemes[s]) << ',' << format_double(cell.mean_capacity)
            << ',' << format_double(cell.stderr_capacity) << ',' << result.trials
            << '\n';
      }
    finish_output(out, path);
    written.push_back(path);
  }
  {
    const auto path = out_dir / (power_axis ? "mse_vs_power.csv" : "mse_vs_lsr.csv");
    auto out = open_output(path);
    out << axis << ",scheme,sum_mse,stderr,trials\n";
    for (std::size_t p = 0; p < result.sweep_points.size(); ++p)
      for (std::size_t s = 0; s < result.schemes.size(); ++s) {
        const CellStats& cell = result.cells[p][s];
        out << format_double(result.sweep_points[p]) << ','
            << to_string(result.schemes[s]) << ',' << format_double(cell.mean_mse)
            << ',' << format_double(cell.stderr_mse) << ',' << result.trials << '\n';
      }
    finish_output(out, path);
    written.push_back(path);
  }

  if (power_axis) {
    for (std::size_t p = 0; p < result.sweep_points.size(); ++p) {
      const auto path =
          out_dir / ("cdf_" + format_double(result.sweep_points[p]) + ".csv");
      auto out = open_output(path);
      out << "capacity,cdf,scheme\n";
      for (std::size_t s = 0; s < result.schemes.size(); ++s) {
        const auto table = ecdf(result.cells[p][s].capacity_sorted);
        for (const auto& [value, prob] : table)
          out << format_double(value) << ',' << format_double(prob) << ','
              << to_string(result.schemes[s]) << '\n';
      }
      finish_output(out, path);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace murelay
