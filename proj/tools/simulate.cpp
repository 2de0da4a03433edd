// SPDX-License-Identifier: Apache-2.0
//
// Command-line Monte Carlo simulator: designs the transceivers per scheme on
// seeded fading realizations and writes the ergodic capacity / CDF / sum-MSE
// tables as CSV files plus a campaign.json run manifest.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "murelay/campaign.hpp"

namespace {

using namespace murelay;

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

std::vector<Scheme> parse_schemes(const std::string& text) {
  std::vector<Scheme> schemes;
  for (const auto& name : split_csv(text)) {
    if (name == "jds") schemes.push_back(Scheme::kJds);
    else if (name == "nas") schemes.push_back(Scheme::kNas);
    else if (name == "sos") schemes.push_back(Scheme::kSos);
    else if (name == "nod") schemes.push_back(Scheme::kNod);
    else if (!name.empty())
      throw ConfigError("unknown scheme '" + name + "' (expected jds,nas,sos,nod)");
  }
  return schemes;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_csv(text)) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ConfigError("bad sweep value '" + item + "'");
    values.push_back(v);
  }
  return values;
}

// A generic matplotlib script reading the CSVs this run produced.
void emit_plot_script(const std::filesystem::path& out_dir) {
  const auto path = out_dir / "plot_results.py";
  std::ofstream out(path, std::ios::binary);
  out << "#!/usr/bin/env python3\n"
         "\"\"\"Plot the CSV tables in this directory.\"\"\"\n"
         "import glob\n"
         "import os\n"
         "\n"
         "import matplotlib.pyplot as plt\n"
         "import pandas as pd\n"
         "\n"
         "here = os.path.dirname(os.path.abspath(__file__))\n"
         "\n"
         "def plot_curves(csv, x, y, title):\n"
         "    df = pd.read_csv(csv)\n"
         "    fig, ax = plt.subplots()\n"
         "    for scheme, group in df.groupby('scheme'):\n"
         "        ax.errorbar(group[x], group[y], yerr=group.get('stderr'),\n"
         "                    marker='o', label=scheme)\n"
         "    ax.set_xlabel(x); ax.set_ylabel(y); ax.set_title(title)\n"
         "    ax.grid(True); ax.legend()\n"
         "    fig.savefig(csv.replace('.csv', '.png'), dpi=150)\n"
         "\n"
         "for csv in glob.glob(os.path.join(here, '*_vs_*.csv')):\n"
         "    x = 'power_db' if 'power' in os.path.basename(csv) else 'lsr'\n"
         "    y = 'ergodic_capacity' if 'capacity' in os.path.basename(csv) else 'sum_mse'\n"
         "    plot_curves(csv, x, y, os.path.basename(csv))\n"
         "\n"
         "for csv in glob.glob(os.path.join(here, 'cdf_*.csv')):\n"
         "    df = pd.read_csv(csv)\n"
         "    fig, ax = plt.subplots()\n"
         "    for scheme, group in df.groupby('scheme'):\n"
         "        ax.step(group['capacity'], group['cdf'], where='post', label=scheme)\n"
         "    ax.set_xlabel('capacity (bits)'); ax.set_ylabel('CDF')\n"
         "    ax.set_title(os.path.basename(csv)); ax.grid(True); ax.legend()\n"
         "    fig.savefig(csv.replace('.csv', '.png'), dpi=150)\n";
}

int run_simulate(const NetworkConfig& base, const std::string& mode,
                 const std::string& schemes_text, const std::string& sweep_text,
                 std::string sweep_values_text, double p_db, int trials, int threads,
                 const std::string& out_dir, bool plot_script, bool quiet) {
  NetworkConfig config = base;
  config.mode = mode == "mse" ? Mode::kMse : Mode::kCapacity;
  config.p1 = config.p2 = config.p_r = std::pow(10.0, p_db / 10.0);

  SweepSpec sweep;
  if (sweep_text == "power") {
    sweep.kind = SweepKind::kPowerDb;
    if (sweep_values_text.empty()) sweep_values_text = "0,4,8,12,16,20,24,28";
  } else if (sweep_text == "lsr") {
    sweep.kind = SweepKind::kLsr;
    if (sweep_values_text.empty()) sweep_values_text = "2,3,4,5,6,7,8";
  } else if (sweep_text == "none") {
    sweep.kind = SweepKind::kNone;
  } else {
    throw ConfigError("unknown sweep '" + sweep_text + "' (expected power, lsr, none)");
  }
  if (sweep.kind != SweepKind::kNone) sweep.values = parse_values(sweep_values_text);

  const std::vector<Scheme> schemes = parse_schemes(schemes_text);

  std::size_t last_percent = static_cast<std::size_t>(-1);
  ProgressFn progress;
  if (!quiet) {
    progress = [&](std::size_t done, std::size_t total) {
      const std::size_t percent = done * 100 / total;
      if (percent != last_percent && (percent % 5 == 0 || done == total)) {
        last_percent = percent;
        std::fprintf(stderr, "[murelay] %zu/%zu trials (%zu%%)\n", done, total, percent);
      }
    };
  }

  const CampaignResult result =
      run_campaign(config, schemes, sweep, trials, threads, progress);
  const auto files = write_results(result, out_dir);
  if (plot_script) emit_plot_script(out_dir);
  if (!quiet) {
    for (const auto& f : files) std::fprintf(stderr, "[murelay] wrote %s\n", f.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-user MIMO amplify-and-forward relay designs with direct links:\n"
               "joint source/relay optimization and baselines, Monte Carlo evaluation."};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo campaign");

  NetworkConfig config;
  std::string mode = "capacity";
  std::string schemes = "jds,nas,sos,nod";
  std::string sweep = "none";
  std::string sweep_values;
  double p_db = 20.0;
  int trials = 500;
  int threads = 0;
  std::string out_dir = "out";
  bool plot_script = false;
  bool quiet = false;

  sim->add_option("--mode", mode, "design criterion: capacity or mse")
      ->check(CLI::IsMember({"capacity", "mse"}));
  sim->add_option("--schemes", schemes, "comma list from jds,nas,sos,nod");
  sim->add_option("--sweep", sweep, "sweep variable: power, lsr, or none")
      ->check(CLI::IsMember({"power", "lsr", "none"}));
  sim->add_option("--sweep-values", sweep_values,
                  "comma list of sweep points (dB for power, distance for lsr)");
  sim->add_option("--trials", trials, "Monte Carlo trials per sweep point")
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", config.seed, "RNG seed");
  sim->add_option("--ns", config.n_s, "antennas per source")->check(CLI::PositiveNumber);
  sim->add_option("--nr", config.n_r, "antennas at relay")->check(CLI::PositiveNumber);
  sim->add_option("--nd", config.n_d, "antennas at destination")->check(CLI::PositiveNumber);
  sim->add_option("--p-db", p_db, "per-node power budget in dB (when not sweeping power)");
  sim->add_option("--lsr", config.l_sr, "source-to-relay distance")->check(CLI::PositiveNumber);
  sim->add_option("--lrd", config.l_rd, "relay-to-destination distance")
      ->check(CLI::PositiveNumber);
  sim->add_option("--tau", config.tau, "path loss exponent")->check(CLI::PositiveNumber);
  sim->add_option("--outer-max-iters", config.outer_max_iters, "outer sweep cap")
      ->check(CLI::PositiveNumber);
  sim->add_option("--inner-max-iters", config.inner_max_iters, "relay inner loop cap")
      ->check(CLI::PositiveNumber);
  sim->add_option("--outer-tol", config.outer_tol, "outer relative tolerance");
  sim->add_option("--inner-tol", config.inner_tol, "inner (alpha) tolerance");
  sim->add_option("--threads", threads, "worker threads (0 = hardware)");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_flag("--emit-plot-script", plot_script, "also write plot_results.py");
  sim->add_flag("--quiet", quiet, "suppress progress logging");

  CLI11_PARSE(app, argc, argv);

  try {
    return run_simulate(config, mode, schemes, sweep, sweep_values, p_db, trials,
                        threads, out_dir, plot_script, quiet);
  } catch (const ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
