// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "murelay/types.hpp"

namespace murelay {

/// Static description of the two-source relay network and solver knobs.
/// Powers are linear-scale transmit budgets against unit-variance noise
/// (dB-to-linear conversion happens once, at the CLI boundary).
struct NetworkConfig {
  int n_s = 4;  ///< antennas per source node
  int n_r = 4;  ///< antennas at the relay node
  int n_d = 4;  ///< antennas at the destination node

  double p1 = 100.0;   ///< source 1 power budget, linear
  double p2 = 100.0;   ///< source 2 power budget, linear
  double p_r = 100.0;  ///< relay power budget, linear

  double l_sr = 5.0;  ///< source-to-relay distance
  double l_rd = 5.0;  ///< relay-to-destination distance
  double tau = 3.0;   ///< path loss exponent

  Mode mode = Mode::kCapacity;

  int outer_max_iters = 50;
  int inner_max_iters = 200;
  double outer_tol = 1e-4;
  double inner_tol = 1e-9;

  std::uint64_t seed = 1;

  /// Source-to-destination distance. Both sources share one position on the
  /// source--relay--destination line, so l_sd = l_sr + l_rd always.
  double l_sd() const noexcept { return l_sr + l_rd; }

  /// Throws ConfigError on nonpositive distances/tolerances/iteration caps,
  /// negative powers, or antenna counts < 1.
  void validate() const;
};

/// One fading realization of the five raw channel matrices.
struct ChannelSet {
  CMat h_r1;  ///< source 1 -> relay    (n_r x n_s)
  CMat h_r2;  ///< source 2 -> relay    (n_r x n_s)
  CMat h_d1;  ///< source 1 -> destination (n_d x n_s)
  CMat h_d2;  ///< source 2 -> destination (n_d x n_s)
  CMat h_dr;  ///< relay -> destination (n_d x n_r)
};

/// Two-phase receive model for a given relay matrix g: stacked effective
/// channels h_i = [h_di; h_dr g h_ri] and the phase-2 noise covariance
/// r = I + h_dr g g' h_dr' (phase-1 noise stays white).
struct EffectiveModel {
  CMat h1;  ///< (2 n_d x n_s)
  CMat h2;  ///< (2 n_d x n_s)
  CMat r;   ///< (n_d x n_d), Hermitian, r >= I
  CMat g;   ///< the relay matrix used to build the model (n_r x n_r)
};

/// Draws the ChannelSet for one Monte Carlo trial. Entries are i.i.d.
/// CN(0, 1/l^tau) with l the link distance (l_sd for the direct links).
/// Deterministic given (config.seed, trial_index); trials use independent
/// substreams, so generation order does not matter.
ChannelSet generate_channels(const NetworkConfig& config, std::uint64_t trial_index);

/// Builds the effective model of the two-phase protocol for relay matrix g.
/// Throws ConfigError on dimension mismatch.
EffectiveModel effective_model(const ChannelSet& channels, const CMat& g);

}  // namespace murelay
