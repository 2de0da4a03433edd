// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "murelay/model.hpp"
#include "murelay/types.hpp"

namespace murelay {

/// A complete transceiver design (F_1, F_2, G) with the run diagnostics of
/// the optimization that produced it.
struct Design {
  CMat f1;
  CMat f2;
  CMat g;
  std::vector<double> objective_trace;  ///< [0] = initialization, then one per sweep
  int outer_iters = 0;
  bool converged = false;  ///< terminated before the outer iteration cap
  Scheme scheme = Scheme::kJds;
  Mode mode = Mode::kCapacity;
  double alpha_final = 0.0;
  double power_residual = 0.0;
  int worsening_sweeps = 0;          ///< sweeps that made the objective worse
  bool inner_converged_all = true;   ///< no relay inner loop hit its cap
  bool alpha_in_unit_interval = true;
};

/// Nested alternating optimization: per sweep, F_1 against the current G,
/// F_2 against G and the new F_1, then G against (F_1, F_2); capacity mode
/// pairs water-filling with the closed-form relay allocation, MSE mode pairs
/// inverse water-filling with the numerical one. Initialization is the
/// scaled-identity relay matrix. If a sweep worsens the objective the
/// best-so-far design is kept and iteration stops.
Design jds_optimize(const ChannelSet& channels, const NetworkConfig& config);

/// The three comparison schemes. kNas is the fixed scaled-identity design.
/// kSos/kNod run jds_optimize on a copy of the channels with the direct
/// links zeroed; they differ only in how evaluate_design treats direct
/// links afterwards.
Design baseline_design(const ChannelSet& channels, const NetworkConfig& config,
                       Scheme scheme);

struct Evaluation {
  double capacity_bits = 0.0;
  double sum_mse = 0.0;
};

/// Evaluates a design on the given channels under the scheme's own
/// convention: kNod excludes the direct links, everything else includes them.
Evaluation evaluate_design(const ChannelSet& channels, const Design& design);

/// The scaled-identity relay matrix eta*I with
/// eta = sqrt(p_r / tr(I + sum H_ri F_i F_i' H_ri')).
CMat nas_relay_matrix(const ChannelSet& channels, const CMat& f1, const CMat& f2,
                      double p_r);

}  // namespace murelay
