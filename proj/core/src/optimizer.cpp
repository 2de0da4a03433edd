// SPDX-License-Identifier: Apache-2.0
#include "murelay/optimizer.hpp"

#include <cmath>
#include <utility>

#include "linalg_detail.hpp"
#include "murelay/metrics.hpp"
#include "murelay/precoder.hpp"
#include "murelay/relay.hpp"

namespace murelay {

namespace {

CMat scaled_identity(Eigen::Index n, double scale) {
  return scale * CMat::Identity(n, n);
}

ChannelSet zero_direct_links(const ChannelSet& channels) {
  ChannelSet copy = channels;
  copy.h_d1.setZero();
  copy.h_d2.setZero();
  return copy;
}

double objective_of(const ChannelSet& channels, const NetworkConfig& config,
                    const CMat& f1, const CMat& f2, const CMat& g) {
  if (config.mode == Mode::kCapacity) return sum_capacity(channels, f1, f2, g);
  return sum_mse(effective_model(channels, g), f1, f2);
}

bool improves(Mode mode, double candidate, double incumbent) {
  return mode == Mode::kCapacity ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

CMat nas_relay_matrix(const ChannelSet& channels, const CMat& f1, const CMat& f2,
                      double p_r) {
  const Eigen::Index n_r = channels.h_r1.rows();
  const double burden = static_cast<double>(n_r) +
                        (channels.h_r1 * f1).squaredNorm() +
                        (channels.h_r2 * f2).squaredNorm();
  return scaled_identity(n_r, std::sqrt(p_r / burden));
}

Design jds_optimize(const ChannelSet& channels, const NetworkConfig& config) {
  config.validate();
  const Eigen::Index n_s = config.n_s;
  const Eigen::Index n_d = config.n_d;
  const Policy policy =
      config.mode == Mode::kCapacity ? Policy::kWaterFill : Policy::kInverseWaterFill;

  Design design;
  design.scheme = Scheme::kJds;
  design.mode = config.mode;

  // Scaled-identity initialization, the same design the NAS baseline uses.
  const CMat f1_init = scaled_identity(n_s, std::sqrt(config.p1 / config.n_s));
  const CMat f2_init = scaled_identity(n_s, std::sqrt(config.p2 / config.n_s));
  CMat g = nas_relay_matrix(channels, f1_init, f2_init, config.p_r);

  double best_obj = objective_of(channels, config, f1_init, f2_init, g);
  design.f1 = f1_init;
  design.f2 = f2_init;
  design.g = g;
  design.objective_trace.push_back(best_obj);

  double prev_obj = best_obj;
  for (int sweep = 1; sweep <= config.outer_max_iters; ++sweep) {
    const EffectiveModel eff = effective_model(channels, g);

    CMat r_z1 = CMat::Identity(2 * n_d, 2 * n_d);
    r_z1.bottomRightCorner(n_d, n_d) = eff.r;
    const CMat f1 = source_precoder(whitened_gram(eff.h1, r_z1), config.p1, policy);

    const CMat r_z2 = r_z1 + detail::gram(eff.h1 * f1);
    const CMat f2 = source_precoder(whitened_gram(eff.h2, r_z2), config.p2, policy);

    const RelayGeometry geo = relay_geometry(channels, f1, f2);
    const RelayDesign rd = solve_relay(geo, config.p_r, config.mode,
                                       config.inner_tol, config.inner_max_iters);
    g = rd.g;

    design.inner_converged_all &= rd.inner_converged;
    design.alpha_in_unit_interval &=
        rd.alpha_min >= 0.0 && rd.alpha_max <= 1.0;

    const double obj = objective_of(channels, config, f1, f2, g);
    design.objective_trace.push_back(obj);
    design.outer_iters = sweep;

    // Ties update too, so a fixed point replaces the initialization.
    if (!improves(config.mode, best_obj, obj)) {
      best_obj = obj;
      design.f1 = f1;
      design.f2 = f2;
      design.g = g;
      design.alpha_final = rd.alpha;
      design.power_residual = rd.power_residual;
    }

    if (std::abs(obj - prev_obj) <= config.outer_tol * (1.0 + std::abs(prev_obj))) {
      design.converged = true;
      break;
    }
    if (improves(config.mode, prev_obj, obj)) {
      // The sweep went backwards by more than the termination tolerance.
      // The precoder steps can overdraw the relay budget, which the relay
      // step then claws back; keep the best design found and stop here.
      ++design.worsening_sweeps;
      design.converged = true;
      break;
    }
    prev_obj = obj;
  }
  return design;
}

Design baseline_design(const ChannelSet& channels, const NetworkConfig& config,
                       Scheme scheme) {
  config.validate();
  if (scheme == Scheme::kNas) {
    Design design;
    design.scheme = Scheme::kNas;
    design.mode = config.mode;
    design.f1 = scaled_identity(config.n_s, std::sqrt(config.p1 / config.n_s));
    design.f2 = scaled_identity(config.n_s, std::sqrt(config.p2 / config.n_s));
    design.g = nas_relay_matrix(channels, design.f1, design.f2, config.p_r);
    design.objective_trace.push_back(
        objective_of(channels, config, design.f1, design.f2, design.g));
    design.converged = true;
    return design;
  }
  if (scheme != Scheme::kSos && scheme != Scheme::kNod)
    throw ConfigError("baseline_design: scheme must be NAS, SOS, or NOD");

  // SOS/NOD: design as if the direct links did not exist.
  Design design = jds_optimize(zero_direct_links(channels), config);
  design.scheme = scheme;
  return design;
}

Evaluation evaluate_design(const ChannelSet& channels, const Design& design) {
  auto evaluate = [&](const ChannelSet& ch) {
    Evaluation ev;
    ev.capacity_bits = sum_capacity(ch, design.f1, design.f2, design.g);
    ev.sum_mse = sum_mse(effective_model(ch, design.g), design.f1, design.f2);
    return ev;
  };
  if (design.scheme == Scheme::kNod) return evaluate(zero_direct_links(channels));
  return evaluate(channels);
}

}  // namespace murelay
