// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "murelay/model.hpp"
#include "murelay/types.hpp"

namespace murelay {

/// Decompositions the relay design is built from, for fixed precoders.
///   t       = I + sum_i H_di P_i H_di'          (direct-link Gram, t >= I)
///   k       = sum_i H_ri P_i H_ri' - k_tilde    (Schur complement, PSD)
///   k_tilde = (sum_i H_ri P_i H_di') t^{-1} (sum_i H_di P_i H_ri')
///   kappa   = tr(k_tilde)
/// k = u_k diag(lambda_k) u_k' and h_dr = u_h diag(theta) v_h', both with
/// descending diagonals; theta is padded with zeros when n_d < n_r.
struct RelayGeometry {
  CMat t;
  CMat k;
  CMat k_tilde;
  double kappa = 0.0;
  CMat u_k;
  RVec lambda_k;
  CMat u_h;
  CMat v_h;
  RVec theta;
};

/// Per-mode relay gains plus the water level that produced them (the MSE
/// allocation has no water level; it leaves mu at 0).
struct RelayAllocation {
  RVec xi;
  double mu = 0.0;
  /// True when no mode can carry information (every lambda_k * theta product
  /// is zero, or the budget is zero); xi is all-zero and G will be 0.
  bool relay_useless = false;
};

/// The assembled relay matrix and the diagnostics of the run that built it.
struct RelayDesign {
  CMat g;                  ///< final relay matrix, true power constraint enforced
  RVec xi;                 ///< per-mode gains before the final rescale
  double alpha = 0.0;      ///< last measured trace-coupling ratio, in [0, 1]
  double alpha_min = 0.0;  ///< range of alpha over the inner iterates
  double alpha_max = 0.0;
  double used_power = 0.0;      ///< tr{G (I + sum H_ri P_i H_ri') G'} after rescale
  double rescale = 1.0;         ///< uniform gain applied to meet the true budget (<= 1)
  double power_residual = 0.0;  ///< |modified-constraint power - true power| pre-rescale
  int inner_iters = 0;
  bool inner_converged = true;  ///< false = "inner loop maxed out" (not fatal)
  bool relay_useless = false;
};

RelayGeometry relay_geometry(const ChannelSet& channels, const CMat& f1, const CMat& f2);

/// Trace-coupling ratio alpha = tr(k_tilde g' g) / (tr(k_tilde) tr(g' g)), in [0,1]
/// for PSD k_tilde. Returns 0 when tr(k_tilde) = 0 or g = 0 so the modified
/// power constraint degenerates to the plain one.
double alpha_of(const CMat& k_tilde, const CMat& g);

/// Closed-form capacity-maximizing gains under the modified budget
/// sum (lambda_i + 1 + alpha*kappa) xi_i = p_r; the water level mu is found
/// by bisection on the monotone budget. Modes with lambda_i = 0 or
/// theta_i = 0 are forced to zero.
RelayAllocation capacity_allocation(const RVec& lambda_k, const RVec& theta,
                                    double kappa, double alpha, double p_r);

/// MSE-based gains: minimizes the scalarized objective
///   Jt(xi) = (sum 1/(theta^2 (lambda+1) xi + 1)) * (sum theta^2 xi + 2)
/// over the modified budget by projected gradient descent with backtracking,
/// warm-started at xi_init (normally the capacity allocation). Guarantees
/// Jt(xi) <= Jt(xi_init) and stops at projected-gradient norm <= tol.
RelayAllocation mse_allocation(const RVec& lambda_k, const RVec& theta, double kappa,
                               double alpha, double p_r, const RVec& xi_init,
                               double tol = 1e-9, int max_iters = 5000);

/// The MSE surrogate objective Jt evaluated at xi (used by the allocation
/// and by its tests). Jt bounds the true total MSE only up to a scalar
/// factor; the factor cancels in the argmin and is never computed.
double mse_surrogate(const RVec& lambda_k, const RVec& theta, const RVec& xi);

/// Alternates {allocate xi given alpha; re-measure alpha from the assembled
/// G} until |alpha_{n+1} - alpha_n| <= inner_tol or inner_max_iters, then
/// assembles G = v_h diag(sqrt(xi)) u_k' and scales it down (never up) so
/// the true relay power constraint holds. With kappa = 0 the loop is skipped
/// entirely (the modified and true constraints coincide).
RelayDesign solve_relay(const RelayGeometry& geometry, double p_r, Mode mode,
                        double inner_tol = 1e-9, int inner_max_iters = 200);

}  // namespace murelay
