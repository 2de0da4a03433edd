// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "murelay/types.hpp"

namespace murelay {

/// Eigendecomposition of a whitened-channel Gram matrix H' R_z^{-1} H:
/// unitary u and nonnegative eigenvalues sorted descending.
struct EigenBasis {
  CMat u;
  RVec lambda;
};

/// Per-eigenmode transmit powers with the water level that produced them.
struct PowerLoad {
  RVec sigma_sq;
  double mu = 0.0;
  Policy policy = Policy::kWaterFill;
};

/// Gram eigenbasis of H' R_z^{-1} H (Hermitian PSD by construction).
/// Eigenvalues in [-1e-10, 0) are roundoff and get clamped to zero.
EigenBasis whitened_gram(const CMat& h, const CMat& r_z);

/// Capacity-optimal loading: sigma_sq[k] = max(0, mu - 1/lambda[k]) with mu
/// chosen so the powers sum to p. Exact active-set solve, no tolerance.
/// Throws NoUsableEigenmode if every lambda is zero while p > 0.
PowerLoad water_fill(const RVec& lambda, double p);

/// MSE-optimal loading: sigma_sq[k] = max(0, mu/sqrt(lambda[k]) - 1/lambda[k]).
/// Same active-set machinery and error behavior as water_fill.
PowerLoad inverse_water_fill(const RVec& lambda, double p);

/// Source precoder F = U diag(sqrt(sigma_sq)) for the given budget and
/// policy; tr(F F') = p whenever a usable eigenmode exists.
CMat source_precoder(const EigenBasis& basis, double p, Policy policy);

}  // namespace murelay
