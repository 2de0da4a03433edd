// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "murelay/model.hpp"
#include "murelay/types.hpp"

namespace murelay {

/// Effective interference-plus-noise covariances under the fixed MMSE-SIC
/// decoding order (source 2 first). r_z1 = diag(I, r) is pure noise; r_z2
/// adds the not-yet-cancelled source 1 signal.
struct SicContext {
  CMat r_z1;  ///< (2 n_d x 2 n_d)
  CMat r_z2;  ///< (2 n_d x 2 n_d)
};

SicContext sic_context(const EffectiveModel& eff, const CMat& f1);

/// MSE matrix E = (I + F' H' R_z^{-1} H F)^{-1} for one source; Hermitian
/// with eigenvalues in (0, 1]. h is that source's stacked effective channel
/// and r_z its interference-plus-noise covariance.
/// Throws IllConditionedNoiseCovariance if r_z is numerically singular.
CMat mse_matrix(const CMat& h, const CMat& f, const CMat& r_z);

/// Per-source capacity log2 |I + F' H' R_z^{-1} H F| in bits per channel
/// use (no two-phase 1/2 pre-factor). Equals log2 |E^{-1}|.
double per_source_capacity(const CMat& h, const CMat& f, const CMat& r_z);

/// Network sum capacity, computed in the block form
///   log2|T| + log2|H_dr G K G' H_dr' + R| - log2|R|,
/// which equals log2|H1 P1 H1' + H2 P2 H2' + H3 H3'| - log2|H3 H3'| and,
/// by the MMSE-SIC chain rule, C_1 + C_2.
double sum_capacity(const ChannelSet& channels, const CMat& f1, const CMat& f2,
                    const CMat& g);

/// Total MSE tr(E_1) + tr(E_2); in (0, 2 n_s].
double sum_mse(const EffectiveModel& eff, const CMat& f1, const CMat& f2);

}  // namespace murelay
