// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Cholesky>
#include <cmath>

#include "murelay/types.hpp"

namespace murelay::detail {

/// a * a' computed through a rank update so the result is exactly Hermitian.
inline CMat gram(const CMat& a) {
  CMat m = CMat::Zero(a.rows(), a.rows());
  m.selfadjointView<Eigen::Lower>().rankUpdate(a);
  return CMat(m.selfadjointView<Eigen::Lower>());
}

inline CMat hermitianize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

inline Eigen::LLT<CMat> llt_hpd(const CMat& m, const char* what) {
  Eigen::LLT<CMat> llt(m);
  if (llt.info() != Eigen::Success) throw IllConditionedNoiseCovariance(what);
  return llt;
}

/// log2 det of a Hermitian positive definite matrix via Cholesky pivots;
/// never forms the raw determinant, so large budgets cannot overflow it.
inline double log2det_hpd(const CMat& m, const char* what) {
  const auto llt = llt_hpd(m, what);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    acc += std::log2(llt.matrixLLT()(i, i).real());
  return 2.0 * acc;
}

/// Capacities may come out a hair negative from rounding; anything in
/// [-1e-10, 0) is clamped to zero, true negatives are left to fail tests.
inline double clamp_capacity(double c) noexcept {
  return (c < 0.0 && c >= -1e-10) ? 0.0 : c;
}

}  // namespace murelay::detail
