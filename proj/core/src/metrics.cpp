// SPDX-License-Identifier: Apache-2.0
#include "murelay/metrics.hpp"

#include "block_gram.hpp"
#include "linalg_detail.hpp"

namespace murelay {

using detail::gram;
using detail::hermitianize;
using detail::llt_hpd;
using detail::log2det_hpd;

SicContext sic_context(const EffectiveModel& eff, const CMat& f1) {
  const Eigen::Index n_d = eff.r.rows();
  SicContext ctx;
  ctx.r_z1 = CMat::Identity(2 * n_d, 2 * n_d);
  ctx.r_z1.bottomRightCorner(n_d, n_d) = eff.r;
  ctx.r_z2 = ctx.r_z1 + gram(eff.h1 * f1);
  return ctx;
}

namespace {

// I + F' H' R_z^{-1} H F, the common core of the MSE matrix and the
// per-source capacity. Solves against R_z, never inverts it.
CMat whitened_identity_plus(const CMat& h, const CMat& f, const CMat& r_z) {
  const CMat hf = h * f;
  const auto llt = llt_hpd(r_z, "interference-plus-noise covariance singular");
  return hermitianize(CMat::Identity(f.cols(), f.cols()) + hf.adjoint() * llt.solve(hf));
}

}  // namespace

CMat mse_matrix(const CMat& h, const CMat& f, const CMat& r_z) {
  const CMat w = whitened_identity_plus(h, f, r_z);
  const auto llt = llt_hpd(w, "whitened Gram not positive definite");
  return hermitianize(llt.solve(CMat::Identity(w.rows(), w.cols())));
}

double per_source_capacity(const CMat& h, const CMat& f, const CMat& r_z) {
  const CMat w = whitened_identity_plus(h, f, r_z);
  return detail::clamp_capacity(log2det_hpd(w, "whitened Gram not positive definite"));
}

double sum_capacity(const ChannelSet& channels, const CMat& f1, const CMat& f2,
                    const CMat& g) {
  const auto bg = detail::block_gram(channels, f1, f2);
  const Eigen::Index n_d = channels.h_dr.rows();

  const CMat relay_path = channels.h_dr * g;
  const CMat r = CMat::Identity(n_d, n_d) + gram(relay_path);
  const CMat relayed = hermitianize(relay_path * bg.k * relay_path.adjoint()) + r;

  const double c = log2det_hpd(bg.t, "direct-link Gram") +
                   log2det_hpd(relayed, "relayed-signal covariance") -
                   log2det_hpd(r, "phase-2 noise covariance");
  return detail::clamp_capacity(c);
}

double sum_mse(const EffectiveModel& eff, const CMat& f1, const CMat& f2) {
  const SicContext ctx = sic_context(eff, f1);
  const CMat e1 = mse_matrix(eff.h1, f1, ctx.r_z1);
  const CMat e2 = mse_matrix(eff.h2, f2, ctx.r_z2);
  return e1.trace().real() + e2.trace().real();
}

}  // namespace murelay
