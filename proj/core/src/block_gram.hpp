// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "linalg_detail.hpp"
#include "murelay/model.hpp"

namespace murelay::detail {

/// The Gram pieces of the block determinant expansion, shared by the sum
/// capacity and the relay geometry:
///   t        = I + sum_i H_di P_i H_di'
///   gram_sr  = sum_i H_ri P_i H_ri'
///   k_tilde  = cross t^{-1} cross',  cross = sum_i H_ri P_i H_di'
///   k        = gram_sr - k_tilde
struct BlockGram {
  CMat t;
  CMat k;
  CMat k_tilde;
  CMat gram_sr;
};

inline BlockGram block_gram(const ChannelSet& ch, const CMat& f1, const CMat& f2) {
  const CMat d1 = ch.h_d1 * f1, d2 = ch.h_d2 * f2;
  const CMat r1 = ch.h_r1 * f1, r2 = ch.h_r2 * f2;

  BlockGram bg;
  bg.t = CMat::Identity(ch.h_d1.rows(), ch.h_d1.rows()) + gram(d1) + gram(d2);
  bg.gram_sr = gram(r1) + gram(r2);

  const CMat cross = r1 * d1.adjoint() + r2 * d2.adjoint();
  const auto llt_t = llt_hpd(bg.t, "direct-link Gram matrix not positive definite");
  bg.k_tilde = hermitianize(cross * llt_t.solve(cross.adjoint()));
  bg.k = hermitianize(bg.gram_sr - bg.k_tilde);
  return bg;
}

}  // namespace murelay::detail
