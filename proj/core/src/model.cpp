// SPDX-License-Identifier: Apache-2.0
#include "murelay/model.hpp"

#include <cmath>
#include <string>

#include "linalg_detail.hpp"
#include "murelay/rng.hpp"

namespace murelay {

const char* to_string(Mode mode) noexcept {
  return mode == Mode::kCapacity ? "capacity" : "mse";
}

const char* to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::kJds: return "jds";
    case Scheme::kNas: return "nas";
    case Scheme::kSos: return "sos";
    case Scheme::kNod: return "nod";
  }
  return "?";
}

void NetworkConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("NetworkConfig: " + msg); };
  if (n_s < 1 || n_r < 1 || n_d < 1) fail("antenna counts must be >= 1");
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || !(p_r >= 0.0)) fail("powers must be nonnegative");
  if (!(l_sr > 0.0) || !(l_rd > 0.0)) fail("distances must be positive");
  if (!(tau > 0.0)) fail("path loss exponent must be positive");
  if (outer_max_iters < 1 || inner_max_iters < 1) fail("iteration caps must be >= 1");
  if (!(outer_tol > 0.0) || !(inner_tol > 0.0)) fail("tolerances must be positive");
}

namespace {

// Column-major fill, a fixed draw order per matrix.
void fill_gaussian(CMat& m, double variance, Xoshiro256pp& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      m(i, j) = rng.complex_gaussian(variance);
}

}  // namespace

ChannelSet generate_channels(const NetworkConfig& config, std::uint64_t trial_index) {
  const double v_sr = std::pow(config.l_sr, -config.tau);
  const double v_sd = std::pow(config.l_sd(), -config.tau);
  const double v_rd = std::pow(config.l_rd, -config.tau);

  Xoshiro256pp rng(config.seed, trial_index);

  ChannelSet ch;
  ch.h_r1.resize(config.n_r, config.n_s);
  ch.h_r2.resize(config.n_r, config.n_s);
  ch.h_d1.resize(config.n_d, config.n_s);
  ch.h_d2.resize(config.n_d, config.n_s);
  ch.h_dr.resize(config.n_d, config.n_r);

  fill_gaussian(ch.h_r1, v_sr, rng);
  fill_gaussian(ch.h_r2, v_sr, rng);
  fill_gaussian(ch.h_d1, v_sd, rng);
  fill_gaussian(ch.h_d2, v_sd, rng);
  fill_gaussian(ch.h_dr, v_rd, rng);
  return ch;
}

EffectiveModel effective_model(const ChannelSet& channels, const CMat& g) {
  const Eigen::Index n_r = channels.h_r1.rows();
  const Eigen::Index n_d = channels.h_d1.rows();
  const Eigen::Index n_s = channels.h_r1.cols();
  if (g.rows() != n_r || g.cols() != n_r)
    throw ConfigError("effective_model: relay matrix must be n_r x n_r");
  if (channels.h_dr.rows() != n_d || channels.h_dr.cols() != n_r ||
      channels.h_r2.rows() != n_r || channels.h_r2.cols() != n_s ||
      channels.h_d1.cols() != n_s || channels.h_d2.rows() != n_d ||
      channels.h_d2.cols() != n_s)
    throw ConfigError("effective_model: inconsistent channel dimensions");

  const CMat relay_path = channels.h_dr * g;  // n_d x n_r

  EffectiveModel eff;
  eff.g = g;
  eff.h1.resize(2 * n_d, n_s);
  eff.h1.topRows(n_d) = channels.h_d1;
  eff.h1.bottomRows(n_d) = relay_path * channels.h_r1;
  eff.h2.resize(2 * n_d, n_s);
  eff.h2.topRows(n_d) = channels.h_d2;
  eff.h2.bottomRows(n_d) = relay_path * channels.h_r2;
  eff.r = CMat::Identity(n_d, n_d) + detail::gram(relay_path);
  return eff;
}

}  // namespace murelay
