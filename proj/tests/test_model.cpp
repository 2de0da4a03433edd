// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "murelay/model.hpp"
#include "oracles.hpp"

using namespace murelay;

namespace {

NetworkConfig fig2_config() {
  NetworkConfig cfg;
  cfg.n_s = cfg.n_r = cfg.n_d = 4;
  cfg.l_sr = cfg.l_rd = 5.0;
  cfg.tau = 3.0;
  cfg.seed = 42;
  return cfg;
}

double empirical_entry_variance(const NetworkConfig& cfg, int trials,
                                const CMat& (*pick)(const ChannelSet&)) {
  double acc = 0.0;
  long count = 0;
  for (int t = 0; t < trials; ++t) {
    const ChannelSet ch = generate_channels(cfg, t);
    const CMat& m = pick(ch);
    acc += m.squaredNorm();
    count += m.size();
  }
  return acc / static_cast<double>(count);
}

const CMat& pick_h_r1(const ChannelSet& ch) { return ch.h_r1; }
const CMat& pick_h_d1(const ChannelSet& ch) { return ch.h_d1; }

}  // namespace

TEST_CASE("config validation rejects bad values") {
  NetworkConfig cfg = fig2_config();
  CHECK_NOTHROW(cfg.validate());

  NetworkConfig bad = cfg;
  bad.n_s = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.p1 = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.l_rd = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.outer_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // Zero power budgets are legal (they mean "this node is silent").
  NetworkConfig silent = cfg;
  silent.p1 = silent.p2 = 0.0;
  CHECK_NOTHROW(silent.validate());

  CHECK(cfg.l_sd() == doctest::Approx(10.0));
}

TEST_CASE("entry variances follow the path loss law") {
  NetworkConfig cfg = fig2_config();
  cfg.n_s = cfg.n_r = cfg.n_d = 10;  // 100 entries per matrix

  // h_r1 at distance 5, tau 3: variance 1/125. 1000 trials x 100 entries
  // gives standard error v/sqrt(1e5).
  const int trials = 1000;
  const double v_sr = empirical_entry_variance(cfg, trials, pick_h_r1);
  const double se_sr = (1.0 / 125.0) / std::sqrt(1e5);
  CHECK(std::abs(v_sr - 1.0 / 125.0) < 3.0 * se_sr);

  // Direct link at distance 10: variance 1/1000.
  const double v_sd = empirical_entry_variance(cfg, trials, pick_h_d1);
  const double se_sd = (1.0 / 1000.0) / std::sqrt(1e5);
  CHECK(std::abs(v_sd - 1.0 / 1000.0) < 3.0 * se_sd);
}

TEST_CASE("tau = 0 removes path loss entirely") {
  NetworkConfig cfg = fig2_config();
  cfg.tau = 1e-300;  // validate() wants tau > 0; this is numerically tau = 0
  cfg.n_s = cfg.n_r = cfg.n_d = 8;
  const int trials = 600;
  for (auto pick : {pick_h_r1, pick_h_d1}) {
    const double v = empirical_entry_variance(cfg, trials, pick);
    CHECK(std::abs(v - 1.0) < 3.0 / std::sqrt(600.0 * 64.0));
  }
}

TEST_CASE("channel generation is reproducible and trial-independent") {
  const NetworkConfig cfg = fig2_config();
  const ChannelSet a = generate_channels(cfg, 7);
  const ChannelSet b = generate_channels(cfg, 7);
  CHECK(a.h_r1 == b.h_r1);
  CHECK(a.h_r2 == b.h_r2);
  CHECK(a.h_d1 == b.h_d1);
  CHECK(a.h_d2 == b.h_d2);
  CHECK(a.h_dr == b.h_dr);

  const ChannelSet c = generate_channels(cfg, 8);
  CHECK(a.h_r1 != c.h_r1);

  NetworkConfig other = cfg;
  other.seed = 43;
  const ChannelSet d = generate_channels(other, 7);
  CHECK(a.h_r1 != d.h_r1);

  for (const CMat* m : {&a.h_r1, &a.h_r2, &a.h_d1, &a.h_d2, &a.h_dr})
    CHECK(m->allFinite());
}

TEST_CASE("effective model trivial cases") {
  const NetworkConfig cfg = fig2_config();
  const ChannelSet ch = generate_channels(cfg, 0);

  SUBCASE("zero relay gain") {
    const EffectiveModel eff = effective_model(ch, CMat::Zero(4, 4));
    CHECK(eff.h1.topRows(4) == ch.h_d1);
    CHECK(eff.h1.bottomRows(4).norm() == 0.0);
    CHECK((eff.r - CMat::Identity(4, 4)).norm() == 0.0);
  }

  SUBCASE("identity relay through identity channel") {
    ChannelSet id = ch;
    id.h_dr = CMat::Identity(4, 4);
    const EffectiveModel eff = effective_model(id, CMat::Identity(4, 4));
    CHECK((eff.r - 2.0 * CMat::Identity(4, 4)).norm() < 1e-14);
  }
}

TEST_CASE("effective model matches the naive product oracle") {
  NetworkConfig cfg = fig2_config();
  cfg.n_s = cfg.n_r = cfg.n_d = 2;
  Xoshiro256pp rng(123, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const ChannelSet ch = generate_channels(cfg, rep);
    const CMat g = oracles::random_matrix(rng, 2, 2);
    const EffectiveModel eff = effective_model(ch, g);

    const CMat relay_path = oracles::naive_matmul(ch.h_dr, g);
    const CMat r_ref = CMat::Identity(2, 2) + oracles::naive_gram(relay_path);
    CHECK((eff.r - r_ref).cwiseAbs().maxCoeff() <= 1e-12);

    const CMat bottom_ref = oracles::naive_matmul(relay_path, ch.h_r1);
    CHECK((eff.h1.bottomRows(2) - bottom_ref).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(eff.h1.topRows(2) == ch.h_d1);
  }
}

TEST_CASE("noise covariance is Hermitian and at least the identity") {
  const NetworkConfig cfg = fig2_config();
  Xoshiro256pp rng(99, 1);
  for (int rep = 0; rep < 50; ++rep) {
    const ChannelSet ch = generate_channels(cfg, rep);
    const CMat g = oracles::random_matrix(rng, 4, 4, 2.0);
    const EffectiveModel eff = effective_model(ch, g);

    CHECK((eff.r - eff.r.adjoint()).norm() <= 1e-10 * (1.0 + eff.r.norm()));
    Eigen::SelfAdjointEigenSolver<CMat> eig(eff.r - CMat::Identity(4, 4));
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("dimension mismatch is a contract violation") {
  const NetworkConfig cfg = fig2_config();
  const ChannelSet ch = generate_channels(cfg, 0);
  CHECK_THROWS_AS(effective_model(ch, CMat::Zero(3, 3)), ConfigError);

  ChannelSet broken = ch;
  broken.h_r2 = CMat::Zero(3, 4);
  CHECK_THROWS_AS(effective_model(broken, CMat::Zero(4, 4)), ConfigError);
}
