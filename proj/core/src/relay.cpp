// SPDX-License-Identifier: Apache-2.0
#include "murelay/relay.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "block_gram.hpp"
#include "linalg_detail.hpp"

namespace murelay {

namespace {

constexpr double kEigClampFloor = -1e-10;

void check_allocation_input(const RVec& lambda_k, const RVec& theta, double kappa) {
  if (lambda_k.size() != theta.size())
    throw ConfigError("relay allocation: lambda/theta size mismatch");
  if (kappa < 0.0) throw ConfigError("relay allocation: kappa must be nonnegative");
  for (Eigen::Index i = 0; i < lambda_k.size(); ++i) {
    if (lambda_k[i] < 0.0 || theta[i] < 0.0)
      throw ConfigError("relay allocation: negative diagonal entry");
  }
}

std::vector<int> usable_modes(const RVec& lambda_k, const RVec& theta) {
  std::vector<int> idx;
  for (int i = 0; i < lambda_k.size(); ++i)
    if (lambda_k[i] > 0.0 && theta[i] > 0.0) idx.push_back(i);
  return idx;
}

// Euclidean projection onto {x >= 0 on `usable`, sum w_i x_i <= p, x = 0
// elsewhere}; exact breakpoint scan, no tolerance.
RVec project_weighted_budget(const RVec& x, const std::vector<int>& usable,
                             const RVec& w, double p) {
  RVec y = RVec::Zero(x.size());
  double spent = 0.0;
  for (int i : usable) {
    y[i] = std::max(0.0, x[i]);
    spent += w[i] * y[i];
  }
  if (spent <= p) return y;

  // On the budget face: x_i -> max(0, x_i - nu w_i) with nu > 0 solving
  // sum_A w_i (x_i - nu w_i) = p over the active set A = {i : x_i/w_i > nu}.
  std::vector<int> order(usable);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return x[a] / w[a] > x[b] / w[b]; });
  double wx = 0.0, ww = 0.0, nu = 0.0;
  for (std::size_t m = 0; m < order.size(); ++m) {
    const int i = order[m];
    wx += w[i] * x[i];
    ww += w[i] * w[i];
    nu = (wx - p) / ww;
    const double next_ratio =
        (m + 1 < order.size()) ? x[order[m + 1]] / w[order[m + 1]] : -1.0;
    if (nu >= next_ratio) break;
  }
  for (int i : usable) y[i] = std::max(0.0, x[i] - nu * w[i]);
  return y;
}

CMat assemble_relay(const RelayGeometry& geo, const RVec& xi) {
  return geo.v_h * xi.cwiseSqrt().asDiagonal().toDenseMatrix().cast<Cx>() *
         geo.u_k.adjoint();
}

}  // namespace

RelayGeometry relay_geometry(const ChannelSet& channels, const CMat& f1,
                             const CMat& f2) {
  const auto bg = detail::block_gram(channels, f1, f2);

  RelayGeometry geo;
  geo.t = bg.t;
  geo.k = bg.k;
  geo.k_tilde = bg.k_tilde;
  geo.kappa = std::max(0.0, bg.k_tilde.trace().real());

  // K is PSD analytically (Schur complement of a PSD block matrix);
  // negatives below the clamp floor are left in `k` for the audits.
  Eigen::SelfAdjointEigenSolver<CMat> eig(bg.k);
  const Eigen::Index n_r = bg.k.rows();
  std::vector<Eigen::Index> order(n_r);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig.eigenvalues()[a] > eig.eigenvalues()[b];
  });
  geo.u_k.resize(n_r, n_r);
  geo.lambda_k.resize(n_r);
  for (Eigen::Index i = 0; i < n_r; ++i) {
    double value = eig.eigenvalues()[order[i]];
    if (value < 0.0 && value >= kEigClampFloor) value = 0.0;
    geo.lambda_k[i] = std::max(value, 0.0);
    geo.u_k.col(i) = eig.eigenvectors().col(order[i]);
  }

  Eigen::JacobiSVD<CMat> svd(channels.h_dr, Eigen::ComputeFullU | Eigen::ComputeFullV);
  geo.u_h = svd.matrixU();
  geo.v_h = svd.matrixV();
  geo.theta = RVec::Zero(n_r);
  geo.theta.head(svd.singularValues().size()) = svd.singularValues();
  return geo;
}

double alpha_of(const CMat& k_tilde, const CMat& g) {
  const double kappa = k_tilde.trace().real();
  const double gain = g.squaredNorm();  // tr(g' g)
  if (!(kappa > 0.0) || gain == 0.0) return 0.0;
  const double coupled = (g * k_tilde * g.adjoint()).trace().real();
  return coupled / (kappa * gain);
}

RelayAllocation capacity_allocation(const RVec& lambda_k, const RVec& theta,
                                    double kappa, double alpha, double p_r) {
  check_allocation_input(lambda_k, theta, kappa);
  RelayAllocation out{RVec::Zero(lambda_k.size()), 0.0, false};
  const std::vector<int> usable = usable_modes(lambda_k, theta);
  if (p_r <= 0.0 || usable.empty()) {
    out.relay_useless = true;
    return out;
  }

  const double shift = alpha * kappa;
  auto gains_at = [&](double mu, RVec& xi) -> double {
    double budget = 0.0;
    for (int i : usable) {
      const double l = lambda_k[i], t2 = theta[i] * theta[i];
      const double weight = l + 1.0 + shift;
      const double root = std::sqrt(l * l + 4.0 * l * t2 * (l + 1.0) * mu / weight);
      const double numer = root - l - 2.0;
      xi[i] = numer > 0.0 ? numer / (2.0 * t2 * (l + 1.0)) : 0.0;
      budget += weight * xi[i];
    }
    return budget;
  };

  // The budget is continuous and nondecreasing in mu with budget(0) = 0,
  // so bracket-and-bisect is exact to machine precision.
  RVec xi = RVec::Zero(lambda_k.size());
  double lo = 0.0, hi = 1.0;
  while (gains_at(hi, xi) < p_r) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gains_at(mid, xi) < p_r ? lo : hi) = mid;
  }
  out.mu = 0.5 * (lo + hi);
  gains_at(out.mu, xi);
  out.xi = xi;
  return out;
}

double mse_surrogate(const RVec& lambda_k, const RVec& theta, const RVec& xi) {
  double inv_sum = 0.0, gain_sum = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    const double t2 = theta[i] * theta[i];
    inv_sum += 1.0 / (t2 * (lambda_k[i] + 1.0) * xi[i] + 1.0);
    gain_sum += t2 * xi[i] + 2.0;
  }
  return inv_sum * gain_sum;
}

RelayAllocation mse_allocation(const RVec& lambda_k, const RVec& theta, double kappa,
                               double alpha, double p_r, const RVec& xi_init,
                               double tol, int max_iters) {
  check_allocation_input(lambda_k, theta, kappa);
  if (xi_init.size() != lambda_k.size())
    throw ConfigError("mse_allocation: xi_init size mismatch");

  RelayAllocation out{RVec::Zero(lambda_k.size()), 0.0, false};
  const std::vector<int> usable = usable_modes(lambda_k, theta);
  if (p_r <= 0.0 || usable.empty()) {
    out.relay_useless = true;
    return out;
  }

  RVec w(lambda_k.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = lambda_k[i] + 1.0 + alpha * kappa;

  RVec x = project_weighted_budget(xi_init, usable, w, p_r);
  double obj = mse_surrogate(lambda_k, theta, x);

  auto gradient = [&](const RVec& z) {
    double inv_sum = 0.0, gain_sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double t2 = theta[i] * theta[i];
      inv_sum += 1.0 / (t2 * (lambda_k[i] + 1.0) * z[i] + 1.0);
      gain_sum += t2 * z[i] + 2.0;
    }
    RVec grad = RVec::Zero(z.size());
    for (int i : usable) {
      const double t2 = theta[i] * theta[i];
      const double a = t2 * (lambda_k[i] + 1.0);
      const double denom = a * z[i] + 1.0;
      grad[i] = -a / (denom * denom) * gain_sum + t2 * inv_sum;
    }
    return grad;
  };

  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    const RVec grad = gradient(x);
    const RVec mapped = x - project_weighted_budget(x - grad, usable, w, p_r);
    if (mapped.norm() <= tol) break;

    step = std::min(step * 2.0, 1e8);
    bool moved = false;
    while (step > 1e-18) {
      const RVec y = project_weighted_budget(x - step * grad, usable, w, p_r);
      const double trial = mse_surrogate(lambda_k, theta, y);
      if (trial <= obj + kArmijo * grad.dot(y - x)) {
        if (trial < obj) {
          x = y;
          obj = trial;
          moved = true;
        }
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no descent direction left at machine precision
  }
  out.xi = x;
  return out;
}

RelayDesign solve_relay(const RelayGeometry& geometry, double p_r, Mode mode,
                        double inner_tol, int inner_max_iters) {
  const Eigen::Index n_r = geometry.lambda_k.size();
  RelayDesign rd;
  rd.g = CMat::Zero(n_r, n_r);
  rd.xi = RVec::Zero(n_r);
  if (p_r <= 0.0) {
    rd.relay_useless = true;
    return rd;
  }

  auto allocate = [&](double alpha_val) {
    RelayAllocation cap = capacity_allocation(geometry.lambda_k, geometry.theta,
                                              geometry.kappa, alpha_val, p_r);
    if (mode == Mode::kCapacity || cap.relay_useless) return cap;
    return mse_allocation(geometry.lambda_k, geometry.theta, geometry.kappa,
                          alpha_val, p_r, cap.xi, inner_tol);
  };

  RelayAllocation alloc;
  double alpha_used = 0.0;
  if (geometry.kappa <= 0.0) {
    // Modified and true constraints coincide; no fixed point to chase.
    alloc = allocate(0.0);
    rd.inner_iters = 1;
    rd.inner_converged = true;
    rd.alpha = rd.alpha_min = rd.alpha_max = 0.0;
  } else {
    double alpha = alpha_of(geometry.k_tilde, CMat::Identity(n_r, n_r));
    rd.alpha_min = rd.alpha_max = alpha;
    rd.inner_converged = false;
    for (int n = 1; n <= inner_max_iters; ++n) {
      alloc = allocate(alpha);
      alpha_used = alpha;
      const double alpha_next = alpha_of(geometry.k_tilde, assemble_relay(geometry, alloc.xi));
      rd.alpha_min = std::min(rd.alpha_min, alpha_next);
      rd.alpha_max = std::max(rd.alpha_max, alpha_next);
      rd.inner_iters = n;
      const bool settled = std::abs(alpha_next - alpha) <= inner_tol;
      alpha = alpha_next;
      if (settled) {
        rd.inner_converged = true;
        break;
      }
    }
    rd.alpha = alpha;
  }

  rd.relay_useless = alloc.relay_useless;
  rd.xi = alloc.xi;

  CMat g = assemble_relay(geometry, alloc.xi);
  const CMat burden =
      CMat::Identity(n_r, n_r) + geometry.k + geometry.k_tilde;  // I + sum H_ri P_i H_ri'
  double used = (g * burden * g.adjoint()).trace().real();

  double modified = 0.0;
  for (Eigen::Index i = 0; i < n_r; ++i)
    modified += (geometry.lambda_k[i] + 1.0 + alpha_used * geometry.kappa) * alloc.xi[i];
  rd.power_residual = std::abs(modified - used);

  if (used > p_r) {
    rd.rescale = std::sqrt(p_r / used);
    g *= rd.rescale;
    used = p_r;
  }
  rd.g = g;
  rd.used_power = used;
  return rd;
}

}  // namespace murelay
