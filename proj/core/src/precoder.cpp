// SPDX-License-Identifier: Apache-2.0
#include "murelay/precoder.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "linalg_detail.hpp"

namespace murelay {

namespace {

constexpr double kEigClampFloor = -1e-10;

void check_loading_input(const RVec& lambda, double p) {
  if (!(p >= 0.0)) throw ConfigError("power budget must be nonnegative");
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda[k] < 0.0) throw ConfigError("eigenvalues must be nonnegative");
    if (k > 0 && lambda[k] > lambda[k - 1])
      throw ConfigError("eigenvalues must be sorted descending");
  }
}

int count_positive(const RVec& lambda) {
  int n = 0;
  while (n < lambda.size() && lambda[n] > 0.0) ++n;
  return n;
}

}  // namespace

EigenBasis whitened_gram(const CMat& h, const CMat& r_z) {
  const auto llt = detail::llt_hpd(r_z, "interference-plus-noise covariance singular");
  const CMat s = detail::hermitianize(h.adjoint() * llt.solve(h));

  Eigen::SelfAdjointEigenSolver<CMat> eig(s);
  const Eigen::Index n = s.rows();

  // Reorder descending; a stable sort keeps the solver's order within
  // repeated eigenvalues.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig.eigenvalues()[a] > eig.eigenvalues()[b];
  });

  EigenBasis basis;
  basis.u.resize(n, n);
  basis.lambda.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double value = eig.eigenvalues()[order[k]];
    if (value < 0.0 && value >= kEigClampFloor) value = 0.0;
    basis.lambda[k] = value;
    basis.u.col(k) = eig.eigenvectors().col(order[k]);
  }
  return basis;
}

PowerLoad water_fill(const RVec& lambda, double p) {
  check_loading_input(lambda, p);
  PowerLoad load{RVec::Zero(lambda.size()), 0.0, Policy::kWaterFill};
  if (p == 0.0) return load;

  int active = count_positive(lambda);
  if (active == 0) throw NoUsableEigenmode("water_fill: all eigenmodes are zero");

  // Close candidates from the weakest mode until the water level clears it.
  double mu = 0.0;
  for (; active >= 1; --active) {
    double inv_sum = 0.0;
    for (int k = 0; k < active; ++k) inv_sum += 1.0 / lambda[k];
    mu = (p + inv_sum) / active;
    if (mu - 1.0 / lambda[active - 1] > 0.0) break;
  }
  for (int k = 0; k < active; ++k) load.sigma_sq[k] = mu - 1.0 / lambda[k];
  load.mu = mu;
  return load;
}

PowerLoad inverse_water_fill(const RVec& lambda, double p) {
  check_loading_input(lambda, p);
  PowerLoad load{RVec::Zero(lambda.size()), 0.0, Policy::kInverseWaterFill};
  if (p == 0.0) return load;

  int active = count_positive(lambda);
  if (active == 0) throw NoUsableEigenmode("inverse_water_fill: all eigenmodes are zero");

  // Active condition is mu > 1/sqrt(lambda_k), hardest for the weakest mode,
  // so the active set is a prefix of the descending order here as well.
  double mu = 0.0;
  for (; active >= 1; --active) {
    double inv_sum = 0.0, inv_sqrt_sum = 0.0;
    for (int k = 0; k < active; ++k) {
      inv_sum += 1.0 / lambda[k];
      inv_sqrt_sum += 1.0 / std::sqrt(lambda[k]);
    }
    mu = (p + inv_sum) / inv_sqrt_sum;
    if (mu / std::sqrt(lambda[active - 1]) - 1.0 / lambda[active - 1] > 0.0) break;
  }
  for (int k = 0; k < active; ++k)
    load.sigma_sq[k] = mu / std::sqrt(lambda[k]) - 1.0 / lambda[k];
  load.mu = mu;
  return load;
}

CMat source_precoder(const EigenBasis& basis, double p, Policy policy) {
  const PowerLoad load = policy == Policy::kWaterFill
                             ? water_fill(basis.lambda, p)
                             : inverse_water_fill(basis.lambda, p);
  return basis.u * load.sigma_sq.cwiseSqrt().asDiagonal().toDenseMatrix().cast<Cx>();
}

}  // namespace murelay
