// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace murelay {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Design criterion driving precoder loading and relay power allocation.
enum class Mode { kCapacity, kMse };

/// Transceiver design scheme.
///  kJds  joint source/relay design (the optimized scheme)
///  kNas  scaled-identity precoders and relay matrix with power control
///  kSos  joint design with direct links zeroed during design, evaluated with them
///  kNod  same design as kSos, evaluated without direct links
enum class Scheme { kJds, kNas, kSos, kNod };

/// Power loading policy over parallel eigenmodes.
enum class Policy { kWaterFill, kInverseWaterFill };

const char* to_string(Mode mode) noexcept;
const char* to_string(Scheme scheme) noexcept;

/// The SIC decoding order is fixed: source 2 is decoded first, so source 1
/// sees no interference from it. Searching over the order is unsupported.
inline constexpr bool kDecodeSecondSourceFirst = true;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an interference-plus-noise covariance fails its Cholesky
/// factorization. Cannot occur for valid designs (the covariances dominate
/// the identity); signals a broken design upstream.
struct IllConditionedNoiseCovariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when power must be allocated but every eigenmode has zero gain.
struct NoUsableEigenmode : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace murelay
