#pragma once

// Non-diagonal linear state-space recurrence evaluated over GOOMs:
//
//   x_t = A x_{t-1} + B u_t,   y_t = C s_t + D u_t
//
// where s_t is x_t log-scaled so its largest entry has magnitude e^2. States
// never leave the log domain, so no stabilization of A is needed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "goom/matrix.hpp"

namespace goom {

struct SsmParams {
  Eigen::MatrixXd A;  // d x d
  Eigen::MatrixXd B;  // d x d
  Eigen::MatrixXd C;  // 2d x d
  Eigen::MatrixXd D;  // 2d x d

  std::size_t d() const noexcept { return static_cast<std::size_t>(A.rows()); }
  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void validate() const;
};

struct SsmRun {
  Eigen::VectorXd x0;
  std::vector<Eigen::VectorXd> u;
  std::vector<GoomMatrix<double>> states;  // x_1..x_T as d x 1
  std::vector<Eigen::VectorXd> scaled;     // entries in [-e^2, e^2]
  std::vector<double> scales;              // per-step log-scale c
  std::vector<Eigen::VectorXd> y;
};

/// Prefix scan with the affine combiner over leaves (A, B u_t).
SsmRun ssm_forward_parallel(const SsmParams& p, const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& u,
                            std::size_t block_size = 64, int workers = 0);

/// Step-by-step GOOM recurrence.
SsmRun ssm_forward_sequential(const SsmParams& p, const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& u);

/// The same recurrence in plain binary64, no scaling.
std::vector<Eigen::VectorXd> ssm_states_direct(const SsmParams& p, const Eigen::VectorXd& x0,
                                               const std::vector<Eigen::VectorXd>& u);

/// N(0,1) parameters with A rescaled to the given spectral radius.
SsmParams random_ssm_params(std::size_t d, double spectral_radius, std::uint64_t seed);

/// T input vectors with N(0,1) entries.
std::vector<Eigen::VectorXd> random_inputs(std::size_t d, std::size_t T, std::uint64_t seed);

}  // namespace goom
