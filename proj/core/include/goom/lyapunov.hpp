#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "goom/matrix.hpp"
#include "goom/systems.hpp"

namespace goom {

/// Step-map Jacobians J_1..J_T recorded along one trajectory.
struct JacobianChain {
  std::size_t dim = 0;
  double dt = 1.0;
  std::vector<Eigen::MatrixXd> mats;

  std::size_t T() const noexcept { return mats.size(); }
  /// Throws std::invalid_argument if the chain is empty or shapes disagree.
  void validate() const;
};

/// Perturbs x0 by 1e-9 scaled seeded normal noise, discards burn_in steps,
/// then records J_t = jacobian(x_{t-1}) for T steps. Throws
/// std::runtime_error naming the step index if the state becomes non-finite.
JacobianChain integrate_chain(const DynamicalSystem& sys, const Eigen::VectorXd& x0, std::size_t burn_in,
                              std::size_t T, std::uint64_t seed);

enum class Method { Sequential, Parallel };

std::string to_string(Method m);

struct SpectrumResult {
  /// Exponents in units of 1/time, descending.
  std::vector<double> lambdas;
  double wall_seconds = 0.0;
  Method method = Method::Sequential;
  std::size_t resets = 0;
};

struct ParallelOptions {
  double colinearity_threshold = 0.99;
  std::size_t block_size = 64;
  int workers = 0;
};

/// Benettin-style QR reorthonormalization, one step at a time. Throws
/// std::domain_error when some diag(R_t) entry is exactly zero.
SpectrumResult spectrum_sequential(const JacobianChain& chain, const Eigen::MatrixXd& S0);

/// Selective-resetting scan over the GOOM Jacobians to obtain all interim
/// bases, then independent QR steps per time index.
SpectrumResult spectrum_parallel(const JacobianChain& chain, const Eigen::MatrixXd& S0,
                                 const ParallelOptions& opts = {});

/// True iff some pair of distinct columns has |cos| > threshold. Computed in
/// the log domain; a matrix with an all-zero column is always selected.
bool colinearity_select(const GoomMatrix<double>& m, double threshold);

/// Columns scaled to unit norm, exponentiated and replaced by the Q factor.
/// Throws std::domain_error if the scaled matrix is rank deficient.
GoomMatrix<double> orthonormal_reset(const GoomMatrix<double>& m);

/// Largest exponent from repeated normalization of J_t u_{t-1}.
double lle_sequential(const JacobianChain& chain, const Eigen::VectorXd& u0);

/// Largest exponent from a single LMME prefix scan of u0, J_1, ..., J_T:
/// LSE(2 log|s_T|) / (2 dt T) with s_T the final prefix.
double lle_parallel(const JacobianChain& chain, const Eigen::VectorXd& u0, std::size_t block_size = 64,
                    int workers = 0);

/// Plain-text chain format: a header `goomjac v1 d=<d> T=<T> dt=<dt>` then T
/// blocks of d rows of d space-separated decimals.
void write_goomjac(std::ostream& out, const JacobianChain& chain);
void write_goomjac_file(const std::string& path, const JacobianChain& chain);

/// Strict parser; throws std::runtime_error with the offending line number.
JacobianChain read_goomjac(std::istream& in);
JacobianChain read_goomjac_file(const std::string& path);

}  // namespace goom
