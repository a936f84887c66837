#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "goom/oracle.hpp"
#include "goom/pscan.hpp"
#include "goom/ssm.hpp"

namespace goom {

enum class Backend { Real64, Real32, Goom64, Goom32 };
enum class FailureMode { None, Overflow, Underflow, NaN };

std::string to_string(Backend b);
std::string to_string(FailureMode f);
/// Accepts real64, real32, goom64, goom32. Throws std::invalid_argument.
Backend backend_from_string(const std::string& name);

struct ChainConfig {
  std::size_t d = 8;
  std::size_t T_max = 100000;
  Backend backend = Backend::Goom64;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  int workers = 0;
  /// Multiply by this matrix at every step instead of fresh N(0,1) samples.
  std::optional<Eigen::MatrixXd> fixed_factor;

  /// Throws std::invalid_argument when d, T_max or trials is zero.
  void validate() const;
};

struct TrialOutcome {
  std::size_t survived_steps = 0;
  bool completed = false;
  FailureMode failure_mode = FailureMode::None;
  /// Mean log|S_ij| over nonzero entries at the last healthy step.
  double final_mean_log_mag = 0.0;
};

struct ChainResult {
  ChainConfig config;
  std::vector<TrialOutcome> trials;
};

/// S_t = A_t S_{t-1} from S_0 = I with A_t ~ N(0,1)^{d x d}; trial k draws
/// from stream k of the seed. Stops at the first non-finite entry (or an
/// all-zero product) and records how many steps completed.
ChainResult run_chain(const ChainConfig& cfg);

enum class Arithmetic { Goom, Direct };
std::string to_string(Arithmetic a);

struct ErrorStats {
  std::string op_name;
  double range_low = 0.0;
  double range_high = 0.0;
  int backing_bits = 64;
  Arithmetic arithmetic = Arithmetic::Goom;
  /// Per-sample error is |log10|y| - log10|y_ref||, in decimal digits.
  double max_abs_log10_error = 0.0;
  double mean_abs_log10_error = 0.0;
  double mean_relative_error = 0.0;
  std::size_t samples = 0;
};

/// Evaluates op on log-uniform samples from [low, high] (sample k is the
/// same for every sample count) in the chosen arithmetic and backing, and
/// compares against the 50-digit oracle. Throws std::invalid_argument unless
/// 0 < low < high, samples > 0 and backing_bits is 32 or 64.
ErrorStats errbench(OracleOp op, double low, double high, std::size_t samples, int backing_bits,
                    Arithmetic arithmetic, std::uint64_t seed = 1);

/// Random scan leaves: A ~ N(0,1)^{d x d} and, unless zero_bias, B ~ N(0,1)^{d x d}.
std::vector<ScanPair<double>> random_scan_leaves(std::size_t len, std::size_t d, std::uint64_t seed, bool zero_bias);

/// Selects when log ||A||_F exceeds log_threshold; resets to the orthonormal
/// basis of A's column space.
ResetPolicy<double> log_norm_reset_policy(double log_threshold);

struct PrefixDiff {
  double max_rel_log_diff = 0.0;
  std::size_t sign_mismatches = 0;
};

/// Elementwise comparison of the A and B parts of two prefix sequences.
PrefixDiff compare_prefixes(const std::vector<ScanPair<double>>& a, const std::vector<ScanPair<double>>& b);

struct ScanCheck {
  std::string combiner;
  std::size_t block_size = 0;
  PrefixDiff diff;
  std::size_t resets = 0;
  bool sites_match = true;
  bool pass = false;
};

/// Affine scan of random biased leaves against the left fold, and selective
/// scan of random zero-bias leaves against the single-threaded tree
/// reference, for each block size.
std::vector<ScanCheck> scan_selftest(std::size_t len, std::size_t d, const std::vector<std::size_t>& blocks,
                                     std::uint64_t seed, int workers, double tolerance = 1e-10,
                                     double log_threshold = 12.0);

struct SsmOracleReport {
  /// max over t of ||s_goom - s_ref||_inf / ||s_ref||_inf, both scaled by
  /// exp(-c_t) with c_t the largest GOOM log-magnitude at step t.
  double max_relative_error = 0.0;
  std::size_t steps = 0;
};

/// Runs the recurrence at 50 digits and compares every GOOM state.
SsmOracleReport ssm_oracle_check(const SsmParams& p, const Eigen::VectorXd& x0,
                                 const std::vector<Eigen::VectorXd>& u, const SsmRun& run);

}  // namespace goom
