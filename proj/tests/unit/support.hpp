#pragma once

// Helpers shared by the unit tests. Random inputs come from std::mt19937_64
// so test data never depends on the library's own generator, and reference
// values are computed here with boost::multiprecision rather than with the
// library oracle.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "goom/matrix.hpp"
#include "goom/pscan.hpp"

namespace goom::test {

using Big = boost::multiprecision::cpp_dec_float_50;

inline Eigen::MatrixXd normal_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  return m;
}

inline GoomMatrix<double> goom_of(const Eigen::MatrixXd& m) { return GoomMatrix<double>::from_real(m); }

/// Big-precision real value of a Goom, valid far beyond binary64 range.
inline Big big_of(const Goom<double>& g) {
  if (g.is_zero()) return Big(0);
  const Big v = boost::multiprecision::exp(Big(g.log_mag));
  return g.sign == Sign::Negative ? Big(-v) : v;
}

using BigMatrix = std::vector<std::vector<Big>>;

inline BigMatrix big_of(const Eigen::MatrixXd& m) {
  BigMatrix out(static_cast<std::size_t>(m.rows()), std::vector<Big>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = Big(m(r, c));
  return out;
}

inline BigMatrix big_mul(const BigMatrix& a, const BigMatrix& b) {
  BigMatrix out(a.size(), std::vector<Big>(b.front().size(), Big(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[k].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// ||exp(g) - ref||_F / ||ref||_F at 50 digits.
inline double big_frobenius_error(const GoomMatrix<double>& g, const BigMatrix& ref) {
  Big num = 0, den = 0;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const Big diff = big_of(g(r, c)) - ref[r][c];
      num += diff * diff;
      den += ref[r][c] * ref[r][c];
    }
  return static_cast<double>(boost::multiprecision::sqrt(num / den));
}

/// Largest |log|x| - log|y|| / max(1, |log|y||) with matching signs required.
inline double log_diff(const GoomMatrix<double>& a, const GoomMatrix<double>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.data()[i];
    const auto& y = b.data()[i];
    if (x.is_zero() && y.is_zero()) continue;
    if (x.is_zero() != y.is_zero() || x.sign != y.sign) return INFINITY;
    worst = std::max(worst, std::abs(x.log_mag - y.log_mag) / std::max(1.0, std::abs(y.log_mag)));
  }
  return worst;
}

inline ScanPair<double> pair_of(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return ScanPair<double>(goom_of(a), goom_of(b));
}

}  // namespace goom::test
