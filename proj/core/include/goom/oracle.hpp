#pragma once

// 50-decimal-digit reference arithmetic used to measure the error of GOOM
// and plain floating-point computations.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "goom/matrix.hpp"

namespace goom {

using HighPrec = boost::multiprecision::cpp_dec_float_50;

enum class OracleOp { Identity, Reciprocal, Sqrt, Square, Log, Exp, Add, Mul };

std::string to_string(OracleOp op);
/// Throws std::invalid_argument for unknown names.
OracleOp oracle_op_from_string(const std::string& name);
bool is_binary(OracleOp op) noexcept;

/// Evaluates op(a) or op(a, b). Throws std::domain_error for log or sqrt of
/// a negative value, log of zero and reciprocal of zero.
HighPrec oracle_eval(OracleOp op, const HighPrec& a, const HighPrec& b = HighPrec(0));

struct HighMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<HighPrec> data;  // row-major

  const HighPrec& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  HighPrec& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

template <class Scalar>
HighMatrix to_high(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  HighMatrix out{static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), {}};
  out.data.reserve(out.rows * out.cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.data.emplace_back(static_cast<double>(m(r, c)));
  return out;
}

/// Exact-to-50-digits product. Throws std::invalid_argument on a mismatch.
HighMatrix oracle_matmul(const HighMatrix& a, const HighMatrix& b);

/// ||exp(g) - ref||_F / ||ref||_F evaluated at 50 digits, so GOOM entries
/// beyond the backing range are compared without overflow.
template <std::floating_point T>
double normalized_frobenius_error(const GoomMatrix<T>& g, const HighMatrix& ref);

}  // namespace goom
