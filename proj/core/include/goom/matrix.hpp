#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "goom/goom.hpp"

namespace goom {

template <std::floating_point T>
using RealMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense row-major matrix of Gooms.
template <std::floating_point T>
class GoomMatrix {
 public:
  using value_type = Goom<T>;

  GoomMatrix() = default;
  GoomMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  GoomMatrix(std::size_t rows, std::size_t cols, std::vector<Goom<T>> data);

  static GoomMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static GoomMatrix identity(std::size_t n);
  static GoomMatrix from_real(const RealMatrix<T>& m, ZeroPolicy policy = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Goom<T>& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Goom<T>& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<Goom<T>> data() noexcept { return data_; }
  std::span<const Goom<T>> data() const noexcept { return data_; }

  bool all_zero() const noexcept;
  bool all_finite() const noexcept;

  /// Elementwise exponentiation. Overflows for magnitudes beyond the
  /// backing format; see to_real_scaled.
  RealMatrix<T> to_real() const;

  friend bool operator==(const GoomMatrix&, const GoomMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Goom<T>> data_;
};

/// Log-matrix-multiplication-exp: log(exp(A) exp(B)).
///
/// Each row i of A is shifted by a_i = max(max_j log|A_ij|, 0) and each
/// column k of B by b_k = max(max_j log|B_jk|, 0) so the interim matrices
/// exponentiate into [-1, 1]. The product of the shifted matrices is
/// computed in the backing format and the shifts are added back to the log
/// of every result element. Throws std::invalid_argument on a dimension
/// mismatch.
template <std::floating_point T>
GoomMatrix<T> lmme(const GoomMatrix<T>& a, const GoomMatrix<T>& b, ZeroPolicy policy = {});

/// Elementwise signed log-sum-exp of two equally shaped matrices.
template <std::floating_point T>
GoomMatrix<T> gadd(const GoomMatrix<T>& a, const GoomMatrix<T>& b, ZeroPolicy policy = {});

template <std::floating_point T>
struct ColumnNormalized {
  GoomMatrix<T> matrix;
  std::vector<T> log_norms;
};

/// Shifts every column to unit Euclidean norm in the log domain and returns
/// the per-column log-norms. Throws std::domain_error on an all-zero column.
template <std::floating_point T>
ColumnNormalized<T> log_unit_norm_columns(const GoomMatrix<T>& m);

template <std::floating_point T>
struct ScaledReal {
  RealMatrix<T> values;
  T log_scale = 0;
};

/// exp(log_mag - c + 2) with c the largest log-magnitude, so every entry
/// lies in [-e^2, e^2]. An all-zero matrix maps to zeros with c = 0.
template <std::floating_point T>
ScaledReal<T> to_real_scaled(const GoomMatrix<T>& m);

/// Largest relative_log_diff over all elements; +inf on shape mismatch.
template <std::floating_point T>
T max_relative_log_diff(const GoomMatrix<T>& a, const GoomMatrix<T>& b) noexcept;

/// Number of element pairs whose signs differ (zero elements ignored).
template <std::floating_point T>
std::size_t sign_mismatches(const GoomMatrix<T>& a, const GoomMatrix<T>& b) noexcept;

}  // namespace goom
