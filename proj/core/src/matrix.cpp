#include "goom/matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace goom {

template <std::floating_point T>
GoomMatrix<T>::GoomMatrix(std::size_t rows, std::size_t cols, std::vector<Goom<T>> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("GoomMatrix: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

template <std::floating_point T>
GoomMatrix<T> GoomMatrix<T>::identity(std::size_t n) {
  GoomMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = {T(0), Sign::Positive};
  return m;
}

template <std::floating_point T>
GoomMatrix<T> GoomMatrix<T>::from_real(const RealMatrix<T>& m, ZeroPolicy policy) {
  GoomMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = goom::from_real(m(r, c), policy);
  return out;
}

template <std::floating_point T>
bool GoomMatrix<T>::all_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Goom<T>& g) { return g.is_zero(); });
}

template <std::floating_point T>
bool GoomMatrix<T>::all_finite() const noexcept {
  // -inf is the zero sentinel and counts as finite here.
  return std::all_of(data_.begin(), data_.end(), [](const Goom<T>& g) {
    return !std::isnan(g.log_mag) && g.log_mag != std::numeric_limits<T>::infinity();
  });
}

template <std::floating_point T>
RealMatrix<T> GoomMatrix<T>::to_real() const {
  RealMatrix<T> out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = goom::to_real((*this)(r, c));
  return out;
}

namespace {

template <std::floating_point T>
using RowArray = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <std::floating_point T>
RowArray<T> signed_exp(const RowArray<T>& x, const RowArray<T>& sign) {
  return x.unaryExpr([](T v) { return std::exp(v); }) * sign;
}

}  // namespace

template <std::floating_point T>
GoomMatrix<T> lmme(const GoomMatrix<T>& a, const GoomMatrix<T>& b, ZeroPolicy policy) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("lmme: inner dimensions differ (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
  const auto n = static_cast<Eigen::Index>(a.rows());
  const auto inner = static_cast<Eigen::Index>(a.cols());
  const auto m = static_cast<Eigen::Index>(b.cols());

  RowArray<T> la(n, inner), sa(n, inner), lb(inner, m), sb(inner, m);
  for (Eigen::Index i = 0; i < la.size(); ++i) {
    const auto& g = a.data()[static_cast<std::size_t>(i)];
    la.data()[i] = g.log_mag;
    sa.data()[i] = to_factor<T>(g.sign);
  }
  for (Eigen::Index i = 0; i < lb.size(); ++i) {
    const auto& g = b.data()[static_cast<std::size_t>(i)];
    lb.data()[i] = g.log_mag;
    sb.data()[i] = to_factor<T>(g.sign);
  }

  // Scaling constants: a_i = max(max_j log|A_ij|, 0), b_k likewise per column.
  Eigen::Array<T, Eigen::Dynamic, 1> row_shift = Eigen::Array<T, Eigen::Dynamic, 1>::Zero(n);
  Eigen::Array<T, 1, Eigen::Dynamic> col_shift = Eigen::Array<T, 1, Eigen::Dynamic>::Zero(m);
  if (inner > 0) {
    row_shift = la.rowwise().maxCoeff().cwiseMax(T(0));
    col_shift = lb.colwise().maxCoeff().cwiseMax(T(0));
  }

  const RowArray<T> lhs = signed_exp<T>(la.colwise() - row_shift, sa);
  const RowArray<T> rhs = signed_exp<T>(lb.rowwise() - col_shift, sb);
  RowArray<T> prod(n, m);
  prod.matrix().noalias() = lhs.matrix() * rhs.matrix();

  GoomMatrix<T> out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k) {
      const T v = prod(i, k);
      auto& dst = out(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
      if (v == T(0)) {
        dst = Goom<T>::zero(policy);
        continue;
      }
      dst = {std::log(std::abs(v)) + row_shift(i) + col_shift(k), v < T(0) ? Sign::Negative : Sign::Positive};
    }
  return out;
}

template <std::floating_point T>
GoomMatrix<T> gadd(const GoomMatrix<T>& a, const GoomMatrix<T>& b, ZeroPolicy policy) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("gadd: matrix shapes differ");
  GoomMatrix<T> out(a.rows(), a.cols());
  auto lhs = a.data();
  auto rhs = b.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = gadd(lhs[i], rhs[i], policy);
  return out;
}

template <std::floating_point T>
ColumnNormalized<T> log_unit_norm_columns(const GoomMatrix<T>& m) {
  ColumnNormalized<T> out{m, std::vector<T>(m.cols())};
  std::vector<Goom<T>> squares(m.rows());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) squares[r] = {T(2) * m(r, c).log_mag, Sign::Positive};
    if (m.rows() == 0) throw std::domain_error("log_unit_norm_columns: empty column");
    const Goom<T> sq = lse_reduce<T>(squares);
    if (sq.is_zero()) throw std::domain_error("log_unit_norm_columns: column " + std::to_string(c) + " is all zero");
    const T nu = sq.log_mag / T(2);
    out.log_norms[c] = nu;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      auto& g = out.matrix(r, c);
      if (!g.is_zero()) g.log_mag -= nu;
    }
  }
  return out;
}

template <std::floating_point T>
ScaledReal<T> to_real_scaled(const GoomMatrix<T>& m) {
  T c = -std::numeric_limits<T>::infinity();
  for (const auto& g : m.data()) c = std::max(c, g.log_mag);
  if (c == -std::numeric_limits<T>::infinity()) c = 0;

  ScaledReal<T> out{RealMatrix<T>(m.rows(), m.cols()), c};
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const auto& g = m(r, k);
      out.values(r, k) = to_factor<T>(g.sign) * std::exp(g.log_mag - c + T(2));
    }
  return out;
}

template <std::floating_point T>
T max_relative_log_diff(const GoomMatrix<T>& a, const GoomMatrix<T>& b) noexcept {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<T>::infinity();
  T worst = 0;
  auto lhs = a.data();
  auto rhs = b.data();
  for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, relative_log_diff(lhs[i], rhs[i]));
  return worst;
}

template <std::floating_point T>
std::size_t sign_mismatches(const GoomMatrix<T>& a, const GoomMatrix<T>& b) noexcept {
  std::size_t count = 0;
  auto lhs = a.data();
  auto rhs = b.data();
  const std::size_t n = std::min(lhs.size(), rhs.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!lhs[i].is_zero() && !rhs[i].is_zero() && lhs[i].sign != rhs[i].sign) ++count;
  return count;
}

#define GOOM_INSTANTIATE_MATRIX(T)                                                              \
  template class GoomMatrix<T>;                                                                 \
  template GoomMatrix<T> lmme<T>(const GoomMatrix<T>&, const GoomMatrix<T>&, ZeroPolicy);       \
  template GoomMatrix<T> gadd<T>(const GoomMatrix<T>&, const GoomMatrix<T>&, ZeroPolicy);       \
  template ColumnNormalized<T> log_unit_norm_columns<T>(const GoomMatrix<T>&);                  \
  template ScaledReal<T> to_real_scaled<T>(const GoomMatrix<T>&);                               \
  template T max_relative_log_diff<T>(const GoomMatrix<T>&, const GoomMatrix<T>&) noexcept;     \
  template std::size_t sign_mismatches<T>(const GoomMatrix<T>&, const GoomMatrix<T>&) noexcept;

GOOM_INSTANTIATE_MATRIX(float)
GOOM_INSTANTIATE_MATRIX(double)

#undef GOOM_INSTANTIATE_MATRIX

}  // namespace goom
