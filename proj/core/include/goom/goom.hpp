#pragma once

// Scalar generalized orders of magnitude (GOOMs).
//
// A Goom stores a real number x as (log|x|, sign(x)). The complex logarithm
// log(x) = log|x| + i*k*pi only ever carries an imaginary part that is an
// integer multiple of pi, so it is kept as a sign parity instead of a float.
// Products become additions of log-magnitudes and sums become signed
// log-sum-exp reductions, which lets values far outside the range of the
// backing float format be manipulated without overflow or underflow.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace goom {

enum class Sign : std::int8_t { Positive = 1, Negative = -1 };

constexpr Sign operator*(Sign a, Sign b) noexcept {
  return a == b ? Sign::Positive : Sign::Negative;
}

template <std::floating_point T>
constexpr T to_factor(Sign s) noexcept {
  return s == Sign::Positive ? T(1) : T(-1);
}

/// How log(0) is represented.
///
/// Sentinel stores -inf, so exp() maps it back to exactly 0. FiniteFloor
/// stores log(SNN^2) of the backing format (SNN = smallest normal number),
/// a finite value whose exponential underflows to zero.
struct ZeroPolicy {
  enum class Mode { Sentinel, FiniteFloor };
  Mode mode = Mode::Sentinel;

  static constexpr ZeroPolicy sentinel() noexcept { return {Mode::Sentinel}; }
  static constexpr ZeroPolicy finite_floor() noexcept { return {Mode::FiniteFloor}; }
};

/// log(SNN^2) for the backing format: about -174.7 for binary32 and
/// -1416.79 for binary64.
template <std::floating_point T>
inline T finite_floor_value() noexcept {
  return T(2) * std::log(std::numeric_limits<T>::min());
}

template <std::floating_point T>
struct Goom {
  using value_type = T;

  T log_mag = -std::numeric_limits<T>::infinity();
  Sign sign = Sign::Positive;

  constexpr Goom() noexcept = default;
  constexpr Goom(T lm, Sign s) noexcept : log_mag(lm), sign(s) {}

  static Goom zero(ZeroPolicy policy = {}) noexcept {
    if (policy.mode == ZeroPolicy::Mode::FiniteFloor) return {finite_floor_value<T>(), Sign::Positive};
    return {};
  }

  /// True only for the -inf sentinel. A finite floor is an (extremely
  /// small) ordinary magnitude as far as arithmetic is concerned.
  constexpr bool is_zero() const noexcept { return log_mag == -std::numeric_limits<T>::infinity(); }

  constexpr bool is_finite() const noexcept { return std::isfinite(log_mag); }

  friend constexpr bool operator==(const Goom& a, const Goom& b) noexcept {
    if (a.is_zero() && b.is_zero()) return true;
    return a.log_mag == b.log_mag && a.sign == b.sign;
  }
};

using Goom32 = Goom<float>;
using Goom64 = Goom<double>;

/// Maps a finite real to its GOOM. Throws std::domain_error on NaN or inf.
template <std::floating_point T>
Goom<T> from_real(T x, ZeroPolicy policy = {}) {
  if (std::isnan(x)) throw std::domain_error("from_real: NaN input");
  if (std::isinf(x)) throw std::domain_error("from_real: infinite input");
  if (x == T(0)) return Goom<T>::zero(policy);
  return {std::log(std::abs(x)), x < T(0) ? Sign::Negative : Sign::Positive};
}

/// sign * exp(log_mag). Overflows to a signed infinity when the magnitude
/// exceeds the backing format; scale first when that matters.
template <std::floating_point T>
T to_real(const Goom<T>& g) noexcept {
  return to_factor<T>(g.sign) * std::exp(g.log_mag);
}

template <std::floating_point T>
Goom<T> gmul(const Goom<T>& a, const Goom<T>& b) noexcept {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.log_mag + b.log_mag, a.sign * b.sign};
}

template <std::floating_point T>
Goom<T> operator*(const Goom<T>& a, const Goom<T>& b) noexcept {
  return gmul(a, b);
}

/// Signed two-term log-sum-exp. Exact cancellation gives the zero Goom.
template <std::floating_point T>
Goom<T> gadd(const Goom<T>& a, const Goom<T>& b, ZeroPolicy policy = {}) noexcept {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const bool a_larger = a.log_mag >= b.log_mag;
  const Goom<T>& hi = a_larger ? a : b;
  const Goom<T>& lo = a_larger ? b : a;
  const T ratio = std::exp(lo.log_mag - hi.log_mag);  // in [0, 1]
  if (hi.sign == lo.sign) return {hi.log_mag + std::log1p(ratio), hi.sign};
  if (ratio == T(1)) return Goom<T>::zero(policy);
  return {hi.log_mag + std::log1p(-ratio), hi.sign};
}

template <std::floating_point T>
Goom<T> operator+(const Goom<T>& a, const Goom<T>& b) noexcept {
  return gadd(a, b);
}

template <std::floating_point T>
Goom<T> negate(const Goom<T>& g) noexcept {
  if (g.is_zero()) return g;
  return {g.log_mag, g.sign * Sign::Negative};
}

/// Signed log-sum-exp over all terms with a single max shift. The shifted
/// terms are accumulated with Neumaier compensation.
template <std::floating_point T>
Goom<T> lse_reduce(std::span<const Goom<T>> terms, ZeroPolicy policy = {}) {
  if (terms.empty()) throw std::invalid_argument("lse_reduce: empty sequence");
  T m = -std::numeric_limits<T>::infinity();
  for (const auto& g : terms) m = std::max(m, g.log_mag);
  if (m == -std::numeric_limits<T>::infinity()) return Goom<T>::zero(policy);

  T sum = 0;
  T comp = 0;
  for (const auto& g : terms) {
    if (g.is_zero()) continue;
    const T v = to_factor<T>(g.sign) * std::exp(g.log_mag - m);
    const T t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  sum += comp;
  if (sum == T(0)) return Goom<T>::zero(policy);
  return {m + std::log(std::abs(sum)), sum < T(0) ? Sign::Negative : Sign::Positive};
}

/// |a - b| / max(|a|, |b|, 1) on log-magnitudes; 0 when both are zero.
template <std::floating_point T>
T relative_log_diff(const Goom<T>& a, const Goom<T>& b) noexcept {
  if (a.is_zero() && b.is_zero()) return 0;
  if (a.is_zero() || b.is_zero()) return std::numeric_limits<T>::infinity();
  const T scale = std::max({std::abs(a.log_mag), std::abs(b.log_mag), T(1)});
  return std::abs(a.log_mag - b.log_mag) / scale;
}

}  // namespace goom
