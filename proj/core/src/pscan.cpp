#include "goom/pscan.hpp"

#include <stdexcept>
#include <string>

#include "goom/parallel.hpp"

namespace goom {

template <std::floating_point T>
ScanPair<T>::ScanPair(GoomMatrix<T> a, GoomMatrix<T> b) : A(std::move(a)), B(std::move(b)) {
  if (A.rows() != B.rows()) {
    throw std::invalid_argument("ScanPair: transition has " + std::to_string(A.rows()) + " rows but bias has " +
                                std::to_string(B.rows()));
  }
  zero_bias = B.all_zero();
}

template <std::floating_point T>
ScanPair<T> ScanPair<T>::transition(GoomMatrix<T> a, std::size_t bias_cols) {
  const std::size_t rows = a.rows();
  return ScanPair(std::move(a), GoomMatrix<T>::zeros(rows, bias_cols));
}

template <std::floating_point T>
GoomMatrix<T> ScanPair<T>::state() const {
  if (zero_bias) return A;
  if (reset_applied) return B;
  return gadd(A, B);
}

template <std::floating_point T>
ScanPair<T> combine_affine(const ScanPair<T>& prev, const ScanPair<T>& curr) {
  if (curr.A.cols() != prev.A.rows() || curr.B.cols() != prev.B.cols()) {
    throw std::invalid_argument("combine: incompatible pair shapes (curr A " + std::to_string(curr.A.rows()) + "x" +
                                std::to_string(curr.A.cols()) + ", prev A " + std::to_string(prev.A.rows()) + "x" +
                                std::to_string(prev.A.cols()) + ")");
  }
  ScanPair<T> out;
  out.reset_applied = prev.reset_applied || curr.reset_applied;
  out.A = prev.reset_applied ? GoomMatrix<T>::zeros(curr.A.rows(), prev.A.cols()) : lmme(curr.A, prev.A);
  if (prev.zero_bias) {
    out.B = curr.B;
    out.zero_bias = curr.zero_bias;
  } else {
    out.B = gadd(lmme(curr.A, prev.B), curr.B);
    out.zero_bias = out.B.all_zero();
  }
  return out;
}

template <std::floating_point T>
Combiner<T> affine_combiner() {
  return [](ScanPair<T>& prev, const ScanPair<T>& curr) { return combine_affine(prev, curr); };
}

template <std::floating_point T>
Combiner<T> combine_selective(ResetPolicy<T> policy) {
  if (!policy.select || !policy.reset) throw std::invalid_argument("combine_selective: policy needs select and reset");
  return [policy = std::move(policy)](ScanPair<T>& prev, const ScanPair<T>& curr) {
    if (!prev.reset_applied && prev.zero_bias && !prev.A.all_zero() && policy.select(prev.A)) {
      GoomMatrix<T> replacement = policy.reset(prev.A);
      if (replacement.rows() != prev.B.rows() || replacement.cols() != prev.B.cols())
        throw std::invalid_argument("combine_selective: reset output shape differs from the bias shape");
      prev.A = GoomMatrix<T>::zeros(prev.A.rows(), prev.A.cols());
      prev.B = std::move(replacement);
      prev.reset_applied = true;
      prev.zero_bias = prev.B.all_zero();
    }
    return combine_affine(prev, curr);
  };
}

namespace {

template <std::floating_point T>
void check_leaves(std::span<const ScanPair<T>> leaves) {
  if (leaves.empty()) throw std::invalid_argument("scan: empty leaf sequence");
}

// Applies one combine at slot `dst` with operand slot `src`, recording a
// reset when the stored operand flips to reset_applied.
template <std::floating_point T>
void combine_into(std::vector<ScanPair<T>>& a, std::vector<char>& reset_flags, std::size_t src, std::size_t dst,
                  const Combiner<T>& combine) {
  const bool was_reset = a[src].reset_applied;
  a[dst] = combine(a[src], a[dst]);
  if (!was_reset && a[src].reset_applied) reset_flags[src] = 1;
}

template <std::floating_point T>
ScanResult<T> collect(std::vector<ScanPair<T>> a, const std::vector<char>& reset_flags) {
  ScanResult<T> out;
  out.prefixes = std::move(a);
  for (std::size_t i = 0; i < reset_flags.size(); ++i)
    if (reset_flags[i]) out.reset_sites.push_back(i);
  return out;
}

template <std::floating_point T>
void tree_recurse(std::vector<ScanPair<T>>& a, std::vector<char>& flags, std::size_t offset, std::size_t stride,
                  std::size_t count, const Combiner<T>& combine) {
  if (count <= 1) return;
  auto at = [&](std::size_t k) { return offset + k * stride; };
  for (std::size_t k = 1; k < count; k += 2) combine_into(a, flags, at(k - 1), at(k), combine);
  tree_recurse(a, flags, at(1), 2 * stride, count / 2, combine);
  for (std::size_t k = 2; k < count; k += 2) combine_into(a, flags, at(k - 1), at(k), combine);
}

}  // namespace

template <std::floating_point T>
ScanResult<T> scan_sequential(std::span<const ScanPair<T>> leaves, const Combiner<T>& combine) {
  check_leaves(leaves);
  std::vector<ScanPair<T>> a(leaves.begin(), leaves.end());
  std::vector<char> flags(a.size(), 0);
  for (std::size_t t = 1; t < a.size(); ++t) combine_into(a, flags, t - 1, t, combine);
  return collect(std::move(a), flags);
}

template <std::floating_point T>
ScanResult<T> scan_parallel(std::span<const ScanPair<T>> leaves, const Combiner<T>& combine, std::size_t block_size,
                            int workers) {
  check_leaves(leaves);
  if (block_size == 0) throw std::invalid_argument("scan_parallel: block_size must be at least 1");
  std::vector<ScanPair<T>> a(leaves.begin(), leaves.end());
  std::vector<char> flags(a.size(), 0);
  const std::size_t n = a.size();

  // Up-sweep: slot i = 2s-1 + 2sk accumulates the aligned block ending at i.
  std::size_t top = 1;
  for (std::size_t s = 1; s < n; s *= 2) {
    top = s;
    const std::size_t first = 2 * s - 1;
    if (first >= n) break;
    const std::size_t count = (n - 1 - first) / (2 * s) + 1;
    parallel_for(count, workers, block_size, [&](std::size_t k) {
      const std::size_t i = first + k * 2 * s;
      combine_into(a, flags, i - s, i, combine);
    });
  }

  // Down-sweep: slot i = 3s-1 + 2sk composes the finished prefix at i-s.
  for (std::size_t s = top; s >= 1; s /= 2) {
    const std::size_t first = 3 * s - 1;
    if (first < n) {
      const std::size_t count = (n - 1 - first) / (2 * s) + 1;
      parallel_for(count, workers, block_size, [&](std::size_t k) {
        const std::size_t i = first + k * 2 * s;
        combine_into(a, flags, i - s, i, combine);
      });
    }
    if (s == 1) break;
  }
  return collect(std::move(a), flags);
}

template <std::floating_point T>
ScanResult<T> scan_tree_reference(std::span<const ScanPair<T>> leaves, const Combiner<T>& combine) {
  check_leaves(leaves);
  std::vector<ScanPair<T>> a(leaves.begin(), leaves.end());
  std::vector<char> flags(a.size(), 0);
  tree_recurse(a, flags, 0, 1, a.size(), combine);
  return collect(std::move(a), flags);
}

#define GOOM_INSTANTIATE_PSCAN(T)                                                                        \
  template struct ScanPair<T>;                                                                           \
  template ScanPair<T> combine_affine<T>(const ScanPair<T>&, const ScanPair<T>&);                        \
  template Combiner<T> affine_combiner<T>();                                                             \
  template Combiner<T> combine_selective<T>(ResetPolicy<T>);                                             \
  template ScanResult<T> scan_sequential<T>(std::span<const ScanPair<T>>, const Combiner<T>&);           \
  template ScanResult<T> scan_parallel<T>(std::span<const ScanPair<T>>, const Combiner<T>&, std::size_t, \
                                          int);                                                          \
  template ScanResult<T> scan_tree_reference<T>(std::span<const ScanPair<T>>, const Combiner<T>&);

GOOM_INSTANTIATE_PSCAN(float)
GOOM_INSTANTIATE_PSCAN(double)

#undef GOOM_INSTANTIATE_PSCAN

}  // namespace goom
