#pragma once

// Prefix scans over (transition, bias) pairs of GOOM matrices.
//
// A pair (A, B) represents the affine map X -> A X + B. Composing "prev then
// curr" gives (curr.A prev.A, curr.A prev.B + curr.B), which is associative,
// so all running compositions can be computed with a work-efficient tree.
//
// The selective combiner additionally lets the scan replace an interim
// compound pair whose bias is still all zero by (0, reset(A)) whenever
// select(A) holds. The replacement is written back into the stored operand,
// so every later prefix that composes through it sees the reset value, and a
// pair can be reset at most once.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "goom/matrix.hpp"

namespace goom {

template <std::floating_point T>
struct ScanPair {
  GoomMatrix<T> A;
  GoomMatrix<T> B;
  /// A was zeroed by a selective reset somewhere in this pair's history.
  bool reset_applied = false;
  /// B holds only zero Gooms. Tracked so the reset guard never scans B.
  bool zero_bias = true;

  ScanPair() = default;
  /// Requires A.rows() == B.rows(); B may be a matrix or a column vector.
  ScanPair(GoomMatrix<T> a, GoomMatrix<T> b);

  /// Leaf with an all-zero bias of shape rows(A) x bias_cols.
  static ScanPair transition(GoomMatrix<T> a, std::size_t bias_cols);

  /// The represented value A (+) B; requires A and B to share a shape.
  GoomMatrix<T> state() const;
};

template <std::floating_point T>
struct ResetPolicy {
  std::function<bool(const GoomMatrix<T>&)> select;
  std::function<GoomMatrix<T>(const GoomMatrix<T>&)> reset;
};

/// Combiner contract: combine(prev, curr) returns the composition "prev then
/// curr". It may rewrite `prev` in place (selective reset); scans store the
/// rewritten value back. Combiners must be deterministic and thread-safe.
template <std::floating_point T>
using Combiner = std::function<ScanPair<T>(ScanPair<T>& prev, const ScanPair<T>& curr)>;

/// (curr.A prev.A, curr.A prev.B (+) curr.B). Throws std::invalid_argument on
/// incompatible shapes.
template <std::floating_point T>
ScanPair<T> combine_affine(const ScanPair<T>& prev, const ScanPair<T>& curr);

template <std::floating_point T>
Combiner<T> affine_combiner();

template <std::floating_point T>
Combiner<T> combine_selective(ResetPolicy<T> policy);

template <std::floating_point T>
struct ScanResult {
  /// Inclusive prefixes: element t composes leaves 0..t.
  std::vector<ScanPair<T>> prefixes;
  /// Indices whose stored pair was replaced by a selective reset, ascending.
  std::vector<std::size_t> reset_sites;
};

/// Left fold: prefix[t] = combine(prefix[t-1], leaf[t]).
template <std::floating_point T>
ScanResult<T> scan_sequential(std::span<const ScanPair<T>> leaves, const Combiner<T>& combine);

/// Work-efficient two-phase scan (up-sweep then down-sweep) over the implicit
/// binary tree of leaf indices, about 2n combines in 2 log2(n) rounds.
///
/// Every round's combines are independent and are handed to the worker pool
/// in chunks of `block_size` combines. The combine tree depends only on the
/// number of leaves, so the output is bitwise identical for every block size
/// and worker count.
template <std::floating_point T>
ScanResult<T> scan_parallel(std::span<const ScanPair<T>> leaves, const Combiner<T>& combine,
                            std::size_t block_size, int workers = 0);

/// Single-threaded recursive formulation of the same combine tree used by
/// scan_parallel (pair up, scan the odd positions, fill in the even ones).
/// Serves as the reference for selective scans, whose results depend on the
/// tree.
template <std::floating_point T>
ScanResult<T> scan_tree_reference(std::span<const ScanPair<T>> leaves, const Combiner<T>& combine);

}  // namespace goom
