#pragma once

// Matrix functions over complex matrices. Every function that has a fast
// algorithm also keeps its combinatorial definition as a `_ref` routine so the
// two can be checked against each other.

#include <span>
#include <vector>

#include "photonstats/linalg.hpp"

namespace photonstats {

/// A 2*ell x 2*ell matrix read in the block form
///   [[M*, N + c I], [N^T + c I, M]],   c = (1 - s) / 2
/// where vertex k and vertex k + ell belong to mode k.
class BlockAdjacency {
 public:
  /// Throws DomainError unless `matrix` is square, finite and of even size.
  explicit BlockAdjacency(CMatrix matrix);

  /// [[M*, N], [N^T, M]] from ell x ell blocks.
  static BlockAdjacency from_blocks(const CMatrix& n_mat, const CMatrix& m_mat);

  int ell() const { return ell_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  CMatrix matrix_;
  int ell_;
};

// Size guards.
inline constexpr int kMaxHafnianDim = 16;
inline constexpr int kMaxLoopHafnianDim = 14;
inline constexpr int kMaxPermanentDim = 20;
inline constexpr int kMaxHamiltonianDim = 11;
inline constexpr int kMaxMontrealerRefModes = 8;
inline constexpr int kMaxLoopMontrealerRefModes = 7;
inline constexpr int kMaxMontrealerFastModes = 18;
inline constexpr int kMaxLoopMontrealerFastModes = 16;
inline constexpr int kMaxReductionDim = 24;

/// Relative tolerance on |Q - Q^T| for hafnian-family inputs.
inline constexpr double kSymmetryTolerance = 1e-9;

/// Copy of `a` with its diagonal replaced by `v`.
CMatrix fdiag(const CMatrix& a, const CVector& v);

/// Repeats row/column i of `a` k[i] times (k[i] = 0 drops it), in index order.
CMatrix reduction(const CMatrix& a, std::span<const int> k);
CVector reduction(const CVector& v, std::span<const int> k);

/// Sum over loop-free perfect matchings of the product of Q_ij. Diagonal
/// entries are ignored. haf of the 0 x 0 matrix is 1.
Complex hafnian(const CMatrix& q);

/// Sum over matchings with loops; a loop on vertex i contributes Q_ii.
Complex loop_hafnian(const CMatrix& q);

/// Ryser inclusion-exclusion with Gray-code updates, O(2^n n).
Complex permanent(const CMatrix& b);

/// Reference permanent by summing over all n! permutations (n <= 9).
Complex permanent_ref(const CMatrix& b);

/// Sum over the (n-1)! single-cycle permutations of prod B_{i, sigma(i)}.
Complex hamiltonian_cycle_poly(const CMatrix& b);

/// [[0, B], [B^T, 0]], the bipartite embedding used by the permanent and
/// Hamiltonian-cycle identities.
CMatrix bipartite_embedding(const CMatrix& b);

/// Brute-force Montrealer: sum over RPMP(ell) of prod A_ij.
Complex montrealer_ref(const BlockAdjacency& a);

/// Brute-force loop Montrealer: sum over RSPM(ell); a loop on vertex v
/// contributes loop_weights[v] (the conjugated mean vector for a Gaussian state).
Complex loop_montrealer_ref(const BlockAdjacency& a, const CVector& loop_weights);

/// Power-trace Montrealer
///   mtl A = 1/(2 ell) sum_{S subset [ell]} (-1)^(|S| + ell) tr[ Sigma[S]^ell ],
/// Sigma = X A, Sigma[S] keeping rows/columns S and S + ell. The empty subset
/// contributes 0. Subsets are evaluated in parallel; the reduction order is
/// fixed, so the result does not depend on the thread count.
Complex montrealer_fast(const BlockAdjacency& a);

/// Power-trace loop Montrealer. On top of the closed-walk trace term each
/// subset contributes the open-walk quadratic form
///   1/2 z[S]^T Sigma[S]^(ell-1) (X z)[S],
/// which carries exactly one factor per mode and so survives the
/// inclusion-exclusion alongside the trace.
Complex loop_montrealer_fast(const BlockAdjacency& a, const CVector& loop_weights);

/// tr(P^power) by binary powering, finishing with a trace of a product
/// instead of a last multiplication.
Complex trace_of_power(const CMatrix& p, int power);

}  // namespace photonstats
