#include "photonstats/matfunc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "photonstats/errors.hpp"
#include "photonstats/matchings.hpp"
#include "photonstats/parallel.hpp"

namespace photonstats {

void require_square_finite(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DomainError(std::string(what) + ": matrix is not square (" + std::to_string(a.rows()) +
                      "x" + std::to_string(a.cols()) + ")");
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError(std::string(what) + ": matrix has a non-finite entry");
    }
  }
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

CMatrix swap_halves(int ell) {
  CMatrix x = CMatrix::Zero(2 * ell, 2 * ell);
  x.topRightCorner(ell, ell).setIdentity();
  x.bottomLeftCorner(ell, ell).setIdentity();
  return x;
}

namespace {

void require_guard(Eigen::Index dim, int guard, const char* what) {
  if (dim > guard) {
    throw ResourceError(std::string(what) + ": dimension " + std::to_string(dim) +
                        " exceeds the guard of " + std::to_string(guard));
  }
}

void require_even(Eigen::Index dim, const char* what) {
  if (dim % 2 != 0) {
    throw DomainError(std::string(what) + ": dimension must be even, got " + std::to_string(dim));
  }
}

void require_symmetric(const CMatrix& q, const char* what) {
  const double tol = kSymmetryTolerance * std::max(1.0, max_abs(q));
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < q.cols(); ++j) {
      if (std::abs(q(i, j) - q(j, i)) > tol) {
        throw DomainError(std::string(what) + ": matrix is not symmetric at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

// Sum over matchings of the vertices in `free` (bitmask); the lowest free
// vertex is paired with every other free vertex, or looped.
Complex matching_sum(const CMatrix& q, std::uint32_t free, bool loops) {
  if (free == 0) return {1.0, 0.0};
  const int i = std::countr_zero(free);
  free &= free - 1;
  Complex s = loops ? q(i, i) * matching_sum(q, free, loops) : Complex{0.0, 0.0};
  for (std::uint32_t rest = free; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    s += q(i, j) * matching_sum(q, free & ~(1u << j), loops);
  }
  return s;
}

std::uint32_t full_mask(Eigen::Index n) {
  return n == 32 ? ~0u : (1u << n) - 1u;
}

CMatrix principal_submatrix(const CMatrix& a, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  CMatrix out(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) out(r, c) = a(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  }
  return out;
}

// Rows/columns {i in S} followed by {i + ell : i in S}.
std::vector<int> doubled_indices(std::uint32_t subset, int ell) {
  std::vector<int> idx;
  for (int i = 0; i < ell; ++i) {
    if ((subset >> i) & 1u) idx.push_back(i);
  }
  const std::size_t k = idx.size();
  for (std::size_t t = 0; t < k; ++t) idx.push_back(idx[t] + ell);
  return idx;
}

CMatrix matrix_power(const CMatrix& p, int power) {
  CMatrix result = CMatrix::Identity(p.rows(), p.cols());
  CMatrix base = p;
  while (power > 0) {
    if (power & 1) result = result * base;
    power >>= 1;
    if (power > 0) base = base * base;
  }
  return result;
}

void require_loop_weights(const BlockAdjacency& a, const CVector& z, const char* what) {
  if (z.size() != 2 * a.ell()) {
    throw DomainError(std::string(what) + ": expected " + std::to_string(2 * a.ell()) +
                      " loop weights, got " + std::to_string(z.size()));
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z(i).real()) || !std::isfinite(z(i).imag())) {
      throw DomainError(std::string(what) + ": non-finite loop weight");
    }
  }
}

}  // namespace

BlockAdjacency::BlockAdjacency(CMatrix matrix) : matrix_(std::move(matrix)) {
  require_square_finite(matrix_, "BlockAdjacency");
  require_even(matrix_.rows(), "BlockAdjacency");
  if (matrix_.rows() == 0) throw DomainError("BlockAdjacency: empty matrix");
  ell_ = static_cast<int>(matrix_.rows() / 2);
}

BlockAdjacency BlockAdjacency::from_blocks(const CMatrix& n_mat, const CMatrix& m_mat) {
  if (n_mat.rows() != n_mat.cols() || m_mat.rows() != m_mat.cols() ||
      n_mat.rows() != m_mat.rows()) {
    throw DomainError("BlockAdjacency::from_blocks: N and M must be square and of equal size");
  }
  const Eigen::Index l = n_mat.rows();
  CMatrix a(2 * l, 2 * l);
  a.topLeftCorner(l, l) = m_mat.conjugate();
  a.topRightCorner(l, l) = n_mat;
  a.bottomLeftCorner(l, l) = n_mat.transpose();
  a.bottomRightCorner(l, l) = m_mat;
  return BlockAdjacency(std::move(a));
}

CMatrix fdiag(const CMatrix& a, const CVector& v) {
  require_square_finite(a, "fdiag");
  if (v.size() != a.rows()) {
    throw DomainError("fdiag: vector length " + std::to_string(v.size()) +
                      " does not match dimension " + std::to_string(a.rows()));
  }
  CMatrix out = a;
  out.diagonal() = v;
  return out;
}

CMatrix reduction(const CMatrix& a, std::span<const int> k) {
  require_square_finite(a, "reduction");
  if (static_cast<Eigen::Index>(k.size()) != a.rows()) {
    throw DomainError("reduction: repetition vector length does not match dimension");
  }
  std::vector<int> idx;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) throw DomainError("reduction: negative repetition count");
    idx.insert(idx.end(), static_cast<std::size_t>(k[i]), static_cast<int>(i));
    if (static_cast<int>(idx.size()) > kMaxReductionDim) {
      throw ResourceError("reduction: total repetition exceeds the guard of " +
                          std::to_string(kMaxReductionDim));
    }
  }
  return principal_submatrix(a, idx);
}

CVector reduction(const CVector& v, std::span<const int> k) {
  if (static_cast<Eigen::Index>(k.size()) != v.size()) {
    throw DomainError("reduction: repetition vector length does not match dimension");
  }
  std::vector<Complex> out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) throw DomainError("reduction: negative repetition count");
    out.insert(out.end(), static_cast<std::size_t>(k[i]), v(static_cast<Eigen::Index>(i)));
    if (static_cast<int>(out.size()) > kMaxReductionDim) {
      throw ResourceError("reduction: total repetition exceeds the guard of " +
                          std::to_string(kMaxReductionDim));
    }
  }
  return Eigen::Map<const CVector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Complex hafnian(const CMatrix& q) {
  require_square_finite(q, "hafnian");
  require_even(q.rows(), "hafnian");
  require_guard(q.rows(), kMaxHafnianDim, "hafnian");
  require_symmetric(q, "hafnian");
  return matching_sum(q, full_mask(q.rows()), false);
}

Complex loop_hafnian(const CMatrix& q) {
  require_square_finite(q, "loop_hafnian");
  require_even(q.rows(), "loop_hafnian");
  require_guard(q.rows(), kMaxLoopHafnianDim, "loop_hafnian");
  require_symmetric(q, "loop_hafnian");
  return matching_sum(q, full_mask(q.rows()), true);
}

Complex permanent(const CMatrix& b) {
  require_square_finite(b, "permanent");
  require_guard(b.rows(), kMaxPermanentDim, "permanent");
  const Eigen::Index n = b.rows();
  if (n == 0) return {1.0, 0.0};

  // per B = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} B_ij, walking S in
  // Gray-code order so each step adds or removes one column.
  CVector row_sums = CVector::Zero(n);
  Complex total{0.0, 0.0};
  std::uint32_t gray = 0;
  const std::uint64_t steps = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < steps; ++k) {
    const int j = std::countr_zero(k);
    gray ^= 1u << j;
    if ((gray >> j) & 1u) {
      row_sums += b.col(j);
    } else {
      row_sums -= b.col(j);
    }
    const Complex prod = row_sums.prod();
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

Complex permanent_ref(const CMatrix& b) {
  require_square_finite(b, "permanent_ref");
  require_guard(b.rows(), 9, "permanent_ref");
  std::vector<int> sigma(static_cast<std::size_t>(b.rows()));
  std::iota(sigma.begin(), sigma.end(), 0);
  Complex total{0.0, 0.0};
  do {
    Complex prod{1.0, 0.0};
    for (std::size_t i = 0; i < sigma.size(); ++i) prod *= b(static_cast<Eigen::Index>(i), sigma[i]);
    total += prod;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

Complex hamiltonian_cycle_poly(const CMatrix& b) {
  require_square_finite(b, "hamiltonian_cycle_poly");
  require_guard(b.rows(), kMaxHamiltonianDim, "hamiltonian_cycle_poly");
  const Eigen::Index n = b.rows();
  if (n == 0) throw DomainError("hamiltonian_cycle_poly: empty matrix");
  if (n == 1) return b(0, 0);

  // Each n-cycle is written once as 0 -> c_1 -> ... -> c_{n-1} -> 0.
  std::vector<int> order(static_cast<std::size_t>(n - 1));
  std::iota(order.begin(), order.end(), 1);
  Complex total{0.0, 0.0};
  do {
    Complex prod = b(0, order.front());
    for (std::size_t t = 0; t + 1 < order.size(); ++t) prod *= b(order[t], order[t + 1]);
    prod *= b(order.back(), 0);
    total += prod;
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

CMatrix bipartite_embedding(const CMatrix& b) {
  require_square_finite(b, "bipartite_embedding");
  const Eigen::Index n = b.rows();
  CMatrix out = CMatrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = b;
  out.bottomLeftCorner(n, n) = b.transpose();
  return out;
}

Complex montrealer_ref(const BlockAdjacency& a) {
  if (a.ell() > kMaxMontrealerRefModes) {
    throw ResourceError("montrealer_ref: " + std::to_string(a.ell()) +
                        " modes exceeds the guard of " + std::to_string(kMaxMontrealerRefModes));
  }
  const CMatrix& m = a.matrix();
  const auto matchings = gen_rpmp(a.ell());
  return parallel::deterministic_sum(matchings.size(), [&](std::size_t t) {
    Complex prod{1.0, 0.0};
    for (auto [i, j] : matchings[t].pairs()) prod *= m(i, j);
    return prod;
  });
}

Complex loop_montrealer_ref(const BlockAdjacency& a, const CVector& loop_weights) {
  if (a.ell() > kMaxLoopMontrealerRefModes) {
    throw ResourceError("loop_montrealer_ref: " + std::to_string(a.ell()) +
                        " modes exceeds the guard of " +
                        std::to_string(kMaxLoopMontrealerRefModes));
  }
  require_loop_weights(a, loop_weights, "loop_montrealer_ref");
  const CMatrix& m = a.matrix();
  const auto matchings = gen_rspm(a.ell());
  return parallel::deterministic_sum(matchings.size(), [&](std::size_t t) {
    const PairMatching& x = matchings[t];
    Complex prod{1.0, 0.0};
    for (int v = 0; v < x.vertices(); ++v) {
      const int w = x.partner(v);
      if (w == v) {
        prod *= loop_weights(v);
      } else if (w > v) {
        prod *= m(v, w);
      }
    }
    return prod;
  });
}

Complex trace_of_power(const CMatrix& p, int power) {
  if (power < 0) throw DomainError("trace_of_power: negative power");
  if (power == 0) return {static_cast<double>(p.rows()), 0.0};
  if (power == 1) return p.trace();
  const int half = power / 2;
  const CMatrix low = matrix_power(p, half);
  const CMatrix high = (power - half == half) ? low : CMatrix(low * p);
  // tr(L H) = sum_ij L_ij H_ji
  return low.cwiseProduct(high.transpose()).sum();
}

namespace {

void require_fast_modes(const BlockAdjacency& a, int guard, const char* what) {
  if (a.ell() > guard) {
    throw ResourceError(std::string(what) + ": " + std::to_string(a.ell()) +
                        " modes exceeds the guard of " + std::to_string(guard));
  }
}

// Subsets are indexed by i = mask - 1 so the empty subset is skipped.
template <typename Term>
Complex alternating_subset_sum(int ell, Term term) {
  const std::size_t count = (std::size_t{1} << ell) - 1;
  return parallel::deterministic_sum(count, [&](std::size_t i) {
    const auto mask = static_cast<std::uint32_t>(i + 1);
    const Complex value = term(mask);
    return ((std::popcount(mask) + ell) % 2 == 0) ? value : -value;
  });
}

}  // namespace

Complex montrealer_fast(const BlockAdjacency& a) {
  require_fast_modes(a, kMaxMontrealerFastModes, "montrealer_fast");
  const int ell = a.ell();
  const CMatrix sigma = swap_halves(ell) * a.matrix();
  const Complex sum = alternating_subset_sum(ell, [&](std::uint32_t mask) {
    return trace_of_power(principal_submatrix(sigma, doubled_indices(mask, ell)), ell);
  });
  return sum / static_cast<double>(2 * ell);
}

Complex loop_montrealer_fast(const BlockAdjacency& a, const CVector& loop_weights) {
  require_fast_modes(a, kMaxLoopMontrealerFastModes, "loop_montrealer_fast");
  require_loop_weights(a, loop_weights, "loop_montrealer_fast");
  const int ell = a.ell();
  const CMatrix x = swap_halves(ell);
  const CMatrix sigma = x * a.matrix();
  const CVector swapped = x * loop_weights;
  return alternating_subset_sum(ell, [&](std::uint32_t mask) {
    const auto idx = doubled_indices(mask, ell);
    const CMatrix sub = principal_submatrix(sigma, idx);
    const auto k = static_cast<Eigen::Index>(idx.size());
    CVector left(k);
    CVector right(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      left(r) = loop_weights(idx[static_cast<std::size_t>(r)]);
      right(r) = swapped(idx[static_cast<std::size_t>(r)]);
    }
    for (int step = 0; step + 1 < ell; ++step) right = sub * right;
    const Complex open_walks = 0.5 * (left.transpose() * right).value();
    return trace_of_power(sub, ell) / static_cast<double>(2 * ell) + open_walks;
  });
}

}  // namespace photonstats
