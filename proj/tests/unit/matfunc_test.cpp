#include <photonstats/errors.hpp>
#include <photonstats/matchings.hpp>
#include <photonstats/matfunc.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "random_states.hpp"

namespace photonstats {
namespace {

using testing::close;

CMatrix ones(int n) { return CMatrix::Constant(n, n, Complex(1.0, 0.0)); }

// Hafnian straight from the PMP list; shares nothing with the recursion.
Complex hafnian_by_enumeration(const CMatrix& q) {
  Complex total{0.0, 0.0};
  for (const auto& x : gen_pmp(static_cast<int>(q.rows()))) {
    Complex p{1.0, 0.0};
    for (auto [i, j] : x.pairs()) p *= q(i, j);
    total += p;
  }
  return total;
}

Complex loop_hafnian_by_enumeration(const CMatrix& q) {
  Complex total{0.0, 0.0};
  for (const auto& x : gen_spm(static_cast<int>(q.rows()))) {
    Complex p{1.0, 0.0};
    for (auto [i, j] : x.pairs()) p *= q(i, j);
    for (int v : x.loops()) p *= q(v, v);
    total += p;
  }
  return total;
}

TEST(Fdiag, ReplacesDiagonalOnly) {
  EXPECT_TRUE(fdiag(CMatrix::Identity(2, 2), CVector::Zero(2)).isZero());
  CVector v(2);
  v << 3.0, 4.0;
  const CMatrix d = fdiag(CMatrix::Zero(2, 2), v);
  EXPECT_EQ(d(0, 0), Complex(3.0));
  EXPECT_EQ(d(1, 1), Complex(4.0));
  EXPECT_EQ(d(0, 1), Complex(0.0));

  Rng rng(1);
  const CMatrix a = testing::random_matrix(4, rng);
  const CMatrix b = fdiag(a, testing::random_vector(4, rng));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) EXPECT_EQ(a(i, j), b(i, j));
    }
  }
  EXPECT_THROW(fdiag(a, CVector::Zero(3)), DomainError);
}

TEST(Reduction, RepeatsRowsAndColumns) {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const std::vector<int> identity{1, 1};
  EXPECT_EQ(reduction(a, identity), a);
  const std::vector<int> first{2, 0};
  EXPECT_EQ(reduction(a, first), CMatrix::Constant(2, 2, 1.0));
  const std::vector<int> k{1, 2};
  CMatrix want(3, 3);
  want << 1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 3.0, 4.0, 4.0;
  EXPECT_EQ(reduction(a, k), want);

  CVector v(2);
  v << 5.0, 6.0;
  CVector vw(3);
  vw << 5.0, 6.0, 6.0;
  EXPECT_EQ(reduction(v, k), vw);

  const std::vector<int> negative{1, -1};
  EXPECT_THROW(reduction(a, negative), DomainError);
  const std::vector<int> big{13, 12};
  EXPECT_THROW(reduction(a, big), ResourceError);
}

TEST(Hafnian, KnownValues) {
  CMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(hafnian(x), Complex(1.0));
  EXPECT_NEAR(hafnian(ones(4)).real(), 3.0, 1e-12);
  EXPECT_NEAR(hafnian(ones(6)).real(), 15.0, 1e-12);
  EXPECT_EQ(hafnian(CMatrix(0, 0)), Complex(1.0));

  // Frozen from an independent enumeration: Hilbert-type H_ij = 1/(i+j+1).
  CMatrix h(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) h(i, j) = 1.0 / (i + j + 1);
  }
  EXPECT_NEAR(hafnian(h).real(), 0.089351930587049627, 1e-15);
}

TEST(Hafnian, Errors) {
  EXPECT_THROW(hafnian(ones(3)), DomainError);
  CMatrix asym = ones(4);
  asym(0, 1) = 2.0;
  EXPECT_THROW(hafnian(asym), DomainError);
  EXPECT_THROW(hafnian(ones(kMaxHafnianDim + 2)), ResourceError);
}

TEST(Hafnian, MatchesEnumeration) {
  Rng rng(2);
  for (int n = 2; n <= 10; n += 2) {
    const CMatrix q = testing::random_symmetric(n, rng);
    EXPECT_TRUE(close(hafnian(q), hafnian_by_enumeration(q), 1e-12)) << "n=" << n;
  }
}

TEST(LoopHafnian, KnownValues) {
  EXPECT_NEAR(loop_hafnian(ones(2)).real(), 2.0, 1e-12);
  EXPECT_NEAR(loop_hafnian(ones(4)).real(), 10.0, 1e-12);
  EXPECT_NEAR(loop_hafnian(fdiag(ones(4), CVector::Zero(4))).real(), 3.0, 1e-12);

  CMatrix l(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) l(i, j) = Complex(i + j + 1, i * j - 1);
  }
  EXPECT_TRUE(close(loop_hafnian(l), Complex(642.0, 360.0), 1e-14));
}

TEST(LoopHafnian, MatchesEnumerationAndReducesToHafnian) {
  Rng rng(3);
  for (int n = 2; n <= 10; n += 2) {
    const CMatrix q = testing::random_symmetric(n, rng);
    EXPECT_TRUE(close(loop_hafnian(q), loop_hafnian_by_enumeration(q), 1e-12));
    const CMatrix z = fdiag(q, CVector::Zero(n));
    EXPECT_LE(std::abs(loop_hafnian(z) - hafnian(z)), 1e-12 * std::max(1.0, std::abs(hafnian(z))));
  }
  EXPECT_THROW(loop_hafnian(ones(kMaxLoopHafnianDim + 2)), ResourceError);
}

TEST(Permanent, KnownValuesAndIdentities) {
  EXPECT_NEAR(permanent(CMatrix::Identity(3, 3)).real(), 1.0, 1e-14);
  EXPECT_NEAR(permanent(ones(3)).real(), 6.0, 1e-12);
  CMatrix b(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) b(i, j) = Complex((i + 1) * (j + 2) % 7, i - j);
  }
  EXPECT_TRUE(close(permanent(b), Complex(144712.0, 22400.0), 1e-14));

  Rng rng(4);
  for (int n = 1; n <= 7; ++n) {
    const CMatrix r = testing::random_matrix(n, rng);
    EXPECT_TRUE(close(permanent(r), permanent_ref(r), 1e-11)) << "n=" << n;
    if (n <= 6) EXPECT_TRUE(close(permanent(r), hafnian(bipartite_embedding(r)), 1e-11));
  }
  EXPECT_THROW(permanent(ones(kMaxPermanentDim + 1)), ResourceError);
}

TEST(HamiltonianCycle, KnownValues) {
  EXPECT_NEAR(hamiltonian_cycle_poly(ones(4)).real(), 6.0, 1e-12);
  for (int n = 2; n <= 6; ++n) {
    EXPECT_EQ(hamiltonian_cycle_poly(CMatrix::Identity(n, n)), Complex(0.0));
  }
  CMatrix b(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) b(i, j) = Complex((i + 1) * (j + 2) % 7, i - j);
  }
  EXPECT_TRUE(close(hamiltonian_cycle_poly(b), Complex(23514.0, 1434.0), 1e-14));
  EXPECT_THROW(hamiltonian_cycle_poly(ones(kMaxHamiltonianDim + 1)), ResourceError);
}

TEST(HamiltonianCycle, EqualsMontrealerOfEmbedding) {
  Rng rng(5);
  for (int n = 1; n <= 7; ++n) {
    const CMatrix b = testing::random_matrix(n, rng);
    const BlockAdjacency a(bipartite_embedding(b));
    EXPECT_TRUE(close(montrealer_fast(a), hamiltonian_cycle_poly(b), 1e-10)) << "n=" << n;
    if (n <= 6) EXPECT_TRUE(close(montrealer_ref(a), hamiltonian_cycle_poly(b), 1e-10));
  }
}

CMatrix frozen_block_matrix() {
  CMatrix a(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      a(i, j) = Complex(std::cos(i + 2 * j + i * j), std::sin(3 * i + j - i * j));
    }
  }
  return 0.5 * (a + a.transpose()).eval();
}

TEST(Montrealer, FrozenValues) {
  const BlockAdjacency a(frozen_block_matrix());
  const Complex mtl(-0.31875306713390084, 0.28320055409323447);
  EXPECT_TRUE(close(montrealer_ref(a), mtl, 1e-13));
  EXPECT_TRUE(close(montrealer_fast(a), mtl, 1e-13));

  CVector z(6);
  for (int k = 0; k < 6; ++k) z(k) = Complex(0.1 * k, -0.2 + 0.05 * k);
  const Complex lmtl(-0.37211928839935515, 0.22256460862275293);
  EXPECT_TRUE(close(loop_montrealer_ref(a, z), lmtl, 1e-13));
  EXPECT_TRUE(close(loop_montrealer_fast(a, z), lmtl, 1e-13));
}

TEST(Montrealer, SmallCases) {
  EXPECT_NEAR(montrealer_ref(BlockAdjacency(ones(4))).real(), 2.0, 1e-14);
  EXPECT_NEAR(montrealer_fast(BlockAdjacency(ones(4))).real(), 2.0, 1e-12);

  // Thermal pair: mtl = |c|^2.
  CMatrix n(2, 2);
  const Complex c(0.3, -0.4);
  n << 0.7, c, std::conj(c), 0.9;
  const BlockAdjacency a = BlockAdjacency::from_blocks(n, CMatrix::Zero(2, 2));
  EXPECT_NEAR(montrealer_ref(a).real(), std::norm(c), 1e-14);
  EXPECT_NEAR(montrealer_fast(a).real(), std::norm(c), 1e-14);
}

TEST(Montrealer, FastMatchesReference) {
  Rng rng(6);
  for (int ell = 1; ell <= 6; ++ell) {
    for (int trial = 0; trial < 10; ++trial) {
      const BlockAdjacency a = testing::random_block_adjacency(ell, rng);
      const CVector z = testing::random_vector(2 * ell, rng);
      EXPECT_TRUE(close(montrealer_fast(a), montrealer_ref(a), 1e-9)) << "ell=" << ell;
      EXPECT_TRUE(close(loop_montrealer_fast(a, z), loop_montrealer_ref(a, z), 1e-9)) << "ell=" << ell;
      const CVector zero = CVector::Zero(2 * ell);
      EXPECT_TRUE(close(loop_montrealer_ref(a, zero), montrealer_ref(a), 1e-12));
      EXPECT_TRUE(close(loop_montrealer_fast(a, zero), montrealer_fast(a), 1e-12));
    }
  }
}

TEST(Montrealer, Guards) {
  Rng rng(7);
  EXPECT_THROW(montrealer_ref(testing::random_block_adjacency(kMaxMontrealerRefModes + 1, rng)),
               ResourceError);
  const auto big = testing::random_block_adjacency(kMaxLoopMontrealerRefModes + 1, rng);
  EXPECT_THROW(loop_montrealer_ref(big, CVector::Zero(big.matrix().rows())), ResourceError);
  EXPECT_THROW(loop_montrealer_fast(big, CVector::Zero(3)), DomainError);
  EXPECT_THROW(BlockAdjacency(ones(3)), DomainError);
}

TEST(Montrealer, ScalingByLocalPhasesAndMagnitudes) {
  Rng rng(8);
  for (int ell = 1; ell <= 5; ++ell) {
    const BlockAdjacency a = testing::random_block_adjacency(ell, rng);
    const CVector lambda = testing::random_vector(ell, rng);
    CVector d(2 * ell);
    d << lambda, lambda.conjugate();
    const BlockAdjacency scaled(d.asDiagonal() * a.matrix() * d.asDiagonal());
    double factor = 1.0;
    for (int i = 0; i < ell; ++i) factor *= std::norm(lambda(i));
    EXPECT_TRUE(close(montrealer_fast(scaled), factor * montrealer_fast(a), 1e-9));
  }
}

TEST(Montrealer, PermutationInvariance) {
  Rng rng(9);
  for (int ell = 2; ell <= 5; ++ell) {
    const BlockAdjacency a = testing::random_block_adjacency(ell, rng);
    std::vector<int> perm(static_cast<std::size_t>(ell));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CMatrix p = CMatrix::Zero(2 * ell, 2 * ell);
    for (int i = 0; i < ell; ++i) {
      p(i, perm[static_cast<std::size_t>(i)]) = 1.0;
      p(i + ell, perm[static_cast<std::size_t>(i)] + ell) = 1.0;
    }
    const BlockAdjacency b(p * a.matrix() * p.transpose());
    EXPECT_TRUE(close(montrealer_fast(b), montrealer_fast(a), 1e-9));
  }
}

TEST(Montrealer, DirectSumVanishes) {
  Rng rng(10);
  for (int ell = 2; ell <= 5; ++ell) {
    CMatrix a = testing::random_block_adjacency(ell, rng).matrix();
    // Modes below `split` never couple to modes at or above it.
    const int split = 1 + static_cast<int>(rng() % static_cast<unsigned>(ell - 1));
    for (int i = 0; i < 2 * ell; ++i) {
      for (int j = 0; j < 2 * ell; ++j) {
        if (((i % ell) < split) != ((j % ell) < split)) a(i, j) = 0.0;
      }
    }
    EXPECT_EQ(montrealer_ref(BlockAdjacency(a)), Complex(0.0));
    EXPECT_LE(std::abs(montrealer_fast(BlockAdjacency(a))), 1e-10);
  }
}

TEST(Montrealer, IndependentOfBlockDiagonals) {
  Rng rng(11);
  for (int ell = 2; ell <= 5; ++ell) {
    const BlockAdjacency a = testing::random_block_adjacency(ell, rng);
    CMatrix b = a.matrix();
    for (int i = 0; i < ell; ++i) {
      const Complex dm = testing::random_complex(rng);
      const Complex dn = testing::random_complex(rng);
      b(i, i) += std::conj(dm);
      b(i + ell, i + ell) += dm;
      b(i, i + ell) += dn;
      b(i + ell, i) += dn;
    }
    EXPECT_TRUE(close(montrealer_fast(BlockAdjacency(b)), montrealer_fast(a), 1e-9));
  }
}

TEST(Montrealer, OddModesWithDiagonalNVanish) {
  Rng rng(12);
  for (int ell : {3, 5}) {
    const CMatrix m = testing::random_symmetric(ell, rng);
    CMatrix n = CMatrix::Zero(ell, ell);
    for (int i = 0; i < ell; ++i) n(i, i) = 0.5 + i;
    const BlockAdjacency a = BlockAdjacency::from_blocks(n, m);
    EXPECT_LE(std::abs(montrealer_fast(a)), 1e-10);
    EXPECT_LE(std::abs(montrealer_ref(a)), 1e-10);
  }
}

TEST(TraceOfPower, MatchesRepeatedProduct) {
  Rng rng(13);
  const CMatrix p = testing::random_matrix(5, rng);
  CMatrix acc = CMatrix::Identity(5, 5);
  for (int k = 0; k <= 7; ++k) {
    EXPECT_TRUE(close(trace_of_power(p, k), acc.trace(), 1e-12)) << "k=" << k;
    acc = acc * p;
  }
}

}  // namespace
}  // namespace photonstats
