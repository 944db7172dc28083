#include <photonstats/errors.hpp>
#include <photonstats/gaussian.hpp>

#include <cmath>

#include <gtest/gtest.h>

#include "random_states.hpp"

namespace photonstats {
namespace {

CMatrix scalar(double x) { return CMatrix::Constant(1, 1, Complex(x, 0.0)); }

TEST(GaussianState, VacuumAndThermalAreValid) {
  const GaussianState v = GaussianState::make(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), CVector::Zero(2));
  EXPECT_TRUE(sigma(v, SOrder::Symmetric).isApprox(0.5 * CMatrix::Identity(4, 4)));
  EXPECT_TRUE(sigma(v, SOrder::Normal).isZero());
  EXPECT_TRUE(sigma(v, SOrder::AntiNormal).isApprox(CMatrix::Identity(4, 4)));
  EXPECT_NO_THROW(GaussianState::make(scalar(1.0), scalar(0.0), CVector::Zero(1)));
  const GaussianState t = GaussianState::make(scalar(1.5), scalar(0.0), CVector::Zero(1));
  EXPECT_TRUE(sigma(t, SOrder::Normal).isApprox(1.5 * CMatrix::Identity(2, 2)));
}

TEST(GaussianState, RejectsUnphysicalInput) {
  const double nbar = 0.7;
  try {
    (void)GaussianState::make(scalar(nbar), scalar(nbar + 0.5), CVector::Zero(1));
    FAIL() << "over-eccentric state accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("uncertainty bound"), std::string::npos);
  }
  // Exactly pure squeezed light sits on the bound and is accepted.
  EXPECT_NO_THROW(GaussianState::make(scalar(nbar), scalar(std::sqrt(nbar * (nbar + 1))), CVector::Zero(1)));

  CMatrix n(2, 2);
  n << 1.0, Complex(0.2, 0.1), Complex(0.3, 0.0), 1.0;
  EXPECT_THROW(GaussianState::make(n, CMatrix::Zero(2, 2), CVector::Zero(2)), ValidationError);
  n << 1.0, 2.0, 2.0, 1.0;  // eigenvalue -1
  EXPECT_THROW(GaussianState::make(n, CMatrix::Zero(2, 2), CVector::Zero(2)), ValidationError);
  CMatrix m(2, 2);
  m << 0.0, 0.1, 0.2, 0.0;
  EXPECT_THROW(GaussianState::make(CMatrix::Identity(2, 2), m, CVector::Zero(2)), ValidationError);
  // N_00 = 0 forces row 0 of M to vanish.
  CMatrix n0 = CMatrix::Zero(2, 2);
  n0(1, 1) = 1.0;
  CMatrix m0 = CMatrix::Zero(2, 2);
  m0(0, 1) = m0(1, 0) = 0.1;
  EXPECT_THROW(GaussianState::make(n0, m0, CVector::Zero(2)), ValidationError);

  EXPECT_THROW(GaussianState::make(CMatrix::Zero(2, 2), CMatrix::Zero(3, 3), CVector::Zero(2)), DomainError);
  CVector bad(1);
  bad(0) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(GaussianState::make(scalar(0.0), scalar(0.0), bad), DomainError);
}

TEST(GaussianState, UncertaintyRelationHoldsForRandomStates) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const GaussianState s = testing::random_state(1 + trial % 5, rng, trial % 2 == 0);
    const int l = s.ell();
    CMatrix z = CMatrix::Identity(2 * l, 2 * l);
    z.bottomRightCorner(l, l) *= -1.0;
    const CMatrix u = sigma(s, SOrder::Normal) + 0.5 * z + 0.5 * CMatrix::Identity(2 * l, 2 * l);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(u);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
    EXPECT_TRUE(check_physical(s.n_mat(), s.m_mat()).empty());
  }
}

TEST(GaussianState, MeanVectorsAndRestriction) {
  Rng rng(22);
  const GaussianState s = testing::random_state(4, rng, true);
  const CVector zeta = s.mean_vector();
  EXPECT_EQ(zeta.head(4), s.alpha());
  EXPECT_EQ(zeta.tail(4), s.alpha().conjugate());
  EXPECT_EQ(s.conjugate_mean_vector(), zeta.conjugate());
  EXPECT_TRUE(s.has_displacement());

  const GaussianState r = s.restrict_to({3, 1});
  EXPECT_EQ(r.n_mat()(0, 1), s.n_mat()(3, 1));
  EXPECT_EQ(r.m_mat()(1, 1), s.m_mat()(1, 1));
  EXPECT_EQ(r.alpha()(0), s.alpha()(3));
  EXPECT_THROW(s.restrict_to({4}), DomainError);
}

TEST(Adjacency, BlockFormAndSwapIdentity) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianState s = testing::random_state(1 + trial % 4, rng, true);
    const int l = s.ell();
    for (SOrder order : {SOrder::Normal, SOrder::Symmetric, SOrder::AntiNormal}) {
      const CMatrix a = adjacency(s, order).matrix();
      EXPECT_TRUE(a.isApprox(a.transpose(), 1e-12));
      EXPECT_TRUE(a.isApprox(swap_halves(l) * sigma(s, order), 1e-14));
      const double c = (1.0 - to_int(order)) / 2.0;
      EXPECT_TRUE(a.topLeftCorner(l, l).isApprox(s.m_mat().conjugate()));
      EXPECT_TRUE(a.topRightCorner(l, l).isApprox(s.n_mat() + c * CMatrix::Identity(l, l)));
    }
  }
  EXPECT_TRUE(adjacency(GaussianState::vacuum(3)).matrix().isZero());
}

TEST(SOrderTest, Conversion) {
  EXPECT_EQ(s_order_from_int(-1), SOrder::AntiNormal);
  EXPECT_EQ(to_int(SOrder::Symmetric), 0);
  EXPECT_THROW(s_order_from_int(2), DomainError);
}

TEST(InputFamilies, Eccentricities) {
  EXPECT_NEAR((InputFamily{InputKind::Squeezed, 1.0, 1.0}.eccentricity()), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR((InputFamily{InputKind::LossySqueezed, 1.0, 0.5}.eccentricity()), std::sqrt(1.5), 1e-15);
  EXPECT_NEAR((InputFamily{InputKind::Squashed, 1.0, 1.0}.eccentricity()), 1.0, 1e-15);
  EXPECT_EQ((InputFamily{InputKind::Thermal, 1.0, 1.0}.eccentricity()), 0.0);
  EXPECT_THROW((InputFamily{InputKind::LossySqueezed, 1.0, 0.0}.eccentricity()), DomainError);
  EXPECT_THROW((InputFamily{InputKind::LossySqueezed, 1.0, 1.5}.eccentricity()), DomainError);
  EXPECT_THROW((InputFamily{InputKind::Squeezed, -1.0, 1.0}.eccentricity()), DomainError);
  EXPECT_EQ((InputFamily{InputKind::LossySqueezed, 1.0, 0.5}.label()), "lossy_squeezed(0.5)");
  EXPECT_EQ(input_kind_from_string("squashed"), InputKind::Squashed);
  EXPECT_THROW(input_kind_from_string("coherent"), DomainError);
}

TEST(InputFamilies, StateLayout) {
  const GaussianState s = input_family({InputKind::Squeezed, 0.8, 1.0}, 2, 4);
  const double m = std::sqrt(0.8 * 1.8);
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(s.n_mat()(i, i).real(), i < 2 ? 0.8 : 0.0);
    EXPECT_DOUBLE_EQ(s.m_mat()(i, i).real(), i < 2 ? m : 0.0);
  }
  EXPECT_FALSE(s.has_displacement());
  EXPECT_TRUE(input_family({InputKind::Thermal, 1.0, 1.0}, 3, 3).m_mat().isZero());
  const GaussianState lossy = input_family({InputKind::LossySqueezed, 0.8, 1.0}, 2, 4);
  EXPECT_TRUE(lossy.m_mat().isApprox(s.m_mat()));
  EXPECT_THROW(input_family({InputKind::Squeezed, 1.0, 1.0}, 5, 4), DomainError);
  EXPECT_THROW(input_family({InputKind::Squeezed, 1.0, 1.0}, -1, 4), DomainError);
  // Single-mode squeezed adjacency is [[m, n], [n, m]].
  const CMatrix a = adjacency(input_family({InputKind::Squeezed, 0.8, 1.0}, 1, 1)).matrix();
  EXPECT_NEAR(a(0, 0).real(), m, 1e-15);
  EXPECT_NEAR(a(0, 1).real(), 0.8, 1e-15);
}

TEST(Interferometer, TransformationLaw) {
  Rng rng(24);
  const GaussianState s = testing::random_state(4, rng, true);
  const GaussianState same = apply_interferometer(s, CMatrix::Identity(4, 4));
  EXPECT_TRUE(same.n_mat().isApprox(s.n_mat()));
  EXPECT_TRUE(same.m_mat().isApprox(s.m_mat()));

  const CMatrix u = haar_unitary(4, rng);
  const GaussianState out = apply_interferometer(s, u);
  EXPECT_TRUE(out.n_mat().isApprox(u.conjugate() * s.n_mat() * u.transpose(), 1e-12));
  EXPECT_TRUE(out.m_mat().isApprox(u * s.m_mat() * u.transpose(), 1e-12));
  EXPECT_TRUE(out.alpha().isApprox(u * s.alpha(), 1e-12));
  EXPECT_NEAR(std::abs(out.n_mat().trace() - s.n_mat().trace()), 0.0, 1e-12);

  // Phases leave N and every |M_ij| invariant when N is diagonal.
  const GaussianState d = input_family({InputKind::Squeezed, 0.5, 1.0}, 3, 3);
  CVector ph(3);
  ph << std::polar(1.0, 0.3), std::polar(1.0, -1.1), std::polar(1.0, 2.0);
  const GaussianState dp = apply_interferometer(d, ph.asDiagonal().toDenseMatrix());
  EXPECT_TRUE(dp.n_mat().isApprox(d.n_mat()));
  EXPECT_TRUE(dp.m_mat().cwiseAbs().isApprox(d.m_mat().cwiseAbs()));

  CMatrix bad = CMatrix::Identity(4, 4);
  bad(0, 0) = 1.1;
  EXPECT_THROW(apply_interferometer(s, bad), DomainError);
  EXPECT_THROW(apply_interferometer(s, CMatrix::Identity(3, 3)), DomainError);
}

TEST(Loss, Scaling) {
  Rng rng(25);
  const GaussianState s = testing::random_state(3, rng, true);
  const GaussianState same = apply_uniform_loss(s, 1.0);
  EXPECT_TRUE(same.n_mat().isApprox(s.n_mat()));
  const GaussianState lossy = apply_uniform_loss(s, 0.3);
  EXPECT_TRUE(lossy.n_mat().isApprox(0.3 * s.n_mat()));
  EXPECT_TRUE(lossy.m_mat().isApprox(0.3 * s.m_mat()));
  EXPECT_TRUE(lossy.alpha().isApprox(std::sqrt(0.3) * s.alpha()));
  const GaussianState th = apply_uniform_loss(input_family({InputKind::Thermal, 2.0, 1.0}, 1, 1), 0.25);
  EXPECT_DOUBLE_EQ(th.n_mat()(0, 0).real(), 0.5);
  EXPECT_THROW(apply_uniform_loss(s, 1.2), DomainError);
  EXPECT_THROW(apply_uniform_loss(s, -0.1), DomainError);
}

TEST(Quadratures, VacuumAndRoundTrip) {
  const QuadratureState v = to_quadrature(GaussianState::vacuum(3), SOrder::Symmetric);
  EXPECT_TRUE(v.cov.isApprox(RMatrix::Identity(6, 6)));
  EXPECT_TRUE(v.means.isZero());

  const CMatrix r = quadrature_rotation(3);
  EXPECT_TRUE((r * r.adjoint()).isApprox(CMatrix::Identity(6, 6), 1e-14));

  Rng rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianState s = testing::random_state(1 + trial % 4, rng, true);
    for (SOrder order : {SOrder::Normal, SOrder::Symmetric, SOrder::AntiNormal}) {
      for (double hbar : {1.0, 2.0}) {
        const GaussianState back = from_quadrature(to_quadrature(s, order, hbar), order, hbar);
        EXPECT_LE((back.n_mat() - s.n_mat()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((back.m_mat() - s.m_mat()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((back.alpha() - s.alpha()).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace photonstats
