#include "photonstats/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "photonstats/errors.hpp"

namespace photonstats {

namespace {

double scale_of(const CMatrix& a) { return std::max(1.0, max_abs(a)); }

std::string format_index(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

double min_hermitian_eigenvalue(const CMatrix& h) {
  if (h.size() == 0) return 0.0;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

SOrder s_order_from_int(int s) {
  switch (s) {
    case -1:
      return SOrder::AntiNormal;
    case 0:
      return SOrder::Symmetric;
    case 1:
      return SOrder::Normal;
    default:
      throw DomainError("s-order must be one of -1, 0, 1; got " + std::to_string(s));
  }
}

int to_int(SOrder s) { return static_cast<int>(s); }

std::string check_physical(const CMatrix& n_mat, const CMatrix& m_mat,
                           const ValidationTolerances& tol) {
  const Eigen::Index l = n_mat.rows();
  const double n_scale = scale_of(n_mat);
  const double m_scale = scale_of(m_mat);

  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = i; j < l; ++j) {
      if (std::abs(n_mat(i, j) - std::conj(n_mat(j, i))) > tol.hermitian * n_scale) {
        return "N is not Hermitian at " + format_index(i, j);
      }
    }
  }
  const double n_min = min_hermitian_eigenvalue(n_mat);
  if (n_min < -tol.psd * n_scale) {
    return "N is not positive semidefinite (smallest eigenvalue " + std::to_string(n_min) + ")";
  }
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = i + 1; j < l; ++j) {
      if (std::abs(m_mat(i, j) - m_mat(j, i)) > tol.symmetric * m_scale) {
        return "M is not symmetric at " + format_index(i, j);
      }
    }
  }
  for (Eigen::Index i = 0; i < l; ++i) {
    const double ni = std::max(0.0, n_mat(i, i).real());
    for (Eigen::Index j = 0; j < l; ++j) {
      const double nj = std::max(0.0, n_mat(j, j).real());
      const double bound = std::min(std::sqrt(ni * (1.0 + nj)), std::sqrt(nj * (1.0 + ni)));
      if (std::abs(m_mat(i, j)) > bound + tol.eccentricity) {
        std::ostringstream msg;
        msg << "|M" << format_index(i, j) << "| = " << std::abs(m_mat(i, j))
            << " exceeds the uncertainty bound min(sqrt(N_ii(1+N_jj)), sqrt(N_jj(1+N_ii))) = "
            << bound;
        return msg.str();
      }
    }
  }

  // Sigma^(1) + Z/2 + I/2 = [[N^T + I, M], [M*, N]] >= 0
  CMatrix u(2 * l, 2 * l);
  u.topLeftCorner(l, l) = n_mat.transpose() + CMatrix::Identity(l, l);
  u.topRightCorner(l, l) = m_mat;
  u.bottomLeftCorner(l, l) = m_mat.conjugate();
  u.bottomRightCorner(l, l) = n_mat;
  const double u_min = min_hermitian_eigenvalue(u);
  if (u_min < -tol.uncertainty) {
    return "uncertainty relation Sigma + Z/2 + I/2 >= 0 violated (smallest eigenvalue " +
           std::to_string(u_min) + ")";
  }
  return {};
}

GaussianState GaussianState::make(CMatrix n_mat, CMatrix m_mat, CVector alpha,
                                  const ValidationTolerances& tol) {
  require_square_finite(n_mat, "GaussianState: N");
  require_square_finite(m_mat, "GaussianState: M");
  if (n_mat.rows() == 0) throw DomainError("GaussianState: at least one mode is required");
  if (m_mat.rows() != n_mat.rows() || alpha.size() != n_mat.rows()) {
    throw DomainError("GaussianState: N (" + std::to_string(n_mat.rows()) + "), M (" +
                      std::to_string(m_mat.rows()) + ") and alpha (" +
                      std::to_string(alpha.size()) + ") disagree on the mode count");
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!std::isfinite(alpha(i).real()) || !std::isfinite(alpha(i).imag())) {
      throw DomainError("GaussianState: displacement has a non-finite entry");
    }
  }
  const std::string violation = check_physical(n_mat, m_mat, tol);
  if (!violation.empty()) throw ValidationError("non-physical Gaussian state: " + violation);
  return GaussianState(std::move(n_mat), std::move(m_mat), std::move(alpha));
}

GaussianState GaussianState::vacuum(int ell) {
  if (ell < 1) throw DomainError("GaussianState::vacuum: mode count must be positive");
  return GaussianState(CMatrix::Zero(ell, ell), CMatrix::Zero(ell, ell), CVector::Zero(ell));
}

CVector GaussianState::mean_vector() const {
  CVector z(2 * ell());
  z << alpha_, alpha_.conjugate();
  return z;
}

CVector GaussianState::conjugate_mean_vector() const {
  CVector z(2 * ell());
  z << alpha_.conjugate(), alpha_;
  return z;
}

bool GaussianState::has_displacement() const { return !alpha_.isZero(0.0); }

GaussianState GaussianState::restrict_to(const std::vector<int>& modes) const {
  const auto k = static_cast<Eigen::Index>(modes.size());
  if (k == 0) throw DomainError("restrict_to: empty mode list");
  CMatrix n(k, k);
  CMatrix m(k, k);
  CVector a(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const int i = modes[static_cast<std::size_t>(r)];
    if (i < 0 || i >= ell()) {
      throw DomainError("restrict_to: mode " + std::to_string(i) + " out of range");
    }
    a(r) = alpha_(i);
    for (Eigen::Index c = 0; c < k; ++c) {
      const int j = modes[static_cast<std::size_t>(c)];
      n(r, c) = n_(i, j);
      m(r, c) = m_(i, j);
    }
  }
  return GaussianState(std::move(n), std::move(m), std::move(a));
}

CMatrix sigma(const GaussianState& state, SOrder s) {
  const Eigen::Index l = state.ell();
  const double c = (1.0 - to_int(s)) / 2.0;
  CMatrix out(2 * l, 2 * l);
  out.topLeftCorner(l, l) = state.n_mat().transpose();
  out.topRightCorner(l, l) = state.m_mat();
  out.bottomLeftCorner(l, l) = state.m_mat().conjugate();
  out.bottomRightCorner(l, l) = state.n_mat();
  out.diagonal().array() += c;
  return out;
}

BlockAdjacency adjacency(const GaussianState& state, SOrder s) {
  const Eigen::Index l = state.ell();
  const double c = (1.0 - to_int(s)) / 2.0;
  const CMatrix shift = c * CMatrix::Identity(l, l);
  CMatrix a(2 * l, 2 * l);
  a.topLeftCorner(l, l) = state.m_mat().conjugate();
  a.topRightCorner(l, l) = state.n_mat() + shift;
  a.bottomLeftCorner(l, l) = state.n_mat().transpose() + shift;
  a.bottomRightCorner(l, l) = state.m_mat();
  return BlockAdjacency(std::move(a));
}

std::string_view to_string(InputKind kind) {
  switch (kind) {
    case InputKind::Squeezed:
      return "squeezed";
    case InputKind::LossySqueezed:
      return "lossy_squeezed";
    case InputKind::Squashed:
      return "squashed";
    case InputKind::Thermal:
      return "thermal";
  }
  return "unknown";
}

InputKind input_kind_from_string(std::string_view name) {
  if (name == "squeezed") return InputKind::Squeezed;
  if (name == "lossy_squeezed") return InputKind::LossySqueezed;
  if (name == "squashed") return InputKind::Squashed;
  if (name == "thermal") return InputKind::Thermal;
  throw DomainError("unknown input family '" + std::string(name) + "'");
}

double InputFamily::eccentricity() const {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("input family: mean photon number must be finite and >= 0");
  }
  switch (kind) {
    case InputKind::Squeezed:
      return std::sqrt(nbar * (nbar + 1.0));
    case InputKind::LossySqueezed:
      if (!(eta > 0.0 && eta <= 1.0)) {
        throw DomainError("lossy_squeezed: transmission eta must lie in (0, 1], got " +
                          std::to_string(eta));
      }
      return std::sqrt(nbar * (nbar + eta));
    case InputKind::Squashed:
      return nbar;
    case InputKind::Thermal:
      return 0.0;
  }
  return 0.0;
}

std::string InputFamily::label() const {
  std::string out(to_string(kind));
  if (kind == InputKind::LossySqueezed) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%g)", eta);
    out += buf;
  }
  return out;
}

GaussianState input_family(const InputFamily& family, int k, int ell) {
  if (ell < 1) throw DomainError("input_family: mode count must be positive");
  if (k < 0 || k > ell) {
    throw DomainError("input_family: occupied mode count K=" + std::to_string(k) +
                      " outside [0, " + std::to_string(ell) + "]");
  }
  const double m = family.eccentricity();
  CMatrix n_mat = CMatrix::Zero(ell, ell);
  CMatrix m_mat = CMatrix::Zero(ell, ell);
  for (int i = 0; i < k; ++i) {
    n_mat(i, i) = family.nbar;
    m_mat(i, i) = m;
  }
  return GaussianState::make(std::move(n_mat), std::move(m_mat), CVector::Zero(ell));
}

GaussianState apply_interferometer(const GaussianState& state, const CMatrix& u) {
  require_square_finite(u, "apply_interferometer");
  const Eigen::Index l = state.ell();
  if (u.rows() != l) {
    throw DomainError("apply_interferometer: unitary is " + std::to_string(u.rows()) +
                      "x" + std::to_string(u.rows()) + " for a " + std::to_string(l) +
                      "-mode state");
  }
  const double defect = max_abs(u.adjoint() * u - CMatrix::Identity(l, l));
  if (defect > 1e-10) {
    throw DomainError("apply_interferometer: matrix is not unitary (max |U^dag U - I| = " +
                      std::to_string(defect) + ")");
  }
  CMatrix n_out = u.conjugate() * state.n_mat() * u.transpose();
  CMatrix m_out = u * state.m_mat() * u.transpose();
  CVector a_out = u * state.alpha();
  return GaussianState::make(std::move(n_out), std::move(m_out), std::move(a_out));
}

GaussianState apply_uniform_loss(const GaussianState& state, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("apply_uniform_loss: transmission must lie in [0, 1], got " +
                      std::to_string(eta));
  }
  return GaussianState::make(eta * state.n_mat(), eta * state.m_mat(),
                             std::sqrt(eta) * state.alpha());
}

CMatrix quadrature_rotation(int ell) {
  const Complex i{0.0, 1.0};
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix rot(2 * ell, 2 * ell);
  const CMatrix id = CMatrix::Identity(ell, ell);
  rot.topLeftCorner(ell, ell) = r * id;
  rot.topRightCorner(ell, ell) = (r * i) * id;
  rot.bottomLeftCorner(ell, ell) = r * id;
  rot.bottomRightCorner(ell, ell) = (-r * i) * id;
  return rot;
}

QuadratureState to_quadrature(const GaussianState& state, SOrder s, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("to_quadrature: hbar must be positive");
  const CMatrix rot = quadrature_rotation(state.ell());
  const CMatrix v = hbar * rot.adjoint() * sigma(state, s) * rot;
  const CVector r = std::sqrt(hbar) * rot.adjoint() * state.mean_vector();
  const double v_imag = v.imag().cwiseAbs().maxCoeff();
  const double r_imag = r.size() == 0 ? 0.0 : r.imag().cwiseAbs().maxCoeff();
  if (v_imag > 1e-12 * std::max(1.0, max_abs(v)) || r_imag > 1e-12 * std::max(1.0, r.cwiseAbs().maxCoeff())) {
    throw NumericalError("to_quadrature: quadrature covariance is not real");
  }
  return {v.real(), r.real()};
}

GaussianState from_quadrature(const QuadratureState& q, SOrder s, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("from_quadrature: hbar must be positive");
  if (q.cov.rows() != q.cov.cols() || q.cov.rows() % 2 != 0 || q.cov.rows() == 0 ||
      q.means.size() != q.cov.rows()) {
    throw DomainError("from_quadrature: covariance must be 2l x 2l with 2l means");
  }
  const int l = static_cast<int>(q.cov.rows() / 2);
  const CMatrix rot = quadrature_rotation(l);
  const CMatrix sig = rot * q.cov.cast<Complex>() * rot.adjoint() / hbar;
  const CVector zeta = rot * q.means.cast<Complex>() / std::sqrt(hbar);
  const double c = (1.0 - to_int(s)) / 2.0;
  CMatrix n_mat = sig.bottomRightCorner(l, l);
  n_mat.diagonal().array() -= c;
  CMatrix m_mat = sig.topRightCorner(l, l);
  CVector alpha = zeta.head(l);
  return GaussianState::make(std::move(n_mat), std::move(m_mat), std::move(alpha));
}

}  // namespace photonstats
