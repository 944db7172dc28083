#pragma once

// Multimode Gaussian states in the (N, M, alpha) parametrisation:
//   N_ij = <a_i^dag a_j> - <a_i^dag><a_j>   (Hermitian, PSD)
//   M_ij = <a_i a_j>     - <a_i><a_j>       (symmetric)
//   alpha_i = <a_i>
// Mode indices are 0-based.

#include <string>
#include <string_view>
#include <vector>

#include "photonstats/linalg.hpp"
#include "photonstats/matfunc.hpp"

namespace photonstats {

/// Operator ordering of the covariance matrix: normal (+1), symmetric (0),
/// anti-normal (-1).
enum class SOrder : int { AntiNormal = -1, Symmetric = 0, Normal = 1 };

/// Throws DomainError for anything outside {-1, 0, 1}.
SOrder s_order_from_int(int s);
int to_int(SOrder s);

/// Tolerances used by state validation. The defaults cover the rounding of a
/// few dozen unitary conjugations.
struct ValidationTolerances {
  double hermitian = 1e-10;
  double psd = 1e-10;
  double symmetric = 1e-10;
  double eccentricity = 1e-9;
  double uncertainty = 1e-9;
};

class GaussianState {
 public:
  /// Validates physicality; throws ValidationError naming the violated
  /// invariant, DomainError on inconsistent shapes.
  static GaussianState make(CMatrix n_mat, CMatrix m_mat, CVector alpha,
                            const ValidationTolerances& tol = {});

  static GaussianState vacuum(int ell);

  int ell() const { return static_cast<int>(n_.rows()); }
  const CMatrix& n_mat() const { return n_; }
  const CMatrix& m_mat() const { return m_; }
  const CVector& alpha() const { return alpha_; }

  /// zeta = (alpha, alpha*)
  CVector mean_vector() const;
  /// zeta* = (alpha*, alpha): the loop weights of the adjacency graph.
  CVector conjugate_mean_vector() const;
  bool has_displacement() const;

  /// State of the listed modes only (rows/columns of N, M and entries of alpha).
  GaussianState restrict_to(const std::vector<int>& modes) const;

 private:
  GaussianState(CMatrix n_mat, CMatrix m_mat, CVector alpha)
      : n_(std::move(n_mat)), m_(std::move(m_mat)), alpha_(std::move(alpha)) {}

  CMatrix n_;
  CMatrix m_;
  CVector alpha_;
};

/// Returns an empty string for a physical state, otherwise a description of
/// the first violated invariant.
std::string check_physical(const CMatrix& n_mat, const CMatrix& m_mat,
                           const ValidationTolerances& tol = {});

/// Sigma^(s) = ((1-s)/2) I + [[N^T, M], [M*, N]]
CMatrix sigma(const GaussianState& state, SOrder s);

/// A^(s) = X Sigma^(s) = [[M*, N + cI], [N^T + cI, M]], c = (1-s)/2
BlockAdjacency adjacency(const GaussianState& state, SOrder s = SOrder::Normal);

enum class InputKind { Squeezed, LossySqueezed, Squashed, Thermal };

std::string_view to_string(InputKind kind);
/// Accepts "squeezed", "lossy_squeezed", "squashed", "thermal".
InputKind input_kind_from_string(std::string_view name);

/// One single-mode family member: its kind, mean photon number and, for lossy
/// squeezed light, the transmission eta.
struct InputFamily {
  InputKind kind = InputKind::Squeezed;
  double nbar = 1.0;
  double eta = 1.0;

  /// Eccentricity m = <a^2> of one input mode.
  double eccentricity() const;
  /// "squeezed", "lossy_squeezed(0.5)", ...
  std::string label() const;
};

/// N_in = nbar (1_K + 0), M_in = m (1_K + 0) over ell modes, zero displacement.
GaussianState input_family(const InputFamily& family, int k, int ell);

/// N -> U* N U^T, M -> U M U^T, alpha -> U alpha.
GaussianState apply_interferometer(const GaussianState& state, const CMatrix& u);

/// Pure loss with transmission eta on every mode: N -> eta N, M -> eta M,
/// alpha -> sqrt(eta) alpha.
GaussianState apply_uniform_loss(const GaussianState& state, double eta);

/// R = (1/sqrt 2) [[I, iI], [I, -iI]], zeta = R r / sqrt(hbar).
CMatrix quadrature_rotation(int ell);

/// Quadrature-ordered (q_1..q_l, p_1..p_l) covariance and means.
struct QuadratureState {
  RMatrix cov;
  RVector means;
};

inline constexpr double kDefaultHbar = 2.0;

/// V^(s) = hbar R^dag Sigma^(s) R and r = sqrt(hbar) R^dag zeta.
QuadratureState to_quadrature(const GaussianState& state, SOrder s, double hbar = kDefaultHbar);
GaussianState from_quadrature(const QuadratureState& q, SOrder s, double hbar = kDefaultHbar);

}  // namespace photonstats
