#pragma once

// Photon-number moments and cumulants of Gaussian states.
//
// Moments are normal-ordered expansions of products of n_i = a_i^dag a_i,
// evaluated as Stirling-weighted loop hafnians of the repeated adjacency
// matrix. Cumulants come either from the moment/partition (Moebius) sum or
// from the loop Montrealer of the adjacency matrix restricted to the modes.

#include <cstdint>
#include <vector>

#include "photonstats/gaussian.hpp"

namespace photonstats {

/// Exponent p_i of n_i for every mode.
class ModePattern {
 public:
  /// Largest total exponent sum(p); the repeated matrix has size 2 sum(p).
  static constexpr int kMaxTotal = 12;

  /// Throws DomainError on negative entries or an all-zero pattern and
  /// ResourceError when sum(p) exceeds kMaxTotal.
  explicit ModePattern(std::vector<int> powers);

  /// Pattern counting how often each mode occurs in `modes`.
  static ModePattern from_modes(const std::vector<int>& modes, int ell);

  const std::vector<int>& powers() const { return powers_; }
  int ell() const { return static_cast<int>(powers_.size()); }
  int total() const;

 private:
  std::vector<int> powers_;
};

/// A partition of the positions 0..|gamma|-1 of a mode multiset; each block
/// lists the mode labels at its positions.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
};

/// Stirling number of the second kind {m over n} for 1 <= n <= m <= 20,
/// evaluated from the alternating binomial sum in 128-bit integers.
std::uint64_t stirling2(int m, int n);

/// <n_1^p_1 ... n_l^p_l>. Throws NumericalError if the loop-hafnian sum has
/// an imaginary part above 1e-8 (1 + |value|).
double photon_moment(const GaussianState& state, const ModePattern& pattern);

/// M(t) = <exp(t . n)> and K(t) = log M(t). Throw DomainError when
/// I - G Sigma is singular or the series has left its domain of convergence.
double mgf(const GaussianState& state, const std::vector<double>& t);
double cgf(const GaussianState& state, const std::vector<double>& t);

/// Mixed central finite differences of mgf at t = 0 with step h and one
/// Richardson level. The generating function is evaluated in extended
/// precision so fourth-order stencils keep ~1e-6 relative accuracy.
inline constexpr double kFiniteDifferenceStep = 1e-3;
double moment_via_fd(const GaussianState& state, const ModePattern& pattern,
                     double h = kFiniteDifferenceStep);

/// All partitions of the positions of gamma (restricted growth strings, in
/// lexicographic order); Bell(|gamma|) entries.
inline constexpr int kMaxPartitionSize = 10;
std::vector<SetPartition> set_partitions(const std::vector<int>& gamma);

/// <<n_g1 ... n_gm>> = sum_pi (|pi|-1)! (-1)^(|pi|-1) prod_blocks <prod n_i>.
/// gamma may repeat modes.
double cumulant_via_partitions(const GaussianState& state, const std::vector<int>& gamma);

struct CumulantOptions {
  /// Use the brute-force loop Montrealer instead of the power-trace one.
  bool use_reference = false;
};

/// Cumulant of distinct modes from the loop Montrealer of the restricted
/// adjacency matrix. Repeated modes throw DomainError (use the partition path).
double cumulant_via_montrealer(const GaussianState& state, const std::vector<int>& modes,
                               const CumulantOptions& options = {});

}  // namespace photonstats
