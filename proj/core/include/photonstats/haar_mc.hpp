#pragma once

// Haar-random interferometers and the Monte-Carlo study of cumulant
// statistics for K identical single-mode inputs in an ell-mode interferometer.

#include <cstdint>
#include <random>
#include <vector>

#include "photonstats/gaussian.hpp"

namespace photonstats {

using Rng = std::mt19937_64;

/// Seed of stream `stream` derived from `seed` by SplitMix64 finalisation, so
/// trial t always sees the same generator whatever thread runs it.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Complex Ginibre draw, Householder QR, and columns rescaled by the phases
/// of R's diagonal so the result is Haar distributed.
CMatrix haar_unitary(int ell, Rng& rng);

/// FNV-1a over the raw bytes of a matrix; used to fingerprint unitary streams.
std::uint64_t matrix_digest(const CMatrix& m, std::uint64_t seed = 14695981039346656037ull);

/// Welford one-pass mean and variance.
class RunningStats {
 public:
  void push(double x);
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Sample variance (n - 1 denominator); 0 for fewer than two samples.
  double variance() const;
  double stddev() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct McConfig {
  int ell = 8;
  std::vector<int> k_values{2, 4, 8};
  InputFamily family{};
  /// Cumulant orders to record; order r is taken over modes 0..r-1.
  std::vector<int> orders{1, 2, 3, 4};
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;

  /// Throws DomainError on K outside [0, ell], orders outside {1..4} or
  /// above ell, or trials < 1.
  void validate() const;
};

struct CumulantSummary {
  int k = 0;
  int order = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::int64_t count = 0;

  double standard_error() const;
};

struct CumulantStats {
  /// One row per (K, order), K-major in config order.
  std::vector<CumulantSummary> rows;
  /// Fingerprint of the sampled unitaries in trial order.
  std::uint64_t unitary_digest = 0;

  const CumulantSummary& at(int k, int order) const;
};

CumulantStats run_mc(const McConfig& config);

struct FamilyStats {
  InputFamily family;
  CumulantStats stats;
};

/// run_mc for each family with the base config's seed, so every family sees
/// the same unitaries.
std::vector<FamilyStats> family_sweep(const McConfig& base, const std::vector<InputFamily>& families);

}  // namespace photonstats
