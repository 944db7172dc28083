#include "photonstats/haar_mc.hpp"

#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "photonstats/errors.hpp"
#include "photonstats/moments.hpp"
#include "photonstats/parallel.hpp"

namespace photonstats {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ull));
}

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(derive_stream_seed(seed, trial));
}

CMatrix haar_unitary(int ell, Rng& rng) {
  if (ell < 1) throw DomainError("haar_unitary: dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(2.0);
  CMatrix z(ell, ell);
  for (Eigen::Index c = 0; c < ell; ++c) {
    for (Eigen::Index r = 0; r < ell; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re * scale, im * scale);
    }
  }
  const Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(ell, ell);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < ell; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

std::uint64_t matrix_digest(const CMatrix& m, std::uint64_t seed) {
  std::uint64_t h = seed;
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(Complex);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

void RunningStats::push(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

double CumulantSummary::standard_error() const {
  return count > 0 ? stddev / std::sqrt(static_cast<double>(count)) : 0.0;
}

const CumulantSummary& CumulantStats::at(int k, int order) const {
  for (const auto& row : rows) {
    if (row.k == k && row.order == order) return row;
  }
  throw DomainError("CumulantStats: no entry for K=" + std::to_string(k) +
                    ", order=" + std::to_string(order));
}

void McConfig::validate() const {
  if (ell < 1 || ell > kMaxLoopMontrealerFastModes) {
    throw DomainError("McConfig: ell must lie in [1, " +
                      std::to_string(kMaxLoopMontrealerFastModes) + "], got " +
                      std::to_string(ell));
  }
  if (k_values.empty()) throw DomainError("McConfig: k_values is empty");
  for (int k : k_values) {
    if (k < 0 || k > ell) {
      throw DomainError("McConfig: K=" + std::to_string(k) + " outside [0, " +
                        std::to_string(ell) + "]");
    }
  }
  if (orders.empty()) throw DomainError("McConfig: orders is empty");
  for (int r : orders) {
    if (r < 1 || r > 4) throw DomainError("McConfig: orders must be a subset of {1,2,3,4}");
    if (r > ell) throw DomainError("McConfig: order " + std::to_string(r) + " exceeds ell");
  }
  if (trials < 1) throw DomainError("McConfig: trials must be >= 1");
  (void)family.eccentricity();
}

CumulantStats run_mc(const McConfig& config) {
  config.validate();
  const std::size_t nk = config.k_values.size();
  const std::size_t no = config.orders.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  std::vector<GaussianState> inputs;
  inputs.reserve(nk);
  for (int k : config.k_values) inputs.push_back(input_family(config.family, k, config.ell));

  std::vector<std::vector<int>> leading_modes;
  for (int r : config.orders) {
    std::vector<int> modes(static_cast<std::size_t>(r));
    std::iota(modes.begin(), modes.end(), 0);
    leading_modes.push_back(std::move(modes));
  }

  // values[(t * nk + k) * no + o]
  std::vector<double> values(trials * nk * no);
  std::vector<std::uint64_t> digests(trials);
  parallel::for_each_index(trials, [&](std::size_t t) {
    Rng rng = trial_rng(config.seed, t);
    const CMatrix u = haar_unitary(config.ell, rng);
    digests[t] = matrix_digest(u);
    for (std::size_t k = 0; k < nk; ++k) {
      const GaussianState out = apply_interferometer(inputs[k], u);
      for (std::size_t o = 0; o < no; ++o) {
        values[(t * nk + k) * no + o] = cumulant_via_montrealer(out, leading_modes[o]);
      }
    }
  });

  CumulantStats stats;
  std::uint64_t digest = 14695981039346656037ull;
  for (std::uint64_t d : digests) {
    digest ^= d;
    digest *= 1099511628211ull;
  }
  stats.unitary_digest = digest;
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t o = 0; o < no; ++o) {
      RunningStats acc;
      for (std::size_t t = 0; t < trials; ++t) acc.push(values[(t * nk + k) * no + o]);
      stats.rows.push_back({config.k_values[k], config.orders[o], acc.mean(), acc.stddev(),
                            acc.count()});
    }
  }
  return stats;
}

std::vector<FamilyStats> family_sweep(const McConfig& base,
                                      const std::vector<InputFamily>& families) {
  std::vector<FamilyStats> out;
  out.reserve(families.size());
  for (const auto& family : families) {
    McConfig config = base;
    config.family = family;
    out.push_back({family, run_mc(config)});
  }
  return out;
}

}  // namespace photonstats
