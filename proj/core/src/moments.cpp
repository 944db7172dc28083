#include "photonstats/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "photonstats/errors.hpp"
#include "photonstats/matfunc.hpp"
#include "photonstats/parallel.hpp"

namespace photonstats {

namespace {

__extension__ typedef __int128 Int128;

using LongComplex = std::complex<long double>;
using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<LongComplex, Eigen::Dynamic, 1>;

double checked_real(Complex value, const char* what) {
  if (std::abs(value.imag()) > 1e-8 * (1.0 + std::abs(value.real()))) {
    throw NumericalError(std::string(what) + ": imaginary residue " +
                         std::to_string(value.imag()) + " on a real observable " +
                         std::to_string(value.real()));
  }
  return value.real();
}

void require_pattern_matches(const GaussianState& state, const ModePattern& pattern,
                             const char* what) {
  if (pattern.ell() != state.ell()) {
    throw DomainError(std::string(what) + ": pattern has " + std::to_string(pattern.ell()) +
                      " entries for a " + std::to_string(state.ell()) + "-mode state");
  }
}

std::vector<int> active_modes(const ModePattern& pattern) {
  std::vector<int> modes;
  for (int i = 0; i < pattern.ell(); ++i) {
    if (pattern.powers()[static_cast<std::size_t>(i)] > 0) modes.push_back(i);
  }
  return modes;
}

// log M(t) in extended precision.
LongComplex log_mgf(const GaussianState& state, const std::vector<long double>& t) {
  const int l = state.ell();
  if (static_cast<int>(t.size()) != l) {
    throw DomainError("generating function: expected " + std::to_string(l) +
                      " arguments, got " + std::to_string(t.size()));
  }
  LongVector g(2 * l);
  for (int i = 0; i < l; ++i) {
    if (!std::isfinite(static_cast<double>(t[static_cast<std::size_t>(i)]))) {
      throw DomainError("generating function: non-finite argument");
    }
    const long double gi = std::expm1(t[static_cast<std::size_t>(i)]);
    g(i) = gi;
    g(i + l) = gi;
  }
  const LongMatrix sig = sigma(state, SOrder::Normal).cast<LongComplex>();
  const LongMatrix d = LongMatrix::Identity(2 * l, 2 * l) - g.asDiagonal() * sig;

  // Eigenvalues of I - G Sigma are real for a physical state; the series
  // converges while they all stay positive.
  Eigen::ComplexEigenSolver<LongMatrix> eig(d, false);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (eig.eigenvalues()(i).real() <= 1e-12L) {
      throw DomainError("divergent generating function: I - G Sigma is singular or "
                        "indefinite at this t");
    }
  }
  const Eigen::PartialPivLU<LongMatrix> lu(d);
  // det(I - G Sigma) is real and positive inside the domain, so the principal
  // log of the full product is the right branch for the square root.
  LongComplex det{static_cast<long double>(lu.permutationP().determinant()), 0.0L};
  const LongMatrix& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) det *= packed(i, i);
  const LongComplex log_det = std::log(det);

  const LongVector zeta = state.mean_vector().cast<LongComplex>();
  // zeta^dag (I - G Sigma)^-1 G zeta; G and Sigma do not commute in general.
  const LongVector solved = lu.solve((g.asDiagonal() * zeta).eval());
  const LongComplex quad = (zeta.adjoint() * solved).value();
  return 0.5L * quad - 0.5L * log_det;
}

struct Stencil {
  std::vector<int> offsets;
  std::vector<long double> weights;
};

// Second-order central differences for derivative orders 1..4.
const Stencil& central_stencil(int order) {
  static const std::array<Stencil, 4> stencils = {
      Stencil{{-1, 1}, {-0.5L, 0.5L}},
      Stencil{{-1, 0, 1}, {1.0L, -2.0L, 1.0L}},
      Stencil{{-2, -1, 1, 2}, {-0.5L, 1.0L, -1.0L, 0.5L}},
      Stencil{{-2, -1, 0, 1, 2}, {1.0L, -4.0L, 6.0L, -4.0L, 1.0L}},
  };
  if (order < 1 || order > 4) {
    throw DomainError("moment_via_fd: per-mode derivative order must lie in [1, 4], got " +
                      std::to_string(order));
  }
  return stencils[static_cast<std::size_t>(order - 1)];
}

long double mixed_difference(const GaussianState& state, const std::vector<int>& modes,
                             const std::vector<int>& orders, long double h) {
  const std::size_t r = modes.size();
  std::vector<const Stencil*> st(r);
  int total_order = 0;
  for (std::size_t i = 0; i < r; ++i) {
    st[i] = &central_stencil(orders[i]);
    total_order += orders[i];
  }
  std::vector<std::size_t> pos(r, 0);
  std::vector<long double> t(static_cast<std::size_t>(state.ell()), 0.0L);
  long double acc = 0.0L;
  while (true) {
    long double w = 1.0L;
    for (std::size_t i = 0; i < r; ++i) {
      w *= st[i]->weights[pos[i]];
      t[static_cast<std::size_t>(modes[i])] = h * st[i]->offsets[pos[i]];
    }
    acc += w * std::exp(log_mgf(state, t)).real();

    std::size_t i = 0;
    for (; i < r; ++i) {
      if (++pos[i] < st[i]->offsets.size()) break;
      pos[i] = 0;
    }
    if (i == r) break;
  }
  return acc / std::pow(h, static_cast<long double>(total_order));
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int k = 2; k <= n; ++k) r *= static_cast<std::uint64_t>(k);
  return r;
}

}  // namespace

ModePattern::ModePattern(std::vector<int> powers) : powers_(std::move(powers)) {
  long total = 0;
  for (int p : powers_) {
    if (p < 0) throw DomainError("ModePattern: negative exponent " + std::to_string(p));
    total += p;
  }
  if (total == 0) throw DomainError("ModePattern: at least one exponent must be positive");
  if (total > kMaxTotal) {
    throw ResourceError("ModePattern: total exponent " + std::to_string(total) +
                        " exceeds the guard of " + std::to_string(kMaxTotal));
  }
}

ModePattern ModePattern::from_modes(const std::vector<int>& modes, int ell) {
  std::vector<int> p(static_cast<std::size_t>(ell), 0);
  for (int m : modes) {
    if (m < 0 || m >= ell) throw DomainError("mode " + std::to_string(m) + " out of range");
    ++p[static_cast<std::size_t>(m)];
  }
  return ModePattern(std::move(p));
}

int ModePattern::total() const { return std::accumulate(powers_.begin(), powers_.end(), 0); }

std::uint64_t stirling2(int m, int n) {
  if (n < 1 || n > m || m > 20) {
    throw DomainError("stirling2: need 1 <= n <= m <= 20, got m=" + std::to_string(m) +
                      ", n=" + std::to_string(n));
  }
  // {m n} = (1/n!) sum_k (-1)^(n-k) C(n,k) k^m
  Int128 sum = 0;
  Int128 binom = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    Int128 power = 1;
    for (int e = 0; e < m; ++e) power *= k;
    const Int128 term = binom * power;
    sum += ((n - k) % 2 == 0) ? term : -term;
  }
  Int128 nfact = 1;
  for (int k = 2; k <= n; ++k) nfact *= k;
  if (sum < 0 || sum % nfact != 0) {
    throw NumericalError("stirling2: inexact alternating sum");
  }
  const Int128 result = sum / nfact;
  if (result > static_cast<Int128>(UINT64_MAX)) {
    throw NumericalError("stirling2: result overflows 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

double photon_moment(const GaussianState& state, const ModePattern& pattern) {
  require_pattern_matches(state, pattern, "photon_moment");
  const std::vector<int> modes = active_modes(pattern);
  const GaussianState sub = state.restrict_to(modes);
  const CMatrix a = adjacency(sub, SOrder::Normal).matrix();
  const CVector loops = sub.conjugate_mean_vector();
  const bool displaced = sub.has_displacement();
  const std::size_t r = modes.size();

  std::vector<int> powers(r);
  for (std::size_t i = 0; i < r; ++i) powers[i] = pattern.powers()[static_cast<std::size_t>(modes[i])];

  // Walk every j with 1 <= j_i <= p_i; the repetition vector is j (+) j.
  std::vector<int> j(r, 1);
  std::vector<int> reps(2 * r);
  Complex total{0.0, 0.0};
  while (true) {
    double weight = 1.0;
    for (std::size_t i = 0; i < r; ++i) {
      weight *= static_cast<double>(stirling2(powers[i], j[i]));
      reps[i] = j[i];
      reps[i + r] = j[i];
    }
    const CMatrix repeated = reduction(a, reps);
    const Complex term = displaced ? loop_hafnian(fdiag(repeated, reduction(loops, reps)))
                                   : hafnian(repeated);
    total += weight * term;

    std::size_t i = 0;
    for (; i < r; ++i) {
      if (++j[i] <= powers[i]) break;
      j[i] = 1;
    }
    if (i == r) break;
  }
  return checked_real(total, "photon_moment");
}

double cgf(const GaussianState& state, const std::vector<double>& t) {
  std::vector<long double> tl(t.begin(), t.end());
  const LongComplex k = log_mgf(state, tl);
  return checked_real(Complex(static_cast<double>(k.real()), static_cast<double>(k.imag())), "cgf");
}

double mgf(const GaussianState& state, const std::vector<double>& t) {
  return std::exp(cgf(state, t));
}

double moment_via_fd(const GaussianState& state, const ModePattern& pattern, double h) {
  require_pattern_matches(state, pattern, "moment_via_fd");
  if (!(h > 0.0)) throw DomainError("moment_via_fd: step must be positive");
  const std::vector<int> modes = active_modes(pattern);
  std::vector<int> orders;
  for (int m : modes) orders.push_back(pattern.powers()[static_cast<std::size_t>(m)]);

  // Steps h and 2h; the O(h^2) error term cancels in (4 D(h) - D(2h)) / 3.
  const long double fine = mixed_difference(state, modes, orders, h);
  const long double coarse = mixed_difference(state, modes, orders, 2.0L * h);
  return static_cast<double>((4.0L * fine - coarse) / 3.0L);
}

std::vector<SetPartition> set_partitions(const std::vector<int>& gamma) {
  const int n = static_cast<int>(gamma.size());
  if (n == 0) throw DomainError("set_partitions: empty multiset");
  if (n > kMaxPartitionSize) {
    throw ResourceError("set_partitions: " + std::to_string(n) + " elements exceeds the guard of " +
                        std::to_string(kMaxPartitionSize));
  }
  std::vector<SetPartition> out;
  // Restricted growth string: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  while (true) {
    const int blocks = prefix_max.back() + 1;
    SetPartition p;
    p.blocks.resize(static_cast<std::size_t>(blocks));
    for (int i = 0; i < n; ++i) {
      p.blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(
          gamma[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(p));

    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int k = i + 1; k < n; ++k) {
      a[static_cast<std::size_t>(k)] = 0;
      prefix_max[static_cast<std::size_t>(k)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

double cumulant_via_partitions(const GaussianState& state, const std::vector<int>& gamma) {
  const auto partitions = set_partitions(gamma);

  // Distinct block patterns are evaluated once.
  std::map<std::vector<int>, std::size_t> index;
  std::vector<ModePattern> patterns;
  std::vector<std::vector<std::size_t>> partition_terms(partitions.size());
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    for (const auto& block : partitions[p].blocks) {
      ModePattern pattern = ModePattern::from_modes(block, state.ell());
      auto [it, inserted] = index.emplace(pattern.powers(), patterns.size());
      if (inserted) patterns.push_back(std::move(pattern));
      partition_terms[p].push_back(it->second);
    }
  }
  std::vector<double> moments(patterns.size());
  parallel::for_each_index(patterns.size(),
                           [&](std::size_t i) { moments[i] = photon_moment(state, patterns[i]); });

  const Complex sum = parallel::deterministic_sum(partitions.size(), [&](std::size_t p) {
    const int parts = static_cast<int>(partition_terms[p].size());
    double term = static_cast<double>(factorial(parts - 1));
    if ((parts - 1) % 2 != 0) term = -term;
    for (std::size_t m : partition_terms[p]) term *= moments[m];
    return Complex(term, 0.0);
  });
  return sum.real();
}

double cumulant_via_montrealer(const GaussianState& state, const std::vector<int>& modes,
                               const CumulantOptions& options) {
  if (modes.empty()) throw DomainError("cumulant_via_montrealer: empty mode list");
  std::vector<int> sorted = modes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError(
        "cumulant_via_montrealer: modes repeat; repeated-mode cumulants are only available "
        "through cumulant_via_partitions");
  }
  const GaussianState sub = state.restrict_to(modes);
  const BlockAdjacency a = adjacency(sub, SOrder::Normal);
  Complex value;
  if (sub.has_displacement()) {
    const CVector loops = sub.conjugate_mean_vector();
    value = options.use_reference ? loop_montrealer_ref(a, loops) : loop_montrealer_fast(a, loops);
  } else {
    value = options.use_reference ? montrealer_ref(a) : montrealer_fast(a);
  }
  return checked_real(value, "cumulant_via_montrealer");
}

}  // namespace photonstats
