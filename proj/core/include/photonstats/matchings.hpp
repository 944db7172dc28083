#pragma once

// Enumeration of the matching sets behind the brute-force matrix functions.
//
// Vertices are 0-based. A matching over m vertices is stored as a partner
// table: partner(v) is the vertex matched to v, or v itself when v carries a
// loop. That table is already canonical, so two matchings are equal iff their
// tables are equal; pairs() lists edges as (i, j) with i < j in lexicographic
// order.
//
// Sets:
//   PMP(m)   loop-free perfect matchings, (m-1)!! elements
//   SPM(m)   matchings with loops allowed (involutions), T(m) elements
//   RPMP(l)  loop-free matchings of 2l vertices whose union with
//            Y = {(k, k+l)} is one closed alternating cycle, (2l-2)!! elements
//   RSPM(l)  RPMP(l) plus the open alternating walks ending on two loops,
//            (l+1)(2l-2)!! elements

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

namespace photonstats {

class PairMatching {
 public:
  static constexpr int kMaxVertices = 20;

  PairMatching() = default;

  /// Builds and validates a matching over `vertices` vertices. Throws
  /// DomainError unless every vertex is covered exactly once.
  PairMatching(int vertices, const std::vector<std::pair<int, int>>& pairs,
               const std::vector<int>& loops = {});

  /// Identity (all loops) over `vertices` vertices.
  static PairMatching all_loops(int vertices);

  int vertices() const { return size_; }
  int partner(int v) const { return partner_[static_cast<std::size_t>(v)]; }
  bool is_loop(int v) const { return partner(v) == v; }
  int loop_count() const;

  std::vector<std::pair<int, int>> pairs() const;
  std::vector<int> loops() const;

  /// In-place edits used by the generators; no validation.
  void set_pair(int i, int j) {
    partner_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(j);
    partner_[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(i);
  }
  void set_loop(int v) { partner_[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v); }

  friend auto operator<=>(const PairMatching&, const PairMatching&) = default;
  friend bool operator==(const PairMatching&, const PairMatching&) = default;

 private:
  std::array<std::uint8_t, kMaxVertices> partner_{};
  std::uint8_t size_ = 0;
};

/// Guards on the enumerations (the lists grow super-exponentially).
inline constexpr int kMaxPmpVertices = 16;
inline constexpr int kMaxSpmVertices = 14;
inline constexpr int kMaxRpmpModes = 9;
inline constexpr int kMaxRspmModes = 8;

std::vector<PairMatching> gen_pmp(int m);
std::vector<PairMatching> gen_spm(int m);
std::vector<PairMatching> gen_rpmp(int ell);
std::vector<PairMatching> gen_rspm(int ell);

/// The matching {(k, k+ell)} that alternating walks are taken against.
struct WalkBase {
  explicit WalkBase(int ell);

  int ell;
  std::vector<std::pair<int, int>> y_edges;

  int partner(int v) const { return v < ell ? v + ell : v - ell; }
};

/// True iff x joined with Y forms a single closed alternating cycle through
/// all 2*ell vertices (x loop-free), or a single open alternating walk through
/// all vertices whose two endpoints are x's only two loops.
bool is_y_alternating(const PairMatching& x, int ell);

/// Starting matching of the restricted construction: {(k, ell + (k+1) mod ell)}.
PairMatching fiducial_restricted_matching(int ell);

namespace detail {
/// Raw output of the restricted construction before deduplication: the
/// fiducial matching under 2^(ell-1) swap masks and (ell-1)! joint
/// permutations that fix vertex 0.
std::vector<PairMatching> rpmp_construction(int ell);
}  // namespace detail

/// (n)!! for n >= -1, as an exact integer.
std::uint64_t double_factorial(int n);

}  // namespace photonstats
