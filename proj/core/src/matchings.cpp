#include "photonstats/matchings.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "photonstats/errors.hpp"

namespace photonstats {

namespace {

void require_vertex_count(int m, int guard, const char* what) {
  if (m <= 0 || m % 2 != 0) {
    throw DomainError(std::string(what) + ": vertex count must be even and positive, got " +
                      std::to_string(m));
  }
  if (m > guard) {
    throw ResourceError(std::string(what) + ": " + std::to_string(m) +
                        " vertices exceeds the enumeration guard of " + std::to_string(guard));
  }
}

void require_modes(int ell, int guard, const char* what) {
  if (ell < 1) {
    throw DomainError(std::string(what) + ": mode count must be positive, got " +
                      std::to_string(ell));
  }
  if (ell > guard) {
    throw ResourceError(std::string(what) + ": " + std::to_string(ell) +
                        " modes exceeds the enumeration guard of " + std::to_string(guard));
  }
}

// Depth-first enumeration: the lowest free vertex is either looped (when
// allowed) or paired with a later free vertex.
void enumerate(PairMatching& current, std::vector<bool>& used, int m, bool allow_loops,
               std::vector<PairMatching>& out) {
  int first = 0;
  while (first < m && used[static_cast<std::size_t>(first)]) ++first;
  if (first == m) {
    out.push_back(current);
    return;
  }
  used[static_cast<std::size_t>(first)] = true;
  if (allow_loops) {
    current.set_loop(first);
    enumerate(current, used, m, allow_loops, out);
  }
  for (int j = first + 1; j < m; ++j) {
    if (used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(j)] = true;
    current.set_pair(first, j);
    enumerate(current, used, m, allow_loops, out);
    used[static_cast<std::size_t>(j)] = false;
  }
  used[static_cast<std::size_t>(first)] = false;
}

std::vector<PairMatching> enumerate_all(int m, bool allow_loops) {
  std::vector<PairMatching> out;
  PairMatching current = PairMatching::all_loops(m);
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  enumerate(current, used, m, allow_loops, out);
  return out;
}

void sort_unique(std::vector<PairMatching>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

PairMatching::PairMatching(int vertices, const std::vector<std::pair<int, int>>& pairs,
                           const std::vector<int>& loops) {
  if (vertices < 0 || vertices > kMaxVertices) {
    throw DomainError("PairMatching: vertex count " + std::to_string(vertices) +
                      " outside [0, " + std::to_string(kMaxVertices) + "]");
  }
  size_ = static_cast<std::uint8_t>(vertices);
  std::vector<int> seen(static_cast<std::size_t>(vertices), 0);
  auto mark = [&](int v) {
    if (v < 0 || v >= vertices) {
      throw DomainError("PairMatching: vertex " + std::to_string(v) + " out of range");
    }
    if (seen[static_cast<std::size_t>(v)]++ != 0) {
      throw DomainError("PairMatching: vertex " + std::to_string(v) + " covered twice");
    }
  };
  for (auto [i, j] : pairs) {
    if (i == j) throw DomainError("PairMatching: pair joins a vertex to itself");
    mark(i);
    mark(j);
    set_pair(i, j);
  }
  for (int v : loops) {
    mark(v);
    set_loop(v);
  }
  for (int v = 0; v < vertices; ++v) {
    if (seen[static_cast<std::size_t>(v)] == 0) {
      throw DomainError("PairMatching: vertex " + std::to_string(v) + " not covered");
    }
  }
}

PairMatching PairMatching::all_loops(int vertices) {
  PairMatching out;
  if (vertices < 0 || vertices > kMaxVertices) {
    throw DomainError("PairMatching: vertex count out of range");
  }
  out.size_ = static_cast<std::uint8_t>(vertices);
  for (int v = 0; v < vertices; ++v) out.set_loop(v);
  return out;
}

int PairMatching::loop_count() const {
  int n = 0;
  for (int v = 0; v < size_; ++v) n += is_loop(v) ? 1 : 0;
  return n;
}

std::vector<std::pair<int, int>> PairMatching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < size_; ++v) {
    if (partner(v) > v) out.emplace_back(v, partner(v));
  }
  return out;
}

std::vector<int> PairMatching::loops() const {
  std::vector<int> out;
  for (int v = 0; v < size_; ++v) {
    if (is_loop(v)) out.push_back(v);
  }
  return out;
}

std::uint64_t double_factorial(int n) {
  std::uint64_t r = 1;
  for (int k = n; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

std::vector<PairMatching> gen_pmp(int m) {
  require_vertex_count(m, kMaxPmpVertices, "gen_pmp");
  auto out = enumerate_all(m, false);
  sort_unique(out);
  return out;
}

std::vector<PairMatching> gen_spm(int m) {
  require_vertex_count(m, kMaxSpmVertices, "gen_spm");
  auto out = enumerate_all(m, true);
  sort_unique(out);
  return out;
}

WalkBase::WalkBase(int ell_) : ell(ell_) {
  if (ell < 1) throw DomainError("WalkBase: mode count must be positive");
  for (int k = 0; k < ell; ++k) y_edges.emplace_back(k, k + ell);
}

bool is_y_alternating(const PairMatching& x, int ell) {
  const int m = 2 * ell;
  if (ell < 1 || x.vertices() != m) return false;
  const WalkBase y(ell);
  const int loops = x.loop_count();

  if (loops == 0) {
    // Follow x-edge, Y-edge, x-edge, ... from vertex 0 until the cycle closes.
    int v = 0;
    int visited = 0;
    do {
      v = y.partner(x.partner(v));
      visited += 2;
    } while (v != 0 && visited < m);
    return v == 0 && visited == m;
  }

  if (loops == 2) {
    const auto ends = x.loops();
    // From one looped endpoint: Y-edge, then x-edge, ... until the other loop.
    int v = ends[0];
    int visited = 1;
    while (true) {
      v = y.partner(v);
      ++visited;
      if (x.is_loop(v)) break;
      v = x.partner(v);
      ++visited;
      if (visited > m) return false;
    }
    return v == ends[1] && visited == m;
  }
  return false;
}

PairMatching fiducial_restricted_matching(int ell) {
  if (ell < 1 || 2 * ell > PairMatching::kMaxVertices) {
    throw DomainError("fiducial_restricted_matching: mode count out of range");
  }
  PairMatching x = PairMatching::all_loops(2 * ell);
  for (int k = 0; k < ell; ++k) x.set_pair(k, ell + (k + 1) % ell);
  return x;
}

namespace detail {

std::vector<PairMatching> rpmp_construction(int ell) {
  require_modes(ell, kMaxRpmpModes, "gen_rpmp");
  const PairMatching fid = fiducial_restricted_matching(ell);
  const int m = 2 * ell;

  std::vector<PairMatching> out;
  out.reserve(static_cast<std::size_t>(double_factorial(m - 2)));

  // perm acts on mode labels 1..ell-1 (mode 0 is fixed); each mode label k
  // moves both vertex k and vertex k+ell.
  std::vector<int> perm(static_cast<std::size_t>(ell));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> image(static_cast<std::size_t>(m));
  do {
    const std::uint32_t masks = 1u << (ell - 1);
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      for (int k = 0; k < ell; ++k) {
        const int target = perm[static_cast<std::size_t>(k)];
        const bool swap = k > 0 && ((mask >> (k - 1)) & 1u) != 0;
        image[static_cast<std::size_t>(k)] = swap ? target + ell : target;
        image[static_cast<std::size_t>(k + ell)] = swap ? target : target + ell;
      }
      PairMatching x = PairMatching::all_loops(m);
      for (int v = 0; v < m; ++v) {
        const int w = fid.partner(v);
        if (w > v) {
          x.set_pair(image[static_cast<std::size_t>(v)], image[static_cast<std::size_t>(w)]);
        }
      }
      out.push_back(x);
    }
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return out;
}

}  // namespace detail

std::vector<PairMatching> gen_rpmp(int ell) {
  auto out = detail::rpmp_construction(ell);
  sort_unique(out);
  return out;
}

std::vector<PairMatching> gen_rspm(int ell) {
  require_modes(ell, kMaxRspmModes, "gen_rspm");
  const auto base = gen_rpmp(ell);
  std::vector<PairMatching> out;
  out.reserve(base.size() * static_cast<std::size_t>(ell + 1));
  for (const auto& x : base) {
    out.push_back(x);
    for (int v = 0; v < 2 * ell; ++v) {
      const int w = x.partner(v);
      if (w <= v) continue;
      PairMatching broken = x;
      broken.set_loop(v);
      broken.set_loop(w);
      out.push_back(broken);
    }
  }
  sort_unique(out);
  return out;
}

}  // namespace photonstats
