#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "photonstats/linalg.hpp"

namespace photonstats::parallel {

/// Upper bound on worker threads used by the library. 0 restores the default
/// (hardware concurrency). Results never depend on this value.
void set_max_threads(unsigned threads);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Work is handed out in fixed-size chunks;
/// callers must only write to slot i of their own output.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sum of term(i) over [0, count) with a reduction order that depends only on
/// `count`: terms are summed sequentially inside blocks of `kBlock`, block sums
/// are combined by a pairwise tree.
inline constexpr std::size_t kBlock = 256;
Complex deterministic_sum(std::size_t count, const std::function<Complex(std::size_t)>& term);

/// Pairwise tree sum of an ordered list.
Complex pairwise_sum(const std::vector<Complex>& values);

}  // namespace photonstats::parallel
