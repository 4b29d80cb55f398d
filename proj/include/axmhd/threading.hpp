// Deterministic row-parallel execution helpers.
//
// Thread count changes scheduling only; every reduction in the code base
// accumulates per-row partials in a fixed order, so results are identical
// for any thread count.
#pragma once

#include <cstddef>
#include <functional>

namespace axmhd {

// Global worker count for parallel_for (1 = serial). Clamped to [1, 256].
void set_num_threads(int n);
int num_threads();

// Runs body(begin, end) over disjoint contiguous chunks of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace axmhd
