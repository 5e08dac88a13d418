#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fraceig::parallel {

/// Worker count: FRACEIG_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count). Iterations are split into contiguous
/// blocks, one per worker; below min_parallel the loop runs inline.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    std::size_t min_parallel = 256);

/// Pairwise (tree) summation in a fixed order, independent of threading.
double pairwise_sum(std::span<const double> values);

}  // namespace fraceig::parallel
