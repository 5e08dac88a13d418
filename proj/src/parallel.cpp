#include "fraceig/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fraceig::parallel {

int worker_count() {
  if (const char* env = std::getenv("FRACEIG_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) return requested;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    std::size_t min_parallel) {
  const auto workers = static_cast<std::size_t>(worker_count());
  if (workers <= 1 || count < min_parallel) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  const std::size_t blocks = std::min(workers, count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = count * b / blocks;
    const std::size_t end = count * (b + 1) / blocks;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  threads.clear();  // joins
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace fraceig::parallel
