#pragma once

#include <cstddef>
#include <functional>

namespace hyperns {

/// Number of worker threads used by parallel_for; 1 means run inline.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n), splitting the range into contiguous blocks.
/// Bodies must write disjoint outputs; results then do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hyperns
